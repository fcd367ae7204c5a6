"""Experiment runner: ``iqsim SUBCOMMAND --config FILE --out FILE``.

Subcommands
-----------
two-qubit    correlation dynamics (coherence, concurrence, discord) of a
             Bell pair under selective path measurement vs the mixture
decoherence  the same with a dissipative three-path register (--gamma)
teleport     standard and participatory teleportation fidelities
qfi          quantum Fisher information of the phase written on one qubit
wpei         predictability/visibility/entanglement/ignorance budget
verify       exact-diagonalization verification suite (--level quick|full)

All data runs read a sectioned ``key = value`` config (see docs/formats.md
for every schema) and write a deterministic CSV: identical inputs give
byte-identical files.  Erased measurement branches become NaN rows with
flag ``erased``; rows whose state fails a physicality check are flagged
``unphysical``.  Exit codes: 0 ok, 1 config error, 2 numerical failure,
3 verification failure.
"""

from __future__ import annotations

import argparse
import math
import re
import sys

import numpy as np

from . import assembly, teleport
from .config import (
    ConfigError,
    Field,
    as_bool,
    as_float,
    as_int,
    as_ints,
    as_strs,
    beta_from,
    parse_config,
)
from .csvio import write_csv
from .interferometer import (
    ConstantCoupling,
    ErasedStateError,
    PathEnsemble,
    PositionCoupling,
    SingleQubitPathEngine,
    TwoQubitPathEngine,
    evolve_path_lindblad,
)
from .measures import (
    concurrence,
    geometric_discord,
    l1_coherence,
    qfi,
    teleport_fidelity_max,
    wpei,
)
from .validation import density_report, partial_trace

_PATH_TEMP = re.compile(r"T\d+")
_PATH_BETA = re.compile(r"beta\d+")

_BATH_SCHEMA = {
    "N": Field(as_int, required=True),
    "s": Field(as_float, required=True),
    "f": Field(as_float, required=True),
    "T": Field(as_float),
    "beta": Field(as_float),
}

_RUN_SCHEMA = {
    "t_max": Field(as_float, required=True),
    "steps": Field(as_int, default=400),
}

_TWO_QUBIT_SCHEMA = {
    "system": {
        "omega1": Field(as_float, required=True),
        "omega2": Field(as_float, required=True),
        "J": Field(as_float),
    },
    "bath": _BATH_SCHEMA,
    "paths": {
        "M": Field(as_int, required=True),
        "shifts": Field(as_ints),
        "patterns": Field(as_strs),
        "paths": Field(as_ints),
        "n": Field(as_int),
        "mixture": Field(as_bool, default=True),
        "gamma": Field(as_float),
        "d": Field(as_float),
        _PATH_TEMP: Field(as_float),
        _PATH_BETA: Field(as_float),
    },
    "run": _RUN_SCHEMA,
}

_DECOHERENCE_SCHEMA = dict(_TWO_QUBIT_SCHEMA)
_DECOHERENCE_SCHEMA["decoherence"] = {"Gamma": Field(as_float, required=True)}

_TELEPORT_SCHEMA = {
    "system": {
        "omega1": Field(as_float, required=True),
        "omega2": Field(as_float, required=True),
    },
    "bath": _BATH_SCHEMA,
    "paths": {
        "T0": Field(as_float),
        "T1": Field(as_float),
        "beta0": Field(as_float),
        "beta1": Field(as_float),
    },
    "run": _RUN_SCHEMA,
}

_QFI_SCHEMA = {
    "system": {"omega1": Field(as_float, required=True)},
    "bath": _BATH_SCHEMA,
    "paths": {
        "M": Field(as_int),
        "shifts": Field(as_ints),
        "paths": Field(as_ints),
        "n": Field(as_int),
        "definite": Field(as_bool, default=True),
    },
    "run": _RUN_SCHEMA,
}

_WPEI_SCHEMA = {
    "system": {"omega1": Field(as_float, required=True)},
    "bath": _BATH_SCHEMA,
    "paths": {
        "T0": Field(as_float),
        "T1": Field(as_float),
        "beta0": Field(as_float),
        "beta1": Field(as_float),
    },
    "wpei": {
        "alpha": Field(as_float, required=True),
        "theta": Field(as_float, required=True),
    },
    "run": _RUN_SCHEMA,
}


def _load_config(path, schema):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    return parse_config(text, schema)


def _time_grid(run_cfg):
    steps = run_cfg["steps"]
    if steps < 2:
        raise ConfigError("[run] steps must be at least 2")
    if run_cfg["t_max"] <= 0:
        raise ConfigError("[run] t_max must be positive")
    return np.linspace(0.0, run_cfg["t_max"], steps)


def _path_betas(paths_cfg, M):
    """Per-path inverse temperatures from T0.../beta0... keys, if present."""
    indexed = {}
    for key, value in paths_cfg.items():
        if isinstance(key, str) and _PATH_TEMP.fullmatch(key):
            idx = int(key[1:])
            indexed[idx] = math.inf if value == 0 else 1.0 / value
        elif isinstance(key, str) and _PATH_BETA.fullmatch(key):
            idx = int(key[4:])
            if idx in indexed:
                raise ConfigError(f"path {idx}: give T{idx} or beta{idx}, not both")
            indexed[idx] = float(value)
    if not indexed:
        return None
    missing = sorted(set(range(M)) - set(indexed))
    if missing:
        raise ConfigError(f"missing per-path temperatures for paths {missing}")
    extra = sorted(set(indexed) - set(range(M)))
    if extra:
        raise ConfigError(f"per-path temperatures for nonexistent paths {extra}")
    return tuple(indexed[i] for i in range(M))


def _two_qubit_engine(cfg):
    bath = cfg["bath"]
    paths = cfg["paths"]
    M = paths["M"]
    betas = _path_betas(paths, M)
    if betas is None:
        beta = beta_from(bath)
        if beta is None:
            raise ConfigError("give [bath] T/beta or per-path [paths] T0...")
        betas = (beta,) * M
    if "gamma" in paths or "d" in paths:
        if not ("gamma" in paths and "d" in paths):
            raise ConfigError("position-dependent coupling needs both "
                              "[paths] gamma and d")
        if "J" in cfg["system"]:
            raise ConfigError("give either [system] J or [paths] gamma/d")
        coupling = PositionCoupling(gamma=paths["gamma"], d=paths["d"])
    else:
        if "J" not in cfg["system"]:
            raise ConfigError("constant coupling needs [system] J")
        coupling = ConstantCoupling(J=cfg["system"]["J"])
    ensemble = PathEnsemble(M=M, betas=betas, coupling=coupling)
    engine = TwoQubitPathEngine(
        omega1=cfg["system"]["omega1"], omega2=cfg["system"]["omega2"],
        N=bath["N"], s=bath["s"], f=bath["f"], ensemble=ensemble)
    return engine


def _pattern_phases(pattern, M):
    if len(pattern) != M or any(ch not in "01" for ch in pattern):
        raise ConfigError(
            f"pattern {pattern!r} must be {M} characters of 0 (keep) / 1 (pi)")
    return tuple(math.pi if ch == "1" else 0.0 for ch in pattern)


def _two_qubit_curves(cfg, engine):
    """[(label, kind, payload, engine)] for every configured curve.

    Kinds: ``mixture`` (trace the registers), ``uniform`` (weight-formula
    measurement, payload = flip count), ``pattern`` (explicit phase list).
    A ``paths`` sweep builds one engine per path count.
    """
    paths = cfg["paths"]
    curves = []
    if paths["mixture"]:
        curves.append(("mix", "mixture", None, engine))
    uniform = (len(set(engine.ensemble.betas)) == 1
               and isinstance(engine.ensemble.coupling, ConstantCoupling))
    if "shifts" in paths:
        if not uniform:
            raise ConfigError("[paths] shifts needs identical baths and "
                              "constant J; use patterns instead")
        for n in paths["shifts"]:
            if not 0 <= n <= paths["M"]:
                raise ConfigError(f"shift count {n} outside 0..{paths['M']}")
            curves.append((str(n), "uniform", n, engine))
    for pattern in paths.get("patterns", ()):
        curves.append((pattern, "pattern",
                       _pattern_phases(pattern, paths["M"]), engine))
    if "paths" in paths:
        if not uniform:
            raise ConfigError("a [paths] paths sweep needs identical baths "
                              "and constant J")
        n = paths.get("n", 1)
        for m in paths["paths"]:
            if not 0 <= n <= m:
                raise ConfigError(f"shift count {n} outside 0..{m}")
            eng = TwoQubitPathEngine(
                omega1=engine.omega1, omega2=engine.omega2, N=engine.N,
                s=engine.s, f=engine.f,
                ensemble=PathEnsemble.uniform(
                    M=m, beta=engine.ensemble.betas[0],
                    J=engine.ensemble.coupling.J))
            curves.append((f"M={m}", "uniform", n, eng))
    if len(curves) == (1 if paths["mixture"] else 0):
        raise ConfigError("no curves: give [paths] shifts, patterns or paths")
    return curves


def _flag_of(rho):
    herm, tr, min_eig = density_report(rho)
    ok = herm <= 1e-12 and tr <= 1e-12 and min_eig >= -1e-10
    return "ok" if ok else "unphysical"


def _correlation_row(t, label, state_prob):
    if state_prob is None:
        return (t, label, float("nan"), float("nan"), float("nan"), "erased")
    state = state_prob
    flag = _flag_of(state)
    if flag != "ok":
        return (t, label, float("nan"), float("nan"), float("nan"), flag)
    return (t, label, l1_coherence(state), concurrence(state),
            geometric_discord(state), flag)


def _echo_params(cfg, extra):
    params = dict(extra)
    for section, mapping in cfg.items():
        for key, value in mapping.items():
            if isinstance(value, tuple):
                value = ",".join(str(v) for v in value)
            params[f"{section}.{key}"] = value
    return params


def run_two_qubit(args):
    cfg = _load_config(args.config, _TWO_QUBIT_SCHEMA)
    engine = _two_qubit_engine(cfg)
    curves = _two_qubit_curves(cfg, engine)
    rho0 = np.outer(assembly.BELL_PHI_PLUS, assembly.BELL_PHI_PLUS.conj())
    rows = []
    for t in _time_grid(cfg["run"]):
        t = float(t)
        for label, kind, payload, eng in curves:
            try:
                if kind == "mixture":
                    state = eng.trace_paths(rho0, t)
                elif kind == "uniform":
                    state, _ = eng.uniform_selective_measure(rho0, t, payload)
                else:
                    state, _ = eng.selective_measure(rho0, t, payload)
            except ErasedStateError:
                rows.append(_correlation_row(t, label, None))
                continue
            rows.append(_correlation_row(t, label, state))
    write_csv(args.out,
              ("t", "n", "coherence", "concurrence", "discord", "flag"),
              rows, _echo_params(cfg, {"subcommand": "two-qubit"}))
    return 0


def run_decoherence(args):
    cfg = _load_config(args.config, _DECOHERENCE_SCHEMA)
    if args.gamma is not None:
        cfg["decoherence"]["Gamma"] = args.gamma
    gamma = cfg["decoherence"]["Gamma"]
    if gamma < 0:
        raise ConfigError("[decoherence] Gamma must be nonnegative")
    if cfg["paths"]["M"] != 3:
        raise ConfigError("the dissipative path register supports M = 3 only")
    engine = _two_qubit_engine(cfg)
    curves = _two_qubit_curves(cfg, engine)
    rho0 = np.outer(assembly.BELL_PHI_PLUS, assembly.BELL_PHI_PLUS.conj())
    rows = []
    for t in _time_grid(cfg["run"]):
        t = float(t)
        register = evolve_path_lindblad(gamma, t)
        for label, kind, payload, eng in curves:
            try:
                if kind == "mixture":
                    state = eng.trace_paths(rho0, t)
                elif kind == "pattern":
                    state, _ = eng.decohered_selective_measure(
                        rho0, t, register, register, payload)
                else:
                    raise ConfigError("decoherence runs use patterns, "
                                      "not shifts")
            except ErasedStateError:
                rows.append(_correlation_row(t, label, None))
                continue
            rows.append(_correlation_row(t, label, state))
    write_csv(args.out,
              ("t", "n", "coherence", "concurrence", "discord", "flag"),
              rows, _echo_params(cfg, {"subcommand": "decoherence"}))
    return 0


def _pair_baths(cfg):
    from .baths import BathSpec
    bath = cfg["bath"]
    paths = cfg["paths"]
    betas = []
    for idx in ("0", "1"):
        named = {key[:-1]: value for key, value in paths.items()
                 if key.endswith(idx)}          # T0/beta0 -> T/beta
        beta = beta_from(named)
        if beta is None:
            raise ConfigError("give [paths] T0 and T1 (or beta0/beta1)")
        betas.append(beta)
    return (BathSpec(N=bath["N"], s=bath["s"], f=bath["f"], beta=betas[0]),
            BathSpec(N=bath["N"], s=bath["s"], f=bath["f"], beta=betas[1]))


def run_teleport(args):
    cfg = _load_config(args.config, _TELEPORT_SCHEMA)
    bath0, bath1 = _pair_baths(cfg)
    wa, wb = cfg["system"]["omega1"], cfg["system"]["omega2"]
    inv_sqrt2 = 1.0 / math.sqrt(2.0)
    rows = []
    for t in _time_grid(cfg["run"]):
        t = float(t)
        rho_abc = assembly.teleport_state(inv_sqrt2, inv_sqrt2,
                                          bath0, bath1, wa, wb, t)
        rho_def = partial_trace(
            assembly.teleport_state(1.0, 0.0, bath0, bath1, wa, wb, t),
            [4, 2], keep=(0,))
        rows.append((t, "standard-definite", teleport_fidelity_max(rho_def),
                     _flag_of(rho_def)))
        try:
            outcome = teleport.standard_protocol(rho_abc, +1)
            rows.append((t, "standard-indefinite", outcome.fidelity,
                         _flag_of(outcome.state)))
        except teleport.BranchError:
            rows.append((t, "standard-indefinite", float("nan"), "erased"))
        try:
            fid, _ = teleport.participatory_fidelity(rho_abc, (1.0, 0.0, 0.0))
            rows.append((t, "participatory", fid, "ok"))
        except teleport.BranchError:
            rows.append((t, "participatory", float("nan"), "erased"))
    write_csv(args.out, ("t", "protocol", "fidelity", "flag"), rows,
              _echo_params(cfg, {"subcommand": "teleport"}))
    return 0


def _qfi_initial(phi=0.0):
    psi = np.array([np.exp(1j * phi), 1.0], dtype=complex) / math.sqrt(2.0)
    dpsi = np.array([1j * np.exp(1j * phi), 0.0], dtype=complex) / math.sqrt(2.0)
    rho0 = np.outer(psi, psi.conj())
    drho0 = np.outer(dpsi, psi.conj()) + np.outer(psi, dpsi.conj())
    return rho0, drho0


def _qfi_value(engine, rho0, drho0, t, n):
    raw = engine.uniform_raw(rho0, t, n)
    p = float(np.real(np.trace(raw)))
    if p <= 1e-14:
        raise ErasedStateError(p)
    draw = engine.uniform_raw(drho0, t, n)
    return qfi(raw / p, draw / p), raw / p


def run_qfi(args):
    cfg = _load_config(args.config, _QFI_SCHEMA)
    paths_cfg = cfg["paths"]
    if args.paths is not None:
        paths_cfg["M"] = args.paths
    if args.pi_shifts is not None:
        paths_cfg["shifts"] = (args.pi_shifts,)
    bath = cfg["bath"]
    beta = beta_from(bath)
    if beta is None:
        raise ConfigError("the qfi run needs a uniform [bath] T or beta")
    omega = cfg["system"]["omega1"]
    rho0, drho0 = _qfi_initial()

    curves = []
    if paths_cfg["definite"]:
        curves.append(("definite", 1, 0))
    if "shifts" in paths_cfg:
        if "M" not in paths_cfg:
            raise ConfigError("a shifts sweep needs [paths] M")
        for n in paths_cfg["shifts"]:
            if not 0 <= n <= paths_cfg["M"]:
                raise ConfigError(f"shift count {n} outside 0..{paths_cfg['M']}")
            curves.append((str(n), paths_cfg["M"], n))
    if "paths" in paths_cfg:
        n = paths_cfg.get("n", 1)
        for m in paths_cfg["paths"]:
            if not 0 <= n <= m:
                raise ConfigError(f"shift count {n} outside 0..{m}")
            curves.append((f"M={m}", m, n))
    if len(curves) <= (1 if paths_cfg["definite"] else 0):
        raise ConfigError("no curves: give [paths] shifts or paths")

    engines = {}
    for _, m, _ in curves:
        if m not in engines:
            engines[m] = SingleQubitPathEngine(
                omega=omega, N=bath["N"], s=bath["s"], f=bath["f"],
                ensemble=PathEnsemble.uniform(M=m, beta=beta, J=0.0))
    rows = []
    for t in _time_grid(cfg["run"]):
        t = float(t)
        for label, m, n in curves:
            try:
                value, state = _qfi_value(engines[m], rho0, drho0, t, n)
            except ErasedStateError:
                rows.append((t, label, float("nan"), "erased"))
                continue
            rows.append((t, label, value, _flag_of(state)))
    write_csv(args.out, ("t", "n", "qfi", "flag"), rows,
              _echo_params(cfg, {"subcommand": "qfi"}))
    return 0


def run_wpei(args):
    cfg = _load_config(args.config, _WPEI_SCHEMA)
    if args.alpha is not None:
        cfg["wpei"]["alpha"] = args.alpha
    if args.theta is not None:
        cfg["wpei"]["theta"] = args.theta
    bath0, bath1 = _pair_baths(cfg)
    alpha, theta = cfg["wpei"]["alpha"], cfg["wpei"]["theta"]
    psi = np.zeros(4, dtype=complex)
    psi[3] = math.cos(alpha / 2.0)                        # |00>
    psi[1] = math.cos(theta / 2.0) * math.sin(alpha / 2.0)  # |10>
    psi[0] = math.sin(theta / 2.0) * math.sin(alpha / 2.0)  # |11>
    omega = cfg["system"]["omega1"]
    rows = []
    for t in _time_grid(cfg["run"]):
        t = float(t)
        state = assembly.control_system_state(psi, bath0, bath1, omega, t)
        flag = _flag_of(state)
        report = wpei(state)
        rows.append((t, report.concurrence, report.P1, report.P2,
                     report.V1, report.V2, report.eta,
                     report.indefiniteness, flag))
    write_csv(args.out,
              ("t", "concurrence", "P1", "P2", "V1", "V2", "eta",
               "indefiniteness", "flag"),
              rows, _echo_params(cfg, {"subcommand": "wpei"}))
    return 0


def run_verify(args):
    from .verify import run_verification
    results = run_verification(level=args.level)
    failed = 0
    for r in results:
        status = "PASS" if r.passed else "FAIL"
        note = f"  [{r.note}]" if r.note else ""
        print(f"{status} {r.name:28s} max_err={r.max_err:.3e} "
              f"tol={r.tol:.1e} ({r.seconds:.2f}s){note}")
        failed += 0 if r.passed else 1
    print(f"{len(results) - failed}/{len(results)} checks passed")
    return 0 if failed == 0 else 3


def build_parser():
    parser = argparse.ArgumentParser(
        prog="iqsim",
        description="open-system dynamics in superposed collective-spin "
                    "environments")
    sub = parser.add_subparsers(dest="command", required=True)

    def data_command(name, runner, help_text):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--config", required=True, help="config file path")
        p.add_argument("--out", required=True, help="output CSV path")
        p.set_defaults(runner=runner)
        return p

    data_command("two-qubit", run_two_qubit,
                 "two-qubit correlations under selective path measurement")
    p = data_command("decoherence", run_decoherence,
                     "correlations with a dissipative path register")
    p.add_argument("--gamma", type=float, default=None,
                   help="override [decoherence] Gamma")
    data_command("teleport", run_teleport,
                 "standard and participatory teleportation fidelity")
    p = data_command("qfi", run_qfi, "quantum Fisher information of the "
                                     "encoded phase")
    p.add_argument("--paths", type=int, default=None, help="override [paths] M")
    p.add_argument("--pi-shifts", type=int, default=None,
                   help="override [paths] shifts with a single count")
    p = data_command("wpei", run_wpei,
                     "predictability/visibility/entanglement/ignorance")
    p.add_argument("--alpha", type=float, default=None,
                   help="override [wpei] alpha")
    p.add_argument("--theta", type=float, default=None,
                   help="override [wpei] theta")

    p = sub.add_parser("verify", help="run the exact-diagonalization "
                                      "verification suite")
    p.add_argument("--level", choices=("quick", "full"), default="quick")
    p.set_defaults(runner=run_verify)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.runner(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1
    except Exception as exc:  # numerical or environment failure
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
