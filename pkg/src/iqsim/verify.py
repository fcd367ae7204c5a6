"""Named verification checks pitting the production code against the oracle.

Each check returns a :class:`CheckResult`; :func:`run_verification` runs
the quick set (seconds) or the full set (the complete oracle-equivalence
battery, tens of seconds).  The ``iqsim verify`` subcommand prints one
line per check and fails on any miss.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass

import numpy as np

from . import assembly, oracle
from .baths import BathSpec, thermal_probabilities, partition_function, thermal_weight
from .interferometer import (
    PathEnsemble,
    PositionCoupling,
    TwoQubitPathEngine,
    phase_pattern,
)
from .sectors import (
    SingleQubitParams,
    TWO_QUBIT_FAMILIES,
    TwoQubitParams,
    family_generator,
    family_norm_weights,
    propagate_sector,
    single_qubit_tables,
    two_qubit_tables,
)
from .validation import density_report

__all__ = ["CheckResult", "run_verification", "QUICK_CHECKS", "FULL_CHECKS"]


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    max_err: float
    tol: float
    seconds: float
    note: str = ""


def _random_bath(rng, N, s_range=(0.2, 1.0), f_range=(0.5, 1.5),
                 beta_range=(0.3, 4.0)):
    return BathSpec(N=N, s=float(rng.uniform(*s_range)),
                    f=float(rng.uniform(*f_range)),
                    beta=float(rng.uniform(*beta_range)))


def _random_two_qubit(rng, N, shared_bath1=None, shared_bath2=None):
    return TwoQubitParams(
        omega1=float(rng.uniform(0.3, 2.5)),
        omega2=float(rng.uniform(0.3, 2.5)),
        J=float(rng.uniform(0.0, 1.2)),
        bath1=shared_bath1 or _random_bath(rng, N),
        bath2=shared_bath2 or _random_bath(rng, N),
    )


def _random_state(rng, dim):
    m = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    rho = m @ m.conj().T
    return rho / np.trace(rho)


# ---------------------------------------------------------------------------
# individual checks
# ---------------------------------------------------------------------------

def check_level_energies(rng, full):
    """Bath Hamiltonian diagonal equals the closed-form level energies."""
    worst = 0.0
    for N in ((2, 4, 8) if full else (4,)):
        bath = _random_bath(rng, N)
        h_e = oracle._bath_ops(bath)[0]
        from .baths import level_energy
        diag = np.array([level_energy(n, bath) for n in range(N + 1)])
        worst = max(worst, float(np.max(np.abs(np.diag(h_e) - diag))))
    return worst, ""


def check_sector_spectra(rng, full):
    """Family generators match the sliced collective-spin Hamiltonian."""
    worst = 0.0
    for N in (range(2, 9) if full else (3, 5)):
        p = _random_two_qubit(rng, N)
        H = oracle.two_qubit_hamiltonian(p)
        dim = N + 1
        from .sectors import CHANNELS
        for fam in TWO_QUBIT_FAMILIES:
            _, shift2, _, shift1 = CHANNELS[fam]
            for n1 in range(dim):
                for n2 in range(dim):
                    states = oracle.family_sector_states(fam, n1, n2, N)
                    flat = [(s * dim + a) * dim + b for (s, a, b) in states]
                    sub = H[np.ix_(flat, flat)]
                    K = (1j * family_generator(fam, n1, n2, p)).real
                    w = np.asarray(family_norm_weights(fam, n1, n2))
                    d = np.sqrt(np.where(w > 0, w, 1.0))
                    S = (d[:, None] * K) / d[None, :]
                    live = [0]
                    if 0 <= n2 + shift2 <= N:
                        live.append(1)
                    if 0 <= n1 + shift1 <= N:
                        live.append(2)
                    S = S[np.ix_(live, live)]
                    ev_model = np.sort(np.linalg.eigvalsh(S))
                    ev_oracle = np.sort(np.linalg.eigvalsh(sub))
                    worst = max(worst, float(np.max(np.abs(ev_model - ev_oracle))))
    return worst, ""


def check_thermal_state(rng, full):
    """Normalized thermal occupations match weight/Z elementwise."""
    worst = 0.0
    for beta in (0.0, 0.7, 1.0 / 0.3, math.inf):
        bath = BathSpec(N=6, s=0.5, f=1.0, beta=beta)
        p = thermal_probabilities(bath)
        z = partition_function(bath)
        direct = np.array([thermal_weight(n, bath) for n in range(bath.dim)]) / z
        worst = max(worst, float(np.max(np.abs(p - direct))))
        worst = max(worst, abs(float(np.sum(p)) - 1.0))
    return worst, ""


def check_conservation(rng, full):
    """Weighted-norm laws hold on random sectors over t in [0, 20]."""
    draws = 1000 if full else 200
    worst = 0.0
    for _ in range(draws):
        N = int(rng.integers(1, 60))
        p = _random_two_qubit(rng, N)
        t = float(rng.uniform(0.0, 20.0))
        fam = TWO_QUBIT_FAMILIES[rng.integers(0, 4)]
        n1 = int(rng.integers(0, N + 1))
        n2 = int(rng.integers(0, N + 1))
        w = np.asarray(family_norm_weights(fam, n1, n2))
        v = propagate_sector(family_generator(fam, n1, n2, p), t, w)
        worst = max(worst, abs(float(np.sum(w * np.abs(v) ** 2)) - 1.0))
        sq = SingleQubitParams(omega=float(rng.uniform(0.3, 2.5)),
                               bath=_random_bath(rng, N))
        tab = single_qubit_tables(sq, t)
        n = np.arange(N + 1)
        for famq, wq in (("1", n + 1.0), ("0", n.astype(float))):
            a = tab.amps[famq]
            norm = np.abs(a[:, 0]) ** 2 + wq * np.abs(a[:, 1]) ** 2
            worst = max(worst, float(np.max(np.abs(norm - 1.0))))
    return worst, f"{draws} random sectors"


def check_semigroup(rng, full):
    """propagate(t1 + t2) equals the composed exponential."""
    worst = 0.0
    for _ in range(40 if full else 10):
        N = int(rng.integers(1, 40))
        p = _random_two_qubit(rng, N)
        fam = TWO_QUBIT_FAMILIES[rng.integers(0, 4)]
        n1 = int(rng.integers(0, N + 1))
        n2 = int(rng.integers(0, N + 1))
        w = np.asarray(family_norm_weights(fam, n1, n2))
        G = family_generator(fam, n1, n2, p)
        t1, t2 = rng.uniform(0.0, 10.0, size=2)
        v12 = propagate_sector(G, float(t1 + t2), w)
        # compose: evolve e1 to t1, then full matrix exponential to t2
        K = (1j * G).real
        d = np.sqrt(np.where(w > 0, w, 1.0))
        S = np.where((w[:, None] > 0) & (w[None, :] > 0),
                     (d[:, None] * K) / d[None, :], 0.0)
        np.fill_diagonal(S, np.diag(K))
        lam, U = np.linalg.eigh(0.5 * (S + S.T))
        u1 = U @ (np.exp(-1j * lam * t1) * U.T[:, 0])
        u12 = U @ (np.exp(-1j * lam * t2) * (U.T @ u1))
        scale = np.where(w > 0, 1.0 / d, 0.0)
        worst = max(worst, float(np.max(np.abs(u12 * scale - v12))))
    return worst, ""


def check_generator_similarity(rng, full):
    """D K D^{-1} is symmetric on every live channel."""
    worst = 0.0
    for _ in range(60 if full else 20):
        N = int(rng.integers(1, 50))
        p = _random_two_qubit(rng, N)
        fam = TWO_QUBIT_FAMILIES[rng.integers(0, 4)]
        n1 = int(rng.integers(0, N + 1))
        n2 = int(rng.integers(0, N + 1))
        w = np.asarray(family_norm_weights(fam, n1, n2))
        K = (1j * family_generator(fam, n1, n2, p)).real
        d = np.sqrt(np.where(w > 0, w, 1.0))
        S = (d[:, None] * K) / d[None, :]
        live = w > 0
        S = S[np.ix_(live, live)]
        worst = max(worst, float(np.max(np.abs(S - S.T))))
    return worst, ""


def check_ode_cross(rng, full):
    """Adaptive high-order integration agrees with the exponential."""
    worst = 0.0
    for _ in range(10 if full else 4):
        N = int(rng.integers(1, 30))
        p = _random_two_qubit(rng, N)
        fam = TWO_QUBIT_FAMILIES[rng.integers(0, 4)]
        n1 = int(rng.integers(0, N + 1))
        n2 = int(rng.integers(0, N + 1))
        w = np.asarray(family_norm_weights(fam, n1, n2))
        G = family_generator(fam, n1, n2, p)
        t = float(rng.uniform(5.0, 20.0))
        v_ode = oracle.ode_cross_check(G, t, tol=1e-12)
        v = propagate_sector(G, t, w)
        # the integrator evolves raw c-numbers, including dead channels
        live = w > 0
        worst = max(worst, float(np.max(np.abs(v_ode[live] - v[live]))))
    return worst, ""


def _appendix_draw(rng, N, t_max=6.0):
    t = float(rng.uniform(0.5, t_max))
    rho0 = _random_state(rng, 4)
    shared1 = _random_bath(rng, N)
    shared2 = _random_bath(rng, N)
    pA = _random_two_qubit(rng, N, shared_bath1=shared1, shared_bath2=shared2)
    pB = _random_two_qubit(rng, N, shared_bath1=shared1)
    pC = _random_two_qubit(rng, N)
    errs = []
    tabA = two_qubit_tables(pA, t)
    errs.append(np.max(np.abs(assembly.case_a(rho0, tabA)
                              - oracle.exact_case_a(rho0, pA, t))))
    tabB = two_qubit_tables(pB, t)
    errs.append(np.max(np.abs(
        assembly.case_b(rho0, tabA, tabB, shared="bath1")
        - oracle.exact_case_b(rho0, pA, pB, t, shared="bath1"))))
    pB2 = _random_two_qubit(rng, N, shared_bath2=shared2)
    tabB2 = two_qubit_tables(pB2, t)
    errs.append(np.max(np.abs(
        assembly.case_b(rho0, tabA, tabB2, shared="bath2")
        - oracle.exact_case_b(rho0, pA, pB2, t, shared="bath2"))))
    tabC = two_qubit_tables(pC, t)
    errs.append(np.max(np.abs(assembly.case_c(rho0, tabA, tabC)
                              - oracle.exact_case_c(rho0, pA, pC, t))))
    return float(max(errs))


def check_appendix_cases(rng, full):
    """Case A/B/C assembly equals Dicke-basis evolution + partial trace."""
    if full:
        draws, N = 20, 4
    else:
        draws, N = 3, 3
    worst = 0.0
    for _ in range(draws):
        worst = max(worst, _appendix_draw(rng, N))
    return worst, f"{draws} draws at N={N}"


def check_teleport_state(rng, full):
    """Assembled rho_ABC equals unrestricted conditional evolution."""
    worst = 0.0
    for _ in range(3 if full else 1):
        N = 4 if full else 3
        b0 = _random_bath(rng, N)
        b1 = _random_bath(rng, N)
        wa, wb = rng.uniform(0.3, 2.5, size=2)
        t = float(rng.uniform(0.5, 5.0))
        theta = float(rng.uniform(0.0, math.pi))
        c1, c0 = math.cos(theta / 2), math.sin(theta / 2)
        mine = assembly.teleport_state(c0, c1, b0, b1, wa, wb, t)
        ref = oracle.exact_teleport_state(c0, c1, b0, b1, wa, wb, t)
        worst = max(worst, float(np.max(np.abs(mine - ref))))
    return worst, ""


def check_control_system_state(rng, full):
    """Assembled control (x) system state equals conditional evolution."""
    worst = 0.0
    for _ in range(3 if full else 1):
        N = 4 if full else 3
        b0 = _random_bath(rng, N)
        b1 = _random_bath(rng, N)
        omega = float(rng.uniform(0.3, 2.5))
        t = float(rng.uniform(0.5, 5.0))
        psi = rng.normal(size=4) + 1j * rng.normal(size=4)
        psi /= np.linalg.norm(psi)
        mine = assembly.control_system_state(psi, b0, b1, omega, t)
        ref = oracle.exact_control_system_state(psi, b0, b1, omega, t)
        worst = max(worst, float(np.max(np.abs(mine - ref))))
    return worst, ""


def check_single_qubit_full(rng, full):
    """Single-qubit blocks match *unrestricted* full-H evolution.

    The one-qubit exchange sectors are exactly invariant, so this check
    carries no model restriction at all.
    """
    worst = 0.0
    for _ in range(4 if full else 2):
        N = int(rng.integers(2, 6))
        pL = SingleQubitParams(omega=float(rng.uniform(0.3, 2.5)),
                               bath=_random_bath(rng, N))
        pR = SingleQubitParams(omega=pL.omega, bath=_random_bath(rng, N))
        t = float(rng.uniform(0.5, 8.0))
        rho0 = _random_state(rng, 2)
        tabL = single_qubit_tables(pL, t)
        tabR = single_qubit_tables(pR, t)
        worst = max(worst, float(np.max(np.abs(
            assembly.single_qubit_block(rho0, tabL)
            - oracle.exact_single_qubit_block(rho0, pL, pL, t)))))
        worst = max(worst, float(np.max(np.abs(
            assembly.single_qubit_cross_block(rho0, tabL, tabR)
            - oracle.exact_single_qubit_block(rho0, pL, pR, t)))))
    return worst, ""


def check_factorization(rng, full):
    """Factorized Case B/C sums equal the naive triple/quadruple sums."""
    worst = 0.0
    for N in ((3, 5) if full else (3,)):
        rho0 = _random_state(rng, 4)
        t = float(rng.uniform(0.5, 6.0))
        shared = _random_bath(rng, N)
        pL = _random_two_qubit(rng, N, shared_bath1=shared)
        pR = _random_two_qubit(rng, N, shared_bath1=shared)
        tl, tr = two_qubit_tables(pL, t), two_qubit_tables(pR, t)
        worst = max(worst, float(np.max(np.abs(
            assembly.case_b(rho0, tl, tr, shared="bath1")
            - assembly.case_b_naive(rho0, tl, tr, shared="bath1")))))
        worst = max(worst, float(np.max(np.abs(
            assembly.case_c(rho0, tl, tr)
            - assembly.case_c_naive(rho0, tl, tr)))))
    return worst, ""


def _uniform_engine(N, M, beta=1.0 / 0.3):
    return TwoQubitPathEngine(
        omega1=1.2, omega2=0.8, N=N, s=0.5, f=1.0,
        ensemble=PathEnsemble.uniform(M=M, beta=beta, J=0.5))


def check_erasure(rng, full):
    """n = M/2 pattern erases the state at t = 0."""
    worst = 0.0
    rho0 = np.outer(assembly.BELL_PHI_PLUS, assembly.BELL_PHI_PLUS.conj())
    for M in range(2, 13, 2):
        eng = _uniform_engine(N=6, M=M)
        raw = np.zeros((4, 4), dtype=complex)
        from .interferometer import uniform_weights
        w_d, w_s, w_c = uniform_weights(M, M // 2)
        raw = (w_d * eng.block(rho0, 0, 0, 0, 0, 0.0)
               + w_s * 0.5 * (eng.block(rho0, 0, 0, 0, 1, 0.0)
                              + eng.block(rho0, 0, 1, 0, 0, 0.0))
               + w_c * eng.block(rho0, 0, 1, 0, 1, 0.0))
        worst = max(worst, float(np.max(np.abs(raw))))
    return worst, "M in 2..12"


def check_phase_symmetry(rng, full):
    """Patterns with n and M - n flips give the same normalized state."""
    worst = 0.0
    M, N = 6, 8
    eng = _uniform_engine(N=N, M=M)
    rho0 = np.outer(assembly.BELL_PHI_PLUS, assembly.BELL_PHI_PLUS.conj())
    ts = np.linspace(0.0, 10.0, 50 if full else 12)
    for t in ts:
        for n in (1, 2):
            a, _ = eng.selective_measure(rho0, float(t), phase_pattern(M, n))
            b, _ = eng.selective_measure(rho0, float(t),
                                         phase_pattern(M, M - n))
            worst = max(worst, float(np.max(np.abs(a - b))))
    return worst, f"{len(ts)}-point grid, M={M}"


def check_weights_vs_explicit(rng, full):
    """Uniform weight formulas reproduce the explicit phase sum."""
    worst = 0.0
    rho0 = np.outer(assembly.BELL_PHI_PLUS, assembly.BELL_PHI_PLUS.conj())
    t = 1.7
    for M in range(2, 13):
        eng = _uniform_engine(N=4, M=M)
        n = 1
        a, pa = eng.selective_measure(rho0, t, phase_pattern(M, n))
        b, pb = eng.uniform_selective_measure(rho0, t, n)
        worst = max(worst, float(np.max(np.abs(a - b))), abs(pa - pb))
    return worst, "M in 2..12, n=1"


def check_identical_path_block_degeneracy(rng, full):
    """Oracle blocks with coinciding left/right indices reduce to Case A."""
    N = 3
    rng2 = np.random.default_rng(12)
    p = _random_two_qubit(rng2, N)
    rho0 = _random_state(rng2, 4)
    t = 2.1
    refA = oracle.exact_case_a(rho0, p, t)
    # case B machinery with the "distinct" bath equal to the shared one's
    # twin is *not* Case A; coincidence of indices (same register) is.
    tab = two_qubit_tables(p, t)
    mine = assembly.case_a(rho0, tab)
    return float(np.max(np.abs(mine - refA))), "i=i', j=j' block"


def check_physicality(rng, full):
    """Assembled normalized states are Hermitian, unit-trace, PSD."""
    worst = 0.0
    for _ in range(6 if full else 3):
        N = int(rng.integers(2, 20))
        p = _random_two_qubit(rng, N)
        t = float(rng.uniform(0.0, 15.0))
        rho0 = _random_state(rng, 4)
        rho = assembly.case_a(rho0, two_qubit_tables(p, t))
        herm, tr, min_eig = density_report(rho)
        worst = max(worst, herm, tr, max(0.0, -min_eig - 1e-10))
    return worst, ""


def check_truncation_gap(rng, full):
    """Informational: distance between model and unrestricted dynamics."""
    p = TwoQubitParams(omega1=1.2, omega2=0.8, J=0.5,
                       bath1=BathSpec(N=3, s=0.5, f=1.0, beta=1 / 0.3),
                       bath2=BathSpec(N=3, s=0.5, f=1.0, beta=1 / 0.3))
    gap = oracle.truncation_gap(p, 2.5)
    return 0.0, (f"two-qubit exchange-sector model departs from the "
                 f"unrestricted Hamiltonian by {gap:.3f} (state norm; "
                 f"model-defining, see docs/model.md)")


def check_selective_vs_global(rng, full):
    """Engine measurement equals the phase-weighted sum of oracle blocks."""
    N, M = 3, 3
    betas = (1 / 0.1, 1 / 0.3, 1 / 0.5)
    coupling = PositionCoupling(gamma=0.1, d=0.5)
    eng = TwoQubitPathEngine(omega1=2.0, omega2=1.5, N=N, s=0.8, f=1.2,
                             ensemble=PathEnsemble(M=M, betas=betas,
                                                   coupling=coupling))
    rho0 = np.outer(assembly.BELL_PHI_PLUS, assembly.BELL_PHI_PLUS.conj())
    t = 2.0
    phases = (0.0, math.pi, 0.0)
    mine, p_mine = eng.selective_measure(rho0, t, phases)

    def bath(i):
        return BathSpec(N=N, s=0.8, f=1.2, beta=betas[i])

    def params(i, j):
        return TwoQubitParams(omega1=2.0, omega2=1.5,
                              J=coupling.value(i, j),
                              bath1=bath(i), bath2=bath(j))

    raw = np.zeros((4, 4), dtype=complex)
    ph = np.exp(1j * np.asarray(phases))
    for i in range(M):
        for ip in range(M):
            for j in range(M):
                for jp in range(M):
                    if i == ip and j == jp:
                        blk = oracle.exact_case_a(rho0, params(i, j), t)
                    elif i == ip:
                        blk = oracle.exact_case_b(rho0, params(i, j),
                                                  params(ip, jp), t,
                                                  shared="bath1")
                    elif j == jp:
                        blk = oracle.exact_case_b(rho0, params(i, j),
                                                  params(ip, jp), t,
                                                  shared="bath2")
                    else:
                        blk = oracle.exact_case_c(rho0, params(i, j),
                                                  params(ip, jp), t)
                    raw += (ph[i] * ph[ip].conj() * ph[j] * ph[jp].conj()
                            * blk)
    raw /= M ** 4
    p_ref = float(np.real(np.trace(raw)))
    ref = raw / p_ref
    err = max(float(np.max(np.abs(mine - ref))), abs(p_mine - p_ref))
    return err, "M=3 pattern (0, pi, 0)"


QUICK_CHECKS = [
    ("level-energies", 1e-12, check_level_energies),
    ("sector-spectra", 1e-10, check_sector_spectra),
    ("thermal-state", 1e-14, check_thermal_state),
    ("conservation-laws", 1e-12, check_conservation),
    ("semigroup", 1e-12, check_semigroup),
    ("generator-similarity", 1e-13, check_generator_similarity),
    ("ode-cross-check", 1e-8, check_ode_cross),
    ("appendix-cases", 1e-9, check_appendix_cases),
    ("teleport-state", 1e-9, check_teleport_state),
    ("control-system-state", 1e-9, check_control_system_state),
    ("single-qubit-full-H", 1e-10, check_single_qubit_full),
    ("factorization", 1e-12, check_factorization),
    ("erasure", 1e-12, check_erasure),
    ("weights-vs-explicit", 1e-12, check_weights_vs_explicit),
    ("identical-path-degeneracy", 1e-12,
     check_identical_path_block_degeneracy),
    ("physicality", 1e-10, check_physicality),
    ("truncation-gap", math.inf, check_truncation_gap),
]

FULL_CHECKS = QUICK_CHECKS + [
    ("phase-symmetry", 1e-12, check_phase_symmetry),
    ("selective-vs-global", 1e-9, check_selective_vs_global),
]


def run_verification(level="quick", seed=2024):
    """Run the named checks; returns a list of :class:`CheckResult`."""
    if level not in ("quick", "full"):
        raise ValueError(f"level must be 'quick' or 'full', not {level!r}")
    checks = FULL_CHECKS if level == "full" else QUICK_CHECKS
    rng = np.random.default_rng(seed)
    results = []
    for name, tol, fn in checks:
        start = time.perf_counter()
        err, note = fn(rng, level == "full")
        elapsed = time.perf_counter() - start
        results.append(CheckResult(name=name, passed=bool(err <= tol),
                                   max_err=float(err), tol=tol,
                                   seconds=elapsed, note=note))
    return results
