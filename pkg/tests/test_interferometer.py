import math

import numpy as np
import pytest

from iqsim import oracle
from iqsim.assembly import BELL_PHI_PLUS, case_a
from iqsim.baths import BathSpec
from iqsim.interferometer import (
    ConstantCoupling,
    ErasedStateError,
    PathEnsemble,
    PositionCoupling,
    SingleQubitPathEngine,
    TwoQubitPathEngine,
    evolve_path_lindblad,
    phase_pattern,
    uniform_weights,
    uniform_weights_single,
)
from iqsim.sectors import TwoQubitParams, two_qubit_tables
from iqsim.validation import assert_physical

BELL = np.outer(BELL_PHI_PLUS, BELL_PHI_PLUS.conj())


def uniform_engine(N=8, M=10, beta=1.0 / 0.3):
    return TwoQubitPathEngine(
        omega1=1.2, omega2=0.8, N=N, s=0.5, f=1.0,
        ensemble=PathEnsemble.uniform(M=M, beta=beta, J=0.5))


def fig3_engine(N=4):
    return TwoQubitPathEngine(
        omega1=2.0, omega2=1.5, N=N, s=0.8, f=1.2,
        ensemble=PathEnsemble(M=3, betas=(1 / 0.1, 1 / 0.3, 1 / 0.5),
                              coupling=PositionCoupling(gamma=0.1, d=0.5)))


def test_uniform_weights_values():
    w = uniform_weights(10, 1)
    assert w[0] == pytest.approx(0.01, abs=1e-15)
    assert w[1] == pytest.approx(0.108, abs=1e-15)
    assert w[2] == pytest.approx(0.2916, abs=1e-15)


def test_uniform_weights_flip_symmetry():
    for M in (4, 7, 10):
        for n in range(M + 1):
            assert uniform_weights(M, n) == uniform_weights(M, M - n)


def test_uniform_weights_range_checked():
    with pytest.raises(ValueError):
        uniform_weights(4, 5)
    with pytest.raises(ValueError):
        uniform_weights_single(4, -1)


def test_erasure_at_half_flips():
    eng = uniform_engine(N=6, M=10)
    with pytest.raises(ErasedStateError):
        eng.selective_measure(BELL, 0.0, phase_pattern(10, 5))
    with pytest.raises(ErasedStateError):
        eng.uniform_selective_measure(BELL, 0.0, 5)


def test_single_path_identity_on_case_a():
    eng = uniform_engine(N=6, M=1)
    t = 2.7
    state, p = eng.selective_measure(BELL, t, (0.0,))
    bath = BathSpec(N=6, s=0.5, f=1.0, beta=1.0 / 0.3)
    params = TwoQubitParams(omega1=1.2, omega2=0.8, J=0.5,
                            bath1=bath, bath2=bath)
    ref = case_a(BELL, two_qubit_tables(params, t))
    assert np.max(np.abs(state - ref)) < 1e-13
    assert p == pytest.approx(1.0, abs=1e-12)


def test_trace_paths_uniform_equals_case_a():
    eng = uniform_engine(N=6, M=4)
    t = 3.1
    mixed = eng.trace_paths(BELL, t)
    bath = BathSpec(N=6, s=0.5, f=1.0, beta=1.0 / 0.3)
    params = TwoQubitParams(omega1=1.2, omega2=0.8, J=0.5,
                            bath1=bath, bath2=bath)
    assert np.max(np.abs(mixed - case_a(BELL, two_qubit_tables(params, t)))) \
        < 1e-13
    assert np.max(np.abs(eng.trace_paths(BELL, 0.0) - BELL)) < 1e-14


def test_phase_flip_symmetry_over_time():
    eng = uniform_engine(N=6, M=6)
    for t in np.linspace(0.0, 8.0, 9):
        for n in (1, 2):
            a, _ = eng.selective_measure(BELL, float(t), phase_pattern(6, n))
            b, _ = eng.selective_measure(BELL, float(t),
                                         phase_pattern(6, 6 - n))
            assert np.max(np.abs(a - b)) < 1e-12


def test_weights_path_equals_explicit_sum():
    for M in range(2, 13):
        eng = uniform_engine(N=4, M=M)
        a, pa = eng.selective_measure(BELL, 1.7, phase_pattern(M, 1))
        b, pb = eng.uniform_selective_measure(BELL, 1.7, 1)
        assert np.max(np.abs(a - b)) < 1e-12
        assert abs(pa - pb) < 1e-12


def test_measurement_probability_in_unit_interval():
    eng = uniform_engine(N=6, M=6)
    for t in np.linspace(0.0, 10.0, 11):
        for n in (0, 1, 2):
            _, p = eng.uniform_selective_measure(BELL, float(t), n)
            assert -1e-12 <= p <= 1.0 + 1e-12


def test_selective_measure_physical_output():
    eng = fig3_engine(N=6)
    for t in (0.0, 1.2, 4.4, 9.0):
        state, _ = eng.selective_measure(BELL, t, (0.0, math.pi, 0.0))
        assert_physical(state, context=f"t={t}")


def test_selective_measure_vs_oracle_blocks():
    N, M = 3, 3
    eng = fig3_engine(N=N)
    t = 2.0
    phases = (0.0, math.pi, 0.0)
    mine, p_mine = eng.selective_measure(BELL, t, phases)

    betas = eng.ensemble.betas
    coupling = eng.ensemble.coupling

    def params(i, j):
        return TwoQubitParams(
            omega1=2.0, omega2=1.5, J=coupling.value(i, j),
            bath1=BathSpec(N=N, s=0.8, f=1.2, beta=betas[i]),
            bath2=BathSpec(N=N, s=0.8, f=1.2, beta=betas[j]))

    ph = np.exp(1j * np.asarray(phases))
    raw = np.zeros((4, 4), dtype=complex)
    for i in range(M):
        for ip in range(M):
            for j in range(M):
                for jp in range(M):
                    if i == ip and j == jp:
                        blk = oracle.exact_case_a(BELL, params(i, j), t)
                    elif i == ip:
                        blk = oracle.exact_case_b(
                            BELL, params(i, j), params(ip, jp), t,
                            shared="bath1")
                    elif j == jp:
                        blk = oracle.exact_case_b(
                            BELL, params(i, j), params(ip, jp), t,
                            shared="bath2")
                    else:
                        blk = oracle.exact_case_c(
                            BELL, params(i, j), params(ip, jp), t)
                    raw += ph[i] * ph[ip].conj() * ph[j] * ph[jp].conj() * blk
    raw /= M ** 4
    p_ref = float(np.real(np.trace(raw)))
    assert abs(p_mine - p_ref) < 1e-9
    assert np.max(np.abs(mine - raw / p_ref)) < 1e-9


def test_lindblad_register_properties():
    assert np.max(np.abs(evolve_path_lindblad(0.0, 5.0)
                         - np.full((3, 3), 1 / 3))) < 1e-14
    late = evolve_path_lindblad(0.7, 400.0)
    assert np.max(np.abs(late - np.eye(3) / 3)) < 1e-12
    rho = evolve_path_lindblad(0.5, 2.0)
    off = rho[~np.eye(3, dtype=bool)]
    assert np.max(np.abs(off - math.exp(-1.0) / 3)) < 1e-14
    assert np.max(np.abs(np.diag(rho) - 1 / 3)) < 1e-14
    assert abs(np.trace(rho) - 1.0) < 1e-14


def test_lindblad_nonuniform_populations_relax():
    rho = evolve_path_lindblad(0.8, 30.0, populations=(0.9, 0.05, 0.05))
    assert np.max(np.abs(np.diag(rho) - 1 / 3)) < 1e-8
    with pytest.raises(ValueError):
        evolve_path_lindblad(0.5, 1.0, M=4)
    with pytest.raises(ValueError):
        evolve_path_lindblad(-0.1, 1.0)


def test_decohered_measure_limits():
    eng = fig3_engine(N=4)
    phases = (0.0, math.pi, 0.0)
    # gamma = 0 reproduces the coherent measurement exactly
    reg0 = evolve_path_lindblad(0.0, 3.0)
    a, pa = eng.decohered_selective_measure(BELL, 3.0, reg0, reg0, phases)
    b, pb = eng.selective_measure(BELL, 3.0, phases)
    assert np.max(np.abs(a - b)) < 1e-13
    assert abs(pa - pb) < 1e-13
    # t = 0 returns the initial state for any gamma
    reg = evolve_path_lindblad(1.3, 0.0)
    c, _ = eng.decohered_selective_measure(BELL, 0.0, reg, reg, phases)
    assert np.max(np.abs(c - BELL)) < 1e-13
    # strong damping converges to the path-traced mixture
    t = 20.0
    reg = evolve_path_lindblad(0.5, t)
    d, _ = eng.decohered_selective_measure(BELL, t, reg, reg, phases)
    mix = eng.trace_paths(BELL, t)
    assert np.linalg.norm(d - mix) < 1e-3


def test_phase_validation():
    eng = uniform_engine(N=4, M=3)
    with pytest.raises(ValueError):
        eng.selective_measure(BELL, 1.0, (0.0, 0.5, 0.0))
    with pytest.raises(ValueError):
        eng.selective_measure(BELL, 1.0, (0.0, math.pi))
    with pytest.raises(ValueError):
        phase_pattern(4, 5)


def test_ensemble_validation():
    with pytest.raises(ValueError):
        PathEnsemble(M=3, betas=(1.0, 1.0), coupling=ConstantCoupling(0.5))
    with pytest.raises(ValueError):
        PositionCoupling(gamma=0.1, d=0.0)
    rule = PositionCoupling(gamma=0.1, d=0.5)
    assert rule.value(0, 0) == pytest.approx(2.0)
    assert rule.value(0, 2) == pytest.approx(1.0 / 0.9)


def test_single_qubit_engine_matches_two_ways():
    eng = SingleQubitPathEngine(
        omega=2.0, N=6, s=0.8, f=1.2,
        ensemble=PathEnsemble.uniform(M=6, beta=1 / 0.3, J=0.0))
    plus = np.full((2, 2), 0.5, dtype=complex)
    t = 2.9
    a, pa = eng.selective_measure(plus, t, phase_pattern(6, 1))
    b, pb = eng.uniform_selective_measure(plus, t, 1)
    assert np.max(np.abs(a - b)) < 1e-13
    assert abs(pa - pb) < 1e-13
    mix = eng.trace_paths(plus, t)
    diag = eng.block(plus, 0, 0, t)
    assert np.max(np.abs(mix - diag)) < 1e-14
