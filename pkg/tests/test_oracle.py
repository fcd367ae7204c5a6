import math

import numpy as np
import pytest

from conftest import random_density, random_two_qubit
from iqsim import oracle
from iqsim.baths import BathSpec, level_energy, thermal_probabilities
from iqsim.sectors import SingleQubitParams, TwoQubitParams, family_generator
from iqsim.validation import partial_trace


def test_dicke_lowering_matrix_elements():
    jm = oracle.dicke_lowering(4)
    # J-|n> = sqrt(n (N - n + 1)) |n-1> on the excitation ladder
    for n in range(1, 5):
        assert jm[n - 1, n] == pytest.approx(math.sqrt(n * (4 - n + 1)),
                                             rel=1e-15)


def test_bath_hamiltonian_diagonal_is_level_energy():
    bath = BathSpec(N=6, s=0.7, f=1.0, beta=1.0)
    h_e = oracle._bath_ops(bath)[0]
    assert np.max(np.abs(h_e - np.diag(np.diag(h_e)))) == 0.0
    for n in range(7):
        assert h_e[n, n] == pytest.approx(level_energy(n, bath), abs=1e-14)


def test_single_qubit_hamiltonian_n1_hand_checked():
    # N = 1: 4-dimensional space (S (x) two-level ladder)
    bath = BathSpec(N=1, s=0.6, f=0.9, beta=1.0)
    p = SingleQubitParams(omega=1.3, bath=bath)
    H = oracle.single_qubit_hamiltonian(p)
    eps0, eps1 = level_energy(0, bath), level_energy(1, bath)
    # basis |1,0>, |1,1>, |0,0>, |0,1>; J- = 1 ladder element at N=1,
    # coupling (f / 2 sqrt(1)) * 2 = f between |1,0> and |0,1>
    expected = np.array([
        [p.omega + eps0, 0, 0, bath.f],
        [0, p.omega + eps1, 0, 0],
        [0, 0, -p.omega + eps0, 0],
        [bath.f, 0, 0, -p.omega + eps1],
    ])
    assert np.max(np.abs(H - expected)) < 1e-14


def test_two_qubit_hamiltonian_hermitian_and_decoupled_spectrum():
    rng = np.random.default_rng(3)
    p = random_two_qubit(rng, 3)
    H = oracle.two_qubit_hamiltonian(p)
    assert np.max(np.abs(H - H.conj().T)) < 1e-13
    free = TwoQubitParams(
        omega1=p.omega1, omega2=p.omega2, J=p.J,
        bath1=BathSpec(N=3, s=p.bath1.s, f=0.0, beta=1.0),
        bath2=BathSpec(N=3, s=p.bath2.s, f=0.0, beta=1.0))
    Hf = oracle.two_qubit_hamiltonian(free)
    # f = 0: spectrum is the set of system + bath energy sums
    sys_e = [free.system_energy(s) for s in ("11", "10", "01", "00")]
    eps1 = [level_energy(n, free.bath1) for n in range(4)]
    eps2 = [level_energy(n, free.bath2) for n in range(4)]
    expected = sorted(a + b + c for a in sys_e for b in eps1 for c in eps2)
    assert np.max(np.abs(np.sort(np.linalg.eigvalsh(Hf))
                         - np.array(expected))) < 1e-12


def test_budget_guards():
    big = BathSpec(N=9, s=0.5, f=1.0, beta=1.0)
    p = TwoQubitParams(omega1=1.0, omega2=1.0, J=0.1, bath1=big, bath2=big)
    with pytest.raises(ValueError):
        oracle.two_qubit_hamiltonian(p)
    huge = SingleQubitParams(omega=1.0,
                             bath=BathSpec(N=200, s=0.5, f=1.0, beta=1.0))
    with pytest.raises(ValueError):
        oracle.single_qubit_hamiltonian(huge)


def test_exact_blocks_identity_and_unit_trace(rng):
    p = random_two_qubit(rng, 3)
    rho0 = random_density(rng, 4)
    assert np.max(np.abs(oracle.exact_case_a(rho0, p, 0.0) - rho0)) < 1e-12
    out = oracle.exact_case_a(rho0, p, 2.2)
    assert abs(np.trace(out) - 1.0) < 1e-12


def test_thermal_state_diagonal():
    bath = BathSpec(N=5, s=0.5, f=1.0, beta=2.0)
    p = thermal_probabilities(bath)
    h_e = oracle._bath_ops(bath)[0]
    boltz = np.exp(-bath.beta * np.diag(h_e))
    assert np.max(np.abs(p - boltz / boltz.sum())) < 1e-14


def test_ode_cross_check_decoupled_phases():
    bath = BathSpec(N=5, s=0.5, f=0.0, beta=1.0)
    p = TwoQubitParams(omega1=1.2, omega2=0.8, J=0.5, bath1=bath, bath2=bath)
    G = family_generator("11", 2, 2, p)
    t = 4.0
    v = oracle.ode_cross_check(G, t)
    phase = np.exp(G[0, 0] * t)
    # the integration contract promises 10 * tol agreement
    assert abs(v[0] - phase) < 1e-11
    assert abs(abs(v[0]) - 1.0) < 1e-11


def test_ode_cross_check_semigroup(rng):
    p = random_two_qubit(rng, 4)
    G = family_generator("01", 2, 1, p)
    half = oracle.ode_cross_check(G, 3.0)
    # integrate the second half starting from the first half's endpoint
    from scipy.integrate import solve_ivp
    sol = solve_ivp(lambda _, y: np.asarray(G) @ y, (0.0, 3.0), half,
                    method="DOP853", rtol=1e-12, atol=1e-12)
    full = oracle.ode_cross_check(G, 6.0)
    assert np.max(np.abs(sol.y[:, -1] - full)) < 1e-8


def test_ode_tolerance_guard():
    bath = BathSpec(N=2, s=0.5, f=1.0, beta=1.0)
    p = TwoQubitParams(omega1=1.0, omega2=1.0, J=0.1, bath1=bath, bath2=bath)
    with pytest.raises(ValueError):
        oracle.ode_cross_check(family_generator("11", 0, 0, p), 1.0,
                               tol=1e-15)


def test_truncation_gap_is_model_level():
    """The sector-restricted model genuinely differs from the full
    Hamiltonian for two qubits (second-order leakage into the fourth
    corner of each exchange sector); for one qubit the sectors are exact.
    """
    bath = BathSpec(N=3, s=0.5, f=1.0, beta=1 / 0.3)
    p = TwoQubitParams(omega1=1.2, omega2=0.8, J=0.5, bath1=bath, bath2=bath)
    gap = oracle.truncation_gap(p, 2.5)
    assert gap > 0.1

    sq = SingleQubitParams(omega=2.0, bath=bath)
    H = oracle.single_qubit_hamiltonian(sq)
    lam, U = np.linalg.eigh(H)
    prop = (U * np.exp(-1j * lam * 2.5)) @ U.conj().T
    # evolving |1, n> populates only |1, n> and |0, n+1>
    dim = bath.N + 1
    for n in range(dim):
        col = prop[:, 0 * dim + n].reshape(2, dim)
        allowed = np.zeros((2, dim), dtype=bool)
        allowed[0, n] = True
        if n + 1 <= bath.N:
            allowed[1, n + 1] = True
        assert np.max(np.abs(col[~allowed])) < 1e-12


def test_exact_teleport_reduces_to_control_marginal():
    b0 = BathSpec(N=3, s=0.8, f=1.2, beta=1 / 0.1)
    b1 = BathSpec(N=3, s=0.8, f=1.2, beta=1 / 0.8)
    inv = 1 / math.sqrt(2)
    rho = oracle.exact_teleport_state(inv, inv, b0, b1, 2.0, 1.5, 1.3)
    assert abs(np.trace(rho) - 1.0) < 1e-12
    rho_c = partial_trace(rho, [2, 2, 2], keep=(2,))
    # control populations are conserved by the conditional evolution
    assert rho_c[0, 0].real == pytest.approx(0.5, abs=1e-12)
    assert rho_c[1, 1].real == pytest.approx(0.5, abs=1e-12)
