import math

import numpy as np
import pytest
from scipy.linalg import expm

from conftest import random_bath, random_two_qubit
from iqsim.baths import BathSpec, level_energy
from iqsim.sectors import (
    SingleQubitParams,
    TWO_QUBIT_FAMILIES,
    TwoQubitParams,
    family_generator,
    family_norm_weights,
    propagate_sector,
    single_qubit_generator,
    single_qubit_norm_weights,
    single_qubit_tables,
    two_qubit_tables,
)


def test_generator_decoupled_limit():
    bath = BathSpec(N=10, s=0.5, f=0.0, beta=1.0)
    p = TwoQubitParams(omega1=1.2, omega2=0.8, J=0.5, bath1=bath, bath2=bath)
    G = family_generator("11", 2, 3, p)
    K = (1j * G).real
    assert np.max(np.abs(K - np.diag(np.diag(K)))) == 0.0
    t = 3.7
    v = propagate_sector(G, t, family_norm_weights("11", 2, 3))
    phase = -(-p.J + p.omega1 + p.omega2
              + level_energy(2, bath) + level_energy(3, bath)) * t
    assert abs(v[0] - np.exp(1j * phase)) < 1e-13
    assert abs(v[1]) == 0.0 and abs(v[2]) == 0.0


def test_generator_band_edge_closes_channels():
    bath = BathSpec(N=6, s=0.5, f=1.0, beta=1.0)
    p = TwoQubitParams(omega1=1.0, omega2=0.7, J=0.3, bath1=bath, bath2=bath)
    K = (1j * family_generator("11", 6, 6, p)).real
    assert K[0, 1] == 0.0 and K[1, 0] == 0.0
    assert K[0, 2] == 0.0 and K[2, 0] == 0.0


def test_generator_matrix_element_value():
    # omega1=1.2, omega2=0.8, J=0.5, s=0.5, N=100, sector (0,0):
    # stay diagonal = -J + omega1 + omega2 + 2 eps(0) = 1.0
    bath = BathSpec(N=100, s=0.5, f=1.0, beta=1.0)
    p = TwoQubitParams(omega1=1.2, omega2=0.8, J=0.5, bath1=bath, bath2=bath)
    K = (1j * family_generator("11", 0, 0, p)).real
    assert K[0, 0] == pytest.approx(1.0, abs=1e-14)


def test_initial_condition_all_families(rng):
    p = random_two_qubit(rng, 8)
    for fam in TWO_QUBIT_FAMILIES:
        v = propagate_sector(family_generator(fam, 3, 5, p), 0.0,
                             family_norm_weights(fam, 3, 5))
        assert np.allclose(v, [1.0, 0.0, 0.0], atol=1e-15)


def test_family_00_decoupled_phase():
    bath = BathSpec(N=12, s=0.4, f=0.0, beta=0.5)
    p = TwoQubitParams(omega1=0.9, omega2=1.1, J=0.2, bath1=bath, bath2=bath)
    t = 2.2
    v = propagate_sector(family_generator("00", 4, 1, p), t,
                         family_norm_weights("00", 4, 1))
    phase = -(-p.J - p.omega1 - p.omega2
              + level_energy(4, bath) + level_energy(1, bath)) * t
    assert abs(v[0] - np.exp(1j * phase)) < 1e-13


def test_family_01_vacuum_lowering_channel_closed(rng):
    p = random_two_qubit(rng, 7)
    # swap-1 channel of |01> absorbs from bath 1; at n1 = 0 it is closed
    w = family_norm_weights("01", 0, 3)
    assert w[2] == 0.0
    v = propagate_sector(family_generator("01", 0, 3, p), 4.1, w)
    assert v[2] == 0.0
    assert abs(np.sum(np.asarray(w) * np.abs(v) ** 2) - 1.0) < 1e-12


def test_conservation_laws_random_sectors(rng):
    for _ in range(100):
        N = int(rng.integers(1, 40))
        p = random_two_qubit(rng, N)
        fam = TWO_QUBIT_FAMILIES[rng.integers(0, 4)]
        n1, n2 = int(rng.integers(0, N + 1)), int(rng.integers(0, N + 1))
        t = float(rng.uniform(0.0, 20.0))
        w = np.asarray(family_norm_weights(fam, n1, n2))
        v = propagate_sector(family_generator(fam, n1, n2, p), t, w)
        assert abs(np.sum(w * np.abs(v) ** 2) - 1.0) < 1e-12


def test_propagate_matches_dense_expm(rng):
    for _ in range(25):
        N = int(rng.integers(1, 30))
        p = random_two_qubit(rng, N)
        fam = TWO_QUBIT_FAMILIES[rng.integers(0, 4)]
        n1, n2 = int(rng.integers(0, N + 1)), int(rng.integers(0, N + 1))
        t = float(rng.uniform(0.0, 8.0))
        G = family_generator(fam, n1, n2, p)
        w = np.asarray(family_norm_weights(fam, n1, n2))
        v = propagate_sector(G, t, w)
        ref = expm(np.asarray(G) * t) @ np.array([1.0, 0, 0], dtype=complex)
        live = w > 0
        assert np.max(np.abs(v[live] - ref[live])) < 1e-11


def test_semigroup_property(rng):
    p = random_two_qubit(rng, 9)
    G = family_generator("10", 3, 4, p)
    w = family_norm_weights("10", 3, 4)
    t1, t2 = 1.3, 2.9
    v = propagate_sector(G, t1 + t2, w)
    ref = expm(np.asarray(G) * t2) @ expm(np.asarray(G) * t1) \
        @ np.array([1.0, 0, 0], dtype=complex)
    assert np.max(np.abs(v - ref)) < 1e-12


def test_generator_similarity_symmetric(rng):
    for _ in range(30):
        N = int(rng.integers(1, 50))
        p = random_two_qubit(rng, N)
        fam = TWO_QUBIT_FAMILIES[rng.integers(0, 4)]
        n1, n2 = int(rng.integers(0, N + 1)), int(rng.integers(0, N + 1))
        K = (1j * family_generator(fam, n1, n2, p)).real
        w = np.asarray(family_norm_weights(fam, n1, n2))
        d = np.sqrt(np.where(w > 0, w, 1.0))
        S = (d[:, None] * K) / d[None, :]
        live = w > 0
        S = S[np.ix_(live, live)]
        assert np.max(np.abs(S - S.T)) < 1e-13


def test_tables_match_scalar_propagation(rng):
    p = random_two_qubit(rng, 6)
    t = 3.3
    tab = two_qubit_tables(p, t)
    for fam in TWO_QUBIT_FAMILIES:
        for n1 in range(7):
            for n2 in range(7):
                v = propagate_sector(family_generator(fam, n1, n2, p), t,
                                     family_norm_weights(fam, n1, n2))
                assert np.max(np.abs(tab.amps[fam][n1, n2] - v)) < 1e-12


def test_single_qubit_vacuum_ground_sector():
    bath = BathSpec(N=20, s=0.8, f=1.2, beta=1.0)
    p = SingleQubitParams(omega=2.0, bath=bath)
    t = 5.0
    tab = single_qubit_tables(p, t)
    c1, d1 = tab.amps["0"][0]
    phase = -(-p.omega + level_energy(0, bath)) * t
    assert abs(c1 - np.exp(1j * phase)) < 1e-13
    assert d1 == 0.0


def test_single_qubit_decoupled():
    bath = BathSpec(N=20, s=0.8, f=0.0, beta=1.0)
    p = SingleQubitParams(omega=2.0, bath=bath)
    tab = single_qubit_tables(p, 7.7)
    assert np.max(np.abs(np.abs(tab.amps["1"][:, 0]) - 1.0)) < 1e-13


def test_single_qubit_against_sector_oracle():
    # parameters ring a figure-scale case: the projected two-level Dicke
    # sector at N=100 is cheap to exponentiate directly
    from iqsim.oracle import dicke_lowering
    bath = BathSpec(N=100, s=0.8, f=1.2, beta=1.0)
    p = SingleQubitParams(omega=2.0, bath=bath)
    n, t = 3, 1.0
    tab = single_qubit_tables(p, t)
    jm = dicke_lowering(bath.N)
    jp = jm.T
    h_e = bath.s * (jp @ jm / bath.N - 0.5 * np.eye(bath.N + 1))
    pref = bath.f / (2.0 * math.sqrt(bath.N))
    # basis {|1, n>, |0, n+1>}
    h2 = np.array([
        [p.omega + h_e[n, n], pref * 2.0 * jm[n, n + 1]],
        [pref * 2.0 * jm[n, n + 1], -p.omega + h_e[n + 1, n + 1]],
    ])
    v = expm(-1j * h2 * t) @ np.array([1.0, 0.0], dtype=complex)
    a1, b1 = tab.amps["1"][n]
    assert abs(a1 - v[0]) < 1e-12
    assert abs(math.sqrt(n + 1) * b1 - v[1]) < 1e-12


def test_single_qubit_conservation(rng):
    for _ in range(50):
        N = int(rng.integers(1, 60))
        p = SingleQubitParams(omega=float(rng.uniform(0.3, 2.5)),
                              bath=random_bath(rng, N))
        t = float(rng.uniform(0.0, 20.0))
        tab = single_qubit_tables(p, t)
        n = np.arange(N + 1)
        for fam, w in (("1", n + 1.0), ("0", n.astype(float))):
            a = tab.amps[fam]
            norm = np.abs(a[:, 0]) ** 2 + w * np.abs(a[:, 1]) ** 2
            assert np.max(np.abs(norm - 1.0)) < 1e-12


def test_single_qubit_generator_weights():
    assert single_qubit_norm_weights("1", 4) == (1.0, 5.0)
    assert single_qubit_norm_weights("0", 4) == (1.0, 4.0)
    bath = BathSpec(N=9, s=0.5, f=0.9, beta=1.0)
    p = SingleQubitParams(omega=1.0, bath=bath)
    K = (1j * single_qubit_generator("1", 2, p)).real
    assert K[0, 1] == pytest.approx(
        bath.f * 3.0 * math.sqrt(1.0 - 2.0 / 9.0), rel=1e-14)
    assert K[1, 0] == pytest.approx(
        bath.f * math.sqrt(1.0 - 2.0 / 9.0), rel=1e-14)


def test_invalid_inputs():
    bath = BathSpec(N=4, s=0.5, f=1.0, beta=1.0)
    p = TwoQubitParams(omega1=1.0, omega2=1.0, J=0.1, bath1=bath, bath2=bath)
    with pytest.raises(ValueError):
        family_generator("xx", 0, 0, p)
    with pytest.raises(ValueError):
        family_generator("11", 5, 0, p)
    with pytest.raises(ValueError):
        two_qubit_tables(p, -1.0)
    other = BathSpec(N=5, s=0.5, f=1.0, beta=1.0)
    with pytest.raises(ValueError):
        TwoQubitParams(omega1=1.0, omega2=1.0, J=0.1, bath1=bath, bath2=other)
