"""Independent ground truth at small N: collective-spin exact diagonalization.

Everything here is built from raw spin-(N/2) ladder matrix elements

    J+ |m> = sqrt(J(J+1) - m(m+1)) |m+1>,      J = N/2,  m = n - N/2,

bypassing the bosonic-ladder closed forms used by the production code.
Bath Hamiltonian s*(J+ J-/N - 1/2), coupling (f/(2 sqrt(N))) *
(sigma_x Jx + sigma_y Jy) per qubit, literal tensor products, dense
eigendecomposition, and partial traces done by explicit bath-label
matching.  Agreement with :mod:`iqsim.sectors` / :mod:`iqsim.assembly`
therefore exercises every closed-form ingredient independently.

Model space: the production dynamics evolves each initial system basis
state inside its three-state exchange sector (two-state for one qubit).
The oracle evolves the same sectors, but extracts them by slicing the
full Dicke-basis Hamiltonian, so the generators are re-derived here from
first principles rather than transcribed.  For one qubit the exchange
sectors are exactly invariant under the full Hamiltonian, and the oracle
verifies that with unrestricted evolution; for two qubits the full
Hamiltonian also connects the fourth corner of each sector, which the
model excludes by construction.  :func:`truncation_gap` quantifies that
difference; see docs/model.md.
"""

from __future__ import annotations

import numpy as np
from scipy.integrate import solve_ivp

from .baths import thermal_probabilities
from .sectors import BASIS_TWO_QUBIT
from .validation import SIGMA_X, SIGMA_Y, SIGMA_Z, kron_all, partial_trace

__all__ = [
    "dicke_lowering",
    "single_qubit_hamiltonian",
    "two_qubit_hamiltonian",
    "family_sector_states",
    "exact_case_a",
    "exact_case_b",
    "exact_case_c",
    "exact_single_qubit_block",
    "exact_teleport_state",
    "exact_control_system_state",
    "ode_cross_check",
    "truncation_gap",
]

_ORACLE_N_MAX = 8          # two-qubit spaces grow as 4 (N+1)^2
_ORACLE_N_MAX_SINGLE = 128  # one-qubit spaces grow as 2 (N+1)

_SYS_INDEX = {s: i for i, s in enumerate(BASIS_TWO_QUBIT)}

# family -> (swap-2 target, bath-2 shift, swap-1 target, bath-1 shift)
_CHANNELS = {
    "11": ("10", +1, "01", +1),
    "00": ("01", -1, "10", -1),
    "01": ("00", +1, "11", -1),
    "10": ("11", -1, "00", +1),
}


def _check_budget(N, limit=_ORACLE_N_MAX):
    if N > limit:
        raise ValueError(
            f"oracle is dense-matrix only; N={N} exceeds budget {limit}")


def dicke_lowering(N):
    """J- on the (N+1)-level symmetric ladder, from spin-(N/2) matrix elements."""
    S = N / 2.0
    m = np.arange(N + 1) - S          # m value of each ladder level n
    jm = np.zeros((N + 1, N + 1))
    for n in range(1, N + 1):
        jm[n - 1, n] = np.sqrt(S * (S + 1) - m[n] * (m[n] - 1))
    return jm


def _bath_ops(bath):
    """(H_E, Jx, Jy) for one bath in the Dicke ladder basis.

    The collective components are sums of Pauli matrices, so
    Jx = J+ + J- and Jy = -i(J+ - J-) with J+- the spin-(N/2) ladder.
    """
    N = bath.N
    jm = dicke_lowering(N)
    jp = jm.T
    h_e = bath.s * (jp @ jm / N - 0.5 * np.eye(N + 1))
    jx = (jp + jm) + 0j
    jy = -1j * (jp - jm)
    return h_e, jx, jy


def single_qubit_hamiltonian(p):
    """Full H for one qubit and one bath, ordering (S, E)."""
    _check_budget(p.N, _ORACLE_N_MAX_SINGLE)
    h_e, jx, jy = _bath_ops(p.bath)
    dim = p.N + 1
    pref = p.bath.f / (2.0 * np.sqrt(p.bath.N))
    H = (p.omega * kron_all(SIGMA_Z, np.eye(dim))
         + pref * (kron_all(SIGMA_X, jx) + kron_all(SIGMA_Y, jy))
         + kron_all(np.eye(2), h_e))
    return H


def two_qubit_hamiltonian(p):
    """Full H for two qubits with private baths, ordering (A, B, E1, E2)."""
    _check_budget(p.N)
    dim = p.N + 1
    i2, ib = np.eye(2), np.eye(dim)
    he1, jx1, jy1 = _bath_ops(p.bath1)
    he2, jx2, jy2 = _bath_ops(p.bath2)
    pref1 = p.bath1.f / (2.0 * np.sqrt(p.bath1.N))
    pref2 = p.bath2.f / (2.0 * np.sqrt(p.bath2.N))
    H = (-p.J * kron_all(SIGMA_Z, SIGMA_Z, ib, ib)
         + p.omega1 * kron_all(SIGMA_Z, i2, ib, ib)
         + p.omega2 * kron_all(i2, SIGMA_Z, ib, ib)
         + pref1 * (kron_all(SIGMA_X, i2, jx1, ib)
                    + kron_all(SIGMA_Y, i2, jy1, ib))
         + pref2 * (kron_all(i2, SIGMA_X, ib, jx2)
                    + kron_all(i2, SIGMA_Y, ib, jy2))
         + kron_all(i2, i2, he1, ib) + kron_all(i2, i2, ib, he2))
    return H


def family_sector_states(family, n1, n2, N):
    """Valid (system index, bath-1 label, bath-2 label) triples of a sector."""
    t2, shift2, t1, shift1 = _CHANNELS[family]
    states = [(_SYS_INDEX[family], n1, n2)]
    if 0 <= n2 + shift2 <= N:
        states.append((_SYS_INDEX[t2], n1, n2 + shift2))
    if 0 <= n1 + shift1 <= N:
        states.append((_SYS_INDEX[t1], n1 + shift1, n2))
    return states


def _evolve_in_subspace(H, flat_indices, t):
    """Amplitudes of exp(-iHt)|first basis state> within a listed subspace."""
    sub = H[np.ix_(flat_indices, flat_indices)]
    lam, U = np.linalg.eigh(sub)
    return U @ (np.exp(-1j * lam * t) * U.conj().T[:, 0])


def _model_family_amps(H, family, n1, n2, N, t):
    """[(system index, (m1, m2), amplitude)] of the evolved sector state."""
    states = family_sector_states(family, n1, n2, N)
    dim = N + 1
    flat = [(s * dim + a) * dim + b for (s, a, b) in states]
    v = _evolve_in_subspace(H, flat, t)
    return [(s, (a, b), v[k]) for k, (s, a, b) in enumerate(states)]


def _all_family_amps(p, t):
    """Evolved sector states for every family and every (n1, n2)."""
    H = two_qubit_hamiltonian(p)
    dim = p.N + 1
    out = {}
    for fam in BASIS_TWO_QUBIT:
        for a in range(dim):
            for b in range(dim):
                out[(fam, a, b)] = _model_family_amps(H, fam, a, b, p.N, t)
    return out


def _paired_sum(rho0, configs):
    """Accumulate sum_k,l rho0[k,l] <bath labels matched> into a 4x4 block.

    ``configs`` yields (weight, left_amps, right_amps) where each amps
    entry is [(system index, full-label tuple, amplitude)].
    """
    rho0 = np.asarray(rho0, dtype=complex)
    out = np.zeros((4, 4), dtype=complex)
    for weight, left, right in configs:
        for k, fam_k in enumerate(BASIS_TWO_QUBIT):
            for l, fam_l in enumerate(BASIS_TWO_QUBIT):
                w0 = rho0[k, l] * weight
                if w0 == 0:
                    continue
                for (u, lab_l, amp_l) in left[fam_k]:
                    for (v, lab_r, amp_r) in right[fam_l]:
                        if lab_l == lab_r:
                            out[u, v] += w0 * amp_l * np.conj(amp_r)
    return out


def exact_case_a(rho0, p, t):
    """Reference reduced state for identical left/right dynamics."""
    amps = _all_family_amps(p, t)
    p1 = thermal_probabilities(p.bath1)
    p2 = thermal_probabilities(p.bath2)
    dim = p.N + 1

    def configs():
        for a in range(dim):
            for b in range(dim):
                entry = {fam: [(s, lab, amp)
                               for (s, lab, amp) in amps[(fam, a, b)]]
                         for fam in BASIS_TWO_QUBIT}
                yield p1[a] * p2[b], entry, entry

    return _paired_sum(rho0, configs())


def exact_case_b(rho0, p_left, p_right, t, shared="bath1"):
    """Reference cross block, one shared bath, three bath registers."""
    if shared not in ("bath1", "bath2"):
        raise ValueError(f"shared must be 'bath1' or 'bath2', not {shared!r}")
    if getattr(p_left, shared) != getattr(p_right, shared):
        raise ValueError("shared bath differs between the two sides")
    amps_l = _all_family_amps(p_left, t)
    amps_r = _all_family_amps(p_right, t)
    dim = p_left.N + 1

    if shared == "bath1":
        ps = thermal_probabilities(p_left.bath1)
        pl = thermal_probabilities(p_left.bath2)
        pr = thermal_probabilities(p_right.bath2)

        # registers (E_shared, E_left2, E_right2); untouched labels ride along
        def labels_l(m1, m2, nl, nr):
            return (m1, m2, nr)

        def labels_r(m1, m2, nl, nr):
            return (m1, nl, m2)
    else:
        ps = thermal_probabilities(p_left.bath2)
        pl = thermal_probabilities(p_left.bath1)
        pr = thermal_probabilities(p_right.bath1)

        # registers (E_left1, E_right1, E_shared)
        def labels_l(m1, m2, nl, nr):
            return (m1, nr, m2)

        def labels_r(m1, m2, nl, nr):
            return (nl, m1, m2)

    def configs():
        for ns in range(dim):
            for nl in range(dim):
                for nr in range(dim):
                    w = ps[ns] * pl[nl] * pr[nr]
                    if shared == "bath1":
                        sec_l, sec_r = (ns, nl), (ns, nr)
                    else:
                        sec_l, sec_r = (nl, ns), (nr, ns)
                    left = {fam: [(s, labels_l(m1, m2, nl, nr), amp)
                                  for (s, (m1, m2), amp)
                                  in amps_l[(fam,) + sec_l]]
                            for fam in BASIS_TWO_QUBIT}
                    right = {fam: [(s, labels_r(m1, m2, nl, nr), amp)
                                   for (s, (m1, m2), amp)
                                   in amps_r[(fam,) + sec_r]]
                             for fam in BASIS_TWO_QUBIT}
                    yield w, left, right

    return _paired_sum(rho0, configs())


def exact_case_c(rho0, p_left, p_right, t):
    """Reference cross block with four distinct bath registers."""
    amps_l = _all_family_amps(p_left, t)
    amps_r = _all_family_amps(p_right, t)
    dim = p_left.N + 1
    pl1 = thermal_probabilities(p_left.bath1)
    pl2 = thermal_probabilities(p_left.bath2)
    pr1 = thermal_probabilities(p_right.bath1)
    pr2 = thermal_probabilities(p_right.bath2)

    # registers (E_l1, E_l2, E_r1, E_r2)
    def configs():
        for a1 in range(dim):
            for a2 in range(dim):
                for b1 in range(dim):
                    for b2 in range(dim):
                        w = pl1[a1] * pl2[a2] * pr1[b1] * pr2[b2]
                        left = {fam: [(s, (m1, m2, b1, b2), amp)
                                      for (s, (m1, m2), amp)
                                      in amps_l[(fam, a1, a2)]]
                                for fam in BASIS_TWO_QUBIT}
                        right = {fam: [(s, (a1, a2, m1, m2), amp)
                                       for (s, (m1, m2), amp)
                                       in amps_r[(fam, b1, b2)]]
                                 for fam in BASIS_TWO_QUBIT}
                        yield w, left, right

    return _paired_sum(rho0, configs())


def _single_qubit_propagator(p, t):
    """exp(-iHt) for one qubit + bath, as a dense matrix."""
    H = single_qubit_hamiltonian(p)
    lam, U = np.linalg.eigh(H)
    return (U * np.exp(-1j * lam * t)) @ U.conj().T


def exact_single_qubit_block(rho0, p_left, p_right, t):
    """Reference single-qubit block by unrestricted evolution.

    Identical left/right parameters give the diagonal block (one shared
    bath register); otherwise the two sides carry independent registers.
    The single-qubit exchange sectors are exactly invariant, so no model
    restriction is involved here.
    """
    dim_l = p_left.N + 1
    dim_r = p_right.N + 1
    ul = _single_qubit_propagator(p_left, t).reshape(2, dim_l, 2, dim_l)
    pl = thermal_probabilities(p_left.bath)
    rho0 = np.asarray(rho0, dtype=complex)
    if p_left == p_right:
        # Psi[s_out, m, s_in] for each initial n; pair over m with weight.
        out = np.zeros((2, 2), dtype=complex)
        for n in range(dim_l):
            psi = ul[:, :, :, n]  # [s_out, m, s_in]
            out += pl[n] * np.einsum("ami,bmj,ij->ab",
                                     psi, psi.conj(), rho0)
        return out
    ur = _single_qubit_propagator(p_right, t).reshape(2, dim_r, 2, dim_r)
    pr = thermal_probabilities(p_right.bath)
    out = np.zeros((2, 2), dtype=complex)
    for nl in range(dim_l):
        for nr in range(dim_r):
            # left register evolves on the ket side only, right register on
            # the bra side; embed and trace by explicit label matching.
            psi_l = ul[:, :, :, nl]          # [s_out, m_l, s_in]
            psi_r = ur[:, :, :, nr]          # [s'_out, m_r, s'_in]
            # labels: left (m_l, nr), right (nl, m_r) -> m_l = nl, m_r = nr
            out += (pl[nl] * pr[nr]) * np.einsum(
                "ai,bj,ij->ab", psi_l[:, nl, :], psi_r[:, nr, :].conj(), rho0)
    return out


def _conditional_hamiltonian(bath0, bath1, omega_a, omega_b):
    """Conditional H for the teleport composite, ordering (A, B, C, E0, E1).

    Control value 0 couples A-E0 and B-E1; value 1 couples A-E1 and B-E0.
    Qubit splittings and both bath energies act in every branch.
    """
    d0, d1 = bath0.N + 1, bath1.N + 1
    i2, i0, i1 = np.eye(2), np.eye(d0), np.eye(d1)
    he0, jx0, jy0 = _bath_ops(bath0)
    he1, jx1, jy1 = _bath_ops(bath1)
    pref0 = bath0.f / (2.0 * np.sqrt(bath0.N))
    pref1 = bath1.f / (2.0 * np.sqrt(bath1.N))
    proj1 = np.diag([1.0, 0.0]) + 0j   # control |1> is index 0
    proj0 = np.diag([0.0, 1.0]) + 0j
    H = (omega_a * kron_all(SIGMA_Z, i2, i2, i0, i1)
         + omega_b * kron_all(i2, SIGMA_Z, i2, i0, i1)
         + kron_all(i2, i2, i2, he0, i1)
         + kron_all(i2, i2, i2, i0, he1)
         # branch |0><0|_C: A-E0, B-E1
         + pref0 * (kron_all(SIGMA_X, i2, proj0, jx0, i1)
                    + kron_all(SIGMA_Y, i2, proj0, jy0, i1))
         + pref1 * (kron_all(i2, SIGMA_X, proj0, i0, jx1)
                    + kron_all(i2, SIGMA_Y, proj0, i0, jy1))
         # branch |1><1|_C: A-E1, B-E0
         + pref1 * (kron_all(SIGMA_X, i2, proj1, i0, jx1)
                    + kron_all(SIGMA_Y, i2, proj1, i0, jy1))
         + pref0 * (kron_all(i2, SIGMA_X, proj1, jx0, i1)
                    + kron_all(i2, SIGMA_Y, proj1, jy0, i1)))
    return H, [2, 2, 2, d0, d1]


def exact_teleport_state(c0, c1, bath0, bath1, omega_a, omega_b, t,
                         rho_ab0=None):
    """Reference rho_ABC by unrestricted conditional evolution."""
    from .assembly import BELL_PHI_PLUS
    _check_budget(max(bath0.N, bath1.N))
    if rho_ab0 is None:
        rho_ab0 = np.outer(BELL_PHI_PLUS, BELL_PHI_PLUS.conj())
    H, dims = _conditional_hamiltonian(bath0, bath1, omega_a, omega_b)
    psi_c = np.array([c1, c0], dtype=complex)
    rho_c = np.outer(psi_c, psi_c.conj())
    rho_e0 = np.diag(thermal_probabilities(bath0)) + 0j
    rho_e1 = np.diag(thermal_probabilities(bath1)) + 0j
    rho = kron_all(rho_ab0, rho_c, rho_e0, rho_e1)
    lam, U = np.linalg.eigh(H)
    prop = (U * np.exp(-1j * lam * t)) @ U.conj().T
    rho_t = prop @ rho @ prop.conj().T
    return partial_trace(rho_t, dims, keep=(0, 1, 2))


def exact_control_system_state(psi0, bath0, bath1, omega, t):
    """Reference control (x) system state by conditional evolution.

    Each control value evolves the system with its own bath only; the
    other bath is untouched in that branch (it enters the Hamiltonian
    only through the branch that couples to it).
    """
    _check_budget(max(bath0.N, bath1.N))
    d0, d1 = bath0.N + 1, bath1.N + 1
    i2 = np.eye(2)
    he0, jx0, jy0 = _bath_ops(bath0)
    he1, jx1, jy1 = _bath_ops(bath1)
    pref0 = bath0.f / (2.0 * np.sqrt(bath0.N))
    pref1 = bath1.f / (2.0 * np.sqrt(bath1.N))
    proj1 = np.diag([1.0, 0.0]) + 0j
    proj0 = np.diag([0.0, 1.0]) + 0j
    # ordering (C, S, E0, E1)
    h1 = (omega * kron_all(proj1, SIGMA_Z, np.eye(d0), np.eye(d1))
          + pref1 * (kron_all(proj1, SIGMA_X, np.eye(d0), jx1)
                     + kron_all(proj1, SIGMA_Y, np.eye(d0), jy1))
          + kron_all(proj1, i2, np.eye(d0), he1))
    h0 = (omega * kron_all(proj0, SIGMA_Z, np.eye(d0), np.eye(d1))
          + pref0 * (kron_all(proj0, SIGMA_X, jx0, np.eye(d1))
                     + kron_all(proj0, SIGMA_Y, jy0, np.eye(d1)))
          + kron_all(proj0, i2, he0, np.eye(d1)))
    H = h0 + h1
    psi0 = np.asarray(psi0, dtype=complex)
    rho_cs = np.outer(psi0, psi0.conj())
    rho = kron_all(rho_cs,
                   np.diag(thermal_probabilities(bath0)) + 0j,
                   np.diag(thermal_probabilities(bath1)) + 0j)
    lam, U = np.linalg.eigh(H)
    prop = (U * np.exp(-1j * lam * t)) @ U.conj().T
    rho_t = prop @ rho @ prop.conj().T
    return partial_trace(rho_t, [2, 2, d0, d1], keep=(0, 1))


def ode_cross_check(G, t, tol=1e-12):
    """Integrate dv/dt = G v from (1, 0, ...) with an adaptive RK method."""
    if tol < 1e-12:
        raise ValueError("tol below 1e-12 is not resolvable here")
    G = np.asarray(G, dtype=complex)
    v0 = np.zeros(G.shape[0], dtype=complex)
    v0[0] = 1.0
    sol = solve_ivp(lambda _, y: G @ y, (0.0, float(t)), v0,
                    method="DOP853", rtol=tol, atol=tol)
    if not sol.success:
        raise RuntimeError(f"ODE integration failed: {sol.message}")
    return sol.y[:, -1]


def truncation_gap(p, t, max_sectors=None):
    """Max deviation between unrestricted and sector-restricted evolution.

    Returns the largest 2-norm difference, over families and sectors,
    between exp(-iHt)|k, n1, n2> under the full two-qubit Hamiltonian and
    the model's sector-restricted evolution.  This is a diagnostic of the
    model definition, not an implementation check.
    """
    H = two_qubit_hamiltonian(p)
    lam, U = np.linalg.eigh(H)
    prop = (U * np.exp(-1j * lam * t)) @ U.conj().T
    dim = p.N + 1
    worst = 0.0
    count = 0
    for fam in BASIS_TWO_QUBIT:
        for a in range(dim):
            for b in range(dim):
                if max_sectors is not None and count >= max_sectors:
                    return worst
                count += 1
                states = family_sector_states(fam, a, b, p.N)
                flat0 = (_SYS_INDEX[fam] * dim + a) * dim + b
                full = prop[:, flat0]
                model = np.zeros_like(full)
                flat = [(s * dim + x) * dim + y for (s, x, y) in states]
                model[flat] = _evolve_in_subspace(H, flat, t)
                worst = max(worst, float(np.linalg.norm(full - model)))
    return worst
