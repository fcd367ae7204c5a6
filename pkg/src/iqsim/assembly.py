"""Thermal assembly of density-matrix blocks from sector amplitudes.

A path-indexed block is the system-space operator obtained by evolving
with the left path pair's dynamics on the ket side, the right pair's on
the bra side, and tracing every bath:

* same baths, same coupling on both sides      -> ``case_a`` (a physical,
  trace-preserving map of the initial state);
* one bath shared, the other distinct          -> ``case_b``;
* all four baths distinct                      -> ``case_c``.

Every element is a thermal contraction of products of family amplitudes.
The contraction rule is mechanical: a ket-side amplitude pairs with a
bra-side amplitude iff every bath register ends on the same ladder label.
For a shared bath both sides start from the same thermal label, so the
channel shifts must agree; a bath seen by only one side must be returned
to its initial label, which kills its shifted channels.  This module
implements that rule directly on the amplitude tables, which reproduces
(and fixes two transcription slips of) the long closed-form element lists;
the exact-diagonalization oracle pins every element.

Cost: the shared-label sums factorize, so Cases B and C are assembled in
O((N+1)^2) work instead of the naive O((N+1)^3) / O((N+1)^4).  The naive
summation order is retained (``case_b_naive``, ``case_c_naive``) as a
test reference for small N.

Single-qubit blocks follow the same rule with one bath per side, and two
composites are assembled from them: the three-qubit teleportation state
(two payload qubits plus a control whose value decides which bath each
payload crosses) and the control (+) system two-qubit state used for the
complementarity diagnostics.
"""

from __future__ import annotations

import math

import numpy as np

from .sectors import (
    BASIS_TWO_QUBIT,
    SINGLE_QUBIT_FAMILIES,
    TWO_QUBIT_FAMILIES,
    SingleQubitParams,
    single_qubit_tables,
)

__all__ = [
    "case_a",
    "case_b",
    "case_c",
    "case_b_naive",
    "case_c_naive",
    "single_qubit_block",
    "single_qubit_cross_block",
    "teleport_state",
    "control_system_state",
    "BELL_PHI_PLUS",
]

_SYS_INDEX = {s: i for i, s in enumerate(BASIS_TWO_QUBIT)}

#: |Phi+> = (|11> + |00>)/sqrt(2) in the package basis order.
BELL_PHI_PLUS = np.zeros(4, dtype=complex)
BELL_PHI_PLUS[[0, 3]] = 1.0 / math.sqrt(2.0)

_CHANNELS = {
    "11": ("10", +1, "01", +1),
    "00": ("01", -1, "10", -1),
    "01": ("00", +1, "11", -1),
    "10": ("11", -1, "00", +1),
}


def _physical_reaches(tables):
    """Per family: [(target index, (shift1, shift2), physical amplitude)].

    The physical amplitude of a swap channel is sqrt(w) times the stored
    c-number, with w the channel's integer norm weight on the initial
    label grid.
    """
    dim = tables.N + 1
    n1 = np.arange(dim, dtype=float)[:, None]
    n2 = np.arange(dim, dtype=float)[None, :]
    reaches = {}
    for fam in TWO_QUBIT_FAMILIES:
        t2, shift2, t1, shift1 = _CHANNELS[fam]
        amp = tables.amps[fam]
        w2 = n2 + 1.0 if shift2 > 0 else np.broadcast_to(n2, (dim, dim))
        w1 = n1 + 1.0 if shift1 > 0 else np.broadcast_to(n1, (dim, dim))
        reaches[fam] = [
            (_SYS_INDEX[fam], (0, 0), amp[:, :, 0]),
            (_SYS_INDEX[t2], (0, shift2), np.sqrt(w2) * amp[:, :, 1]),
            (_SYS_INDEX[t1], (shift1, 0), np.sqrt(w1) * amp[:, :, 2]),
        ]
    return reaches


def _assemble(rho0, left, right, pair_rule, contract):
    rho0 = np.asarray(rho0, dtype=complex)
    out = np.zeros((4, 4), dtype=complex)
    for fk in TWO_QUBIT_FAMILIES:
        for fl in TWO_QUBIT_FAMILIES:
            w0 = rho0[_SYS_INDEX[fk], _SYS_INDEX[fl]]
            if w0 == 0:
                continue
            for (u, sh_l, amp_l) in left[fk]:
                for (v, sh_r, amp_r) in right[fl]:
                    if pair_rule(sh_l, sh_r):
                        out[u, v] += w0 * contract(amp_l, amp_r)
    return out


def case_a(rho0, tables):
    """Reduced state at tables.t for identical left/right path dynamics."""
    reaches = _physical_reaches(tables)
    W = np.outer(tables.probs1, tables.probs2)

    def contract(amp_l, amp_r):
        return np.sum(W * amp_l * amp_r.conj())

    return _assemble(rho0, reaches, reaches,
                     lambda a, b: a == b, contract)


def _check_shared(left, right, shared):
    if left.t != right.t:
        raise ValueError("left/right tables evaluated at different times")
    a = getattr(left.params, shared)
    b = getattr(right.params, shared)
    if a != b:
        raise ValueError(
            f"{shared} must be identical on both sides of a shared-bath "
            f"block: {a} vs {b}")


def case_b(rho0, left, right, shared="bath1"):
    """Cross block with one bath shared and the other distinct per side.

    ``shared='bath1'`` keeps qubit A's bath common (the j != j' case);
    ``shared='bath2'`` is the mirror.  Uses the factorized O((N+1)^2)
    contraction.
    """
    if shared not in ("bath1", "bath2"):
        raise ValueError(f"shared must be 'bath1' or 'bath2', not {shared!r}")
    _check_shared(left, right, shared)
    rl = _physical_reaches(left)
    rr = _physical_reaches(right)

    if shared == "bath1":
        p_shared = left.probs1

        def rule(a, b):
            return a[1] == 0 and b[1] == 0 and a[0] == b[0]

        def contract(amp_l, amp_r):
            return np.sum(p_shared * (amp_l @ left.probs2)
                          * (amp_r @ right.probs2).conj())
    else:
        p_shared = left.probs2

        def rule(a, b):
            return a[0] == 0 and b[0] == 0 and a[1] == b[1]

        def contract(amp_l, amp_r):
            return np.sum(p_shared * (left.probs1 @ amp_l)
                          * (right.probs1 @ amp_r).conj())

    return _assemble(rho0, rl, rr, rule, contract)


def case_c(rho0, left, right):
    """Cross block with all four baths distinct; two independent double sums."""
    if left.t != right.t:
        raise ValueError("left/right tables evaluated at different times")
    rl = _physical_reaches(left)
    rr = _physical_reaches(right)

    def rule(a, b):
        return a == (0, 0) and b == (0, 0)

    def contract(amp_l, amp_r):
        sl = left.probs1 @ amp_l @ left.probs2
        sr = right.probs1 @ amp_r @ right.probs2
        return sl * np.conj(sr)

    return _assemble(rho0, rl, rr, rule, contract)


def case_b_naive(rho0, left, right, shared="bath1"):
    """Literal triple-sum reference for :func:`case_b` (small N only)."""
    _check_shared(left, right, shared)
    rl = _physical_reaches(left)
    rr = _physical_reaches(right)
    dim = left.N + 1

    if shared == "bath1":
        def rule(a, b):
            return a[1] == 0 and b[1] == 0 and a[0] == b[0]

        def contract(amp_l, amp_r):
            tot = 0.0 + 0.0j
            for ns in range(dim):
                for nl in range(dim):
                    for nr in range(dim):
                        tot += (left.probs1[ns] * left.probs2[nl]
                                * right.probs2[nr]
                                * amp_l[ns, nl] * np.conj(amp_r[ns, nr]))
            return tot
    else:
        def rule(a, b):
            return a[0] == 0 and b[0] == 0 and a[1] == b[1]

        def contract(amp_l, amp_r):
            tot = 0.0 + 0.0j
            for ns in range(dim):
                for nl in range(dim):
                    for nr in range(dim):
                        tot += (left.probs2[ns] * left.probs1[nl]
                                * right.probs1[nr]
                                * amp_l[nl, ns] * np.conj(amp_r[nr, ns]))
            return tot

    return _assemble(rho0, rl, rr, rule, contract)


def case_c_naive(rho0, left, right):
    """Literal quadruple-sum reference for :func:`case_c` (small N only)."""
    if left.t != right.t:
        raise ValueError("left/right tables evaluated at different times")
    rl = _physical_reaches(left)
    rr = _physical_reaches(right)
    dim = left.N + 1

    def rule(a, b):
        return a == (0, 0) and b == (0, 0)

    def contract(amp_l, amp_r):
        tot = 0.0 + 0.0j
        for a1 in range(dim):
            for a2 in range(dim):
                for b1 in range(dim):
                    for b2 in range(dim):
                        tot += (left.probs1[a1] * left.probs2[a2]
                                * right.probs1[b1] * right.probs2[b2]
                                * amp_l[a1, a2] * np.conj(amp_r[b1, b2]))
        return tot

    return _assemble(rho0, rl, rr, rule, contract)


# ---------------------------------------------------------------------------
# single-qubit blocks
# ---------------------------------------------------------------------------

def _sq_physical_reaches(tables):
    n = np.arange(tables.N + 1, dtype=float)
    amps = tables.amps
    return {
        "1": [(0, 0, amps["1"][:, 0]),
              (1, +1, np.sqrt(n + 1.0) * amps["1"][:, 1])],
        "0": [(1, 0, amps["0"][:, 0]),
              (0, -1, np.sqrt(n) * amps["0"][:, 1])],
    }


def _sq_assemble(rho0, left, right, rule, contract):
    rho0 = np.asarray(rho0, dtype=complex)
    out = np.zeros((2, 2), dtype=complex)
    for ki, fk in enumerate(SINGLE_QUBIT_FAMILIES):
        for li, fl in enumerate(SINGLE_QUBIT_FAMILIES):
            w0 = rho0[ki, li]
            if w0 == 0:
                continue
            for (u, sh_l, amp_l) in left[fk]:
                for (v, sh_r, amp_r) in right[fl]:
                    if rule(sh_l, sh_r):
                        out[u, v] += w0 * contract(amp_l, amp_r)
    return out


def single_qubit_block(rho0, tables):
    """Diagonal single-qubit block: one bath, identical on both sides."""
    reaches = _sq_physical_reaches(tables)

    def contract(amp_l, amp_r):
        return np.sum(tables.probs * amp_l * amp_r.conj())

    return _sq_assemble(rho0, reaches, reaches,
                        lambda a, b: a == b, contract)


def single_qubit_cross_block(rho0, left, right):
    """Off-diagonal single-qubit block: distinct baths left and right.

    Only label-returning (stay) amplitudes survive, so the block is built
    from products of the two baths' thermal amplitude sums.
    """
    if left.t != right.t:
        raise ValueError("left/right tables evaluated at different times")
    rl = _sq_physical_reaches(left)
    rr = _sq_physical_reaches(right)

    def contract(amp_l, amp_r):
        return (left.probs @ amp_l) * np.conj(right.probs @ amp_r)

    return _sq_assemble(rho0, rl, rr,
                        lambda a, b: a == 0 and b == 0, contract)


# ---------------------------------------------------------------------------
# conditional composites: teleportation state and control|system state
# ---------------------------------------------------------------------------

_SHIFT_CODE = {0: 0, +1: 1, -1: 2}


def _transition_tensor(tables):
    """G[n, out, in, shift] with physical amplitudes, for one qubit/bath."""
    dim = tables.N + 1
    G = np.zeros((dim, 2, 2, 3), dtype=complex)
    for fam_idx, fam in enumerate(SINGLE_QUBIT_FAMILIES):
        for (out, shift, amp) in _sq_physical_reaches(tables)[fam]:
            G[:, out, fam_idx, _SHIFT_CODE[shift]] = amp
    return G


def _pair_tensor(G_left, G_right, probs):
    """T[outL, inL, outR, inR]: one bath traced over matched final labels."""
    return np.einsum("nabs,n,ncds->abcd", G_left, probs, G_right.conj())


def _conditional_two_qubit_block(rho0_ab, g, probs, cv_left, cv_right):
    """Joint AB block for control values (ket cv_left, bra cv_right).

    ``g[(qubit, bathval)]`` are transition tensors; qubit A crosses bath
    E_c and qubit B bath E_{1-c} under control value c.  Each bath pairs
    the qubit that crosses it on the ket side with the one on the bra
    side, which couples the two qubits' amplitudes whenever the control
    values differ.
    """
    letters = {("A", "out_l"): "a", ("A", "in_l"): "w",
               ("B", "out_l"): "b", ("B", "in_l"): "x",
               ("A", "out_r"): "c", ("A", "in_r"): "y",
               ("B", "out_r"): "d", ("B", "in_r"): "z"}
    tensors, scripts = [], []
    for bath_val in (0, 1):
        lq = "A" if bath_val == cv_left else "B"
        rq = "A" if bath_val == cv_right else "B"
        tensors.append(_pair_tensor(g[(lq, bath_val)], g[(rq, bath_val)],
                                    probs[bath_val]))
        scripts.append(letters[(lq, "out_l")] + letters[(lq, "in_l")]
                       + letters[(rq, "out_r")] + letters[(rq, "in_r")])
    rho4 = np.asarray(rho0_ab, dtype=complex).reshape(2, 2, 2, 2)
    out = np.einsum(f"{scripts[0]},{scripts[1]},wxyz->abcd",
                    tensors[0], tensors[1], rho4)
    return out.reshape(4, 4)


def teleport_state(c0, c1, bath0, bath1, omega_a, omega_b, t,
                   rho_ab0=None):
    """Three-qubit state A (x) B (x) C after conditional transmission.

    The payload pair AB starts in |Phi+> (or ``rho_ab0``); the control C
    starts in c1|1> + c0|0>.  Control value 0 sends A through bath E0 and
    B through E1; value 1 swaps the assignment.  Returns the 8x8 density
    matrix with C as the last tensor slot.
    """
    if abs(abs(c0) ** 2 + abs(c1) ** 2 - 1.0) > 1e-10:
        raise ValueError("control amplitudes must satisfy |c0|^2+|c1|^2 = 1")
    if rho_ab0 is None:
        rho_ab0 = np.outer(BELL_PHI_PLUS, BELL_PHI_PLUS.conj())
    tabs = {
        ("A", 0): single_qubit_tables(SingleQubitParams(omega_a, bath0), t),
        ("A", 1): single_qubit_tables(SingleQubitParams(omega_a, bath1), t),
        ("B", 0): single_qubit_tables(SingleQubitParams(omega_b, bath0), t),
        ("B", 1): single_qubit_tables(SingleQubitParams(omega_b, bath1), t),
    }
    g = {k: _transition_tensor(v) for k, v in tabs.items()}
    probs = {0: tabs[("A", 0)].probs, 1: tabs[("A", 1)].probs}

    psi_c = np.array([c1, c0], dtype=complex)  # |1>-first control vector
    control_values = (1, 0)
    rho = np.zeros((4, 2, 4, 2), dtype=complex)  # (AB, C, AB', C')
    for i, cv in enumerate(control_values):
        for j, cvp in enumerate(control_values):
            coef = psi_c[i] * np.conj(psi_c[j])
            if coef == 0:
                continue
            block = _conditional_two_qubit_block(rho_ab0, g, probs, cv, cvp)
            rho[:, i, :, j] = coef * block
    return rho.reshape(8, 8)


def control_system_state(psi0, bath0, bath1, omega, t):
    """Control (x) system two-qubit state: the control value selects the
    system qubit's bath (value c -> bath E_c).

    ``psi0`` is the initial pure state over control (x) system in the
    |11>, |10>, |01>, |00> order with the control as the first label.
    """
    psi0 = np.asarray(psi0, dtype=complex)
    if abs(np.linalg.norm(psi0) - 1.0) > 1e-10:
        raise ValueError("initial state must be normalized")
    branches = psi0.reshape(2, 2)  # row: control index (0 = |1>)
    tabs = {
        1: single_qubit_tables(SingleQubitParams(omega, bath1), t),
        0: single_qubit_tables(SingleQubitParams(omega, bath0), t),
    }
    control_values = (1, 0)
    rho = np.zeros((2, 2, 2, 2), dtype=complex)  # (C, S, C', S')
    for i, cv in enumerate(control_values):
        for j, cvp in enumerate(control_values):
            rho0 = np.outer(branches[i], branches[j].conj())
            if cv == cvp:
                block = single_qubit_block(rho0, tabs[cv])
            else:
                block = single_qubit_cross_block(rho0, tabs[cv], tabs[cvp])
            rho[i, :, j, :] = block
    return rho.reshape(4, 4)
