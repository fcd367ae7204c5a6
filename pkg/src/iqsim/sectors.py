"""Per-sector amplitude dynamics for the dressed exchange model.

Each initial system basis state, together with a pair of bath excitation
labels (n1, n2), spans a small invariant subspace in which the dynamics
closes on c-number amplitudes:

* two-qubit families, one per initial basis state, each a triple
  (stay, swap-2, swap-1) of amplitudes::

      |11> -> (A1, B1, C1)      |00> -> (D1, E1, F1)
      |01> -> (G1, H1, I1)      |10> -> (J1, K1, L1)

  The swap-2 channel exchanges one excitation between qubit B and bath 2,
  the swap-1 channel between qubit A and bath 1.  The amplitude with which
  a swap channel is physically populated is sqrt(w) times the stored
  c-number, where w is the channel's integer norm weight (n+1 for an
  emitting channel, n for an absorbing one); the weighted norms

      |A1|^2 + (n2+1)|B1|^2 + (n1+1)|C1|^2 = 1
      |D1|^2 +  n2   |E1|^2 +  n1   |F1|^2 = 1
      |G1|^2 + (n2+1)|H1|^2 +  n1   |I1|^2 = 1
      |J1|^2 +  n2   |K1|^2 + (n1+1)|L1|^2 = 1

  are conserved exactly.

* single-qubit families for one qubit coupled to one bath::

      |1> -> (A1, B1)  with |A1|^2 + (n+1)|B1|^2 = 1
      |0> -> (C1, D1)  with |C1|^2 +  n   |D1|^2 = 1

Generators are exponentiated through a symmetrized eigendecomposition:
with D = diag(sqrt(w)) the scaled generator S = D K D^{-1} is real
symmetric, so exp(-iKt) = D^{-1} U exp(-i lambda t) U^T D is exact and
unconditionally stable.  Channels whose integer weight vanishes (an
absorbing channel on an empty ladder, an emitting channel on a full one)
have exactly zero coupling and stay unpopulated; no special-case branching
is needed beyond skipping the 0/0 rescale.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .baths import BathSpec, _eps, thermal_probabilities

__all__ = [
    "TwoQubitParams",
    "SingleQubitParams",
    "TWO_QUBIT_FAMILIES",
    "SINGLE_QUBIT_FAMILIES",
    "BASIS_TWO_QUBIT",
    "family_norm_weights",
    "family_generator",
    "single_qubit_generator",
    "single_qubit_norm_weights",
    "propagate_sector",
    "SectorTables",
    "two_qubit_tables",
    "SingleQubitTables",
    "single_qubit_tables",
]

#: Composite basis order; index 0 = |11>, 1 = |10>, 2 = |01>, 3 = |00>.
BASIS_TWO_QUBIT = ("11", "10", "01", "00")

TWO_QUBIT_FAMILIES = ("11", "00", "01", "10")
SINGLE_QUBIT_FAMILIES = ("1", "0")

# Channel table per family: (swap-2 target, bath-2 shift, swap-1 target,
# bath-1 shift).  Shift +1 means the qubit deposits its excitation in the
# bath (emitting channel, weight n+1), -1 means it absorbs one (weight n).
CHANNELS = {
    "11": ("10", +1, "01", +1),
    "00": ("01", -1, "10", -1),
    "01": ("00", +1, "11", -1),
    "10": ("11", -1, "00", +1),
}
_CHANNELS = CHANNELS


@dataclass(frozen=True)
class TwoQubitParams:
    """Two coupled qubits, each attached to its own collective-spin bath.

    ``J`` is the inter-qubit ZZ coupling; ``omega1``/``omega2`` the qubit
    level splittings.  Both baths must share the same ladder size N.
    """

    omega1: float
    omega2: float
    J: float
    bath1: BathSpec
    bath2: BathSpec

    def __post_init__(self):
        if self.bath1.N != self.bath2.N:
            raise ValueError(
                f"baths must share N: {self.bath1.N} != {self.bath2.N}")

    @property
    def N(self):
        return self.bath1.N

    def system_energy(self, state):
        """H_S eigenvalue of a composite basis state, e.g. '10'."""
        za = +1.0 if state[0] == "1" else -1.0
        zb = +1.0 if state[1] == "1" else -1.0
        return -self.J * za * zb + self.omega1 * za + self.omega2 * zb


@dataclass(frozen=True)
class SingleQubitParams:
    """One qubit with splitting ``omega`` attached to one bath."""

    omega: float
    bath: BathSpec

    @property
    def N(self):
        return self.bath.N


def family_norm_weights(family, n1, n2):
    """Integer norm weights (1, w_swap2, w_swap1) of a two-qubit family."""
    _, shift2, _, shift1 = _CHANNELS[family]
    w2 = n2 + 1 if shift2 > 0 else n2
    w1 = n1 + 1 if shift1 > 0 else n1
    return 1.0, float(w2), float(w1)


def _hp_factor(n_lower, N):
    """Ladder matrix-element factor sqrt(1 - n/N) at the lower label."""
    return np.sqrt(np.maximum(0.0, 1.0 - n_lower / N))


def _channel_terms(bath, n, shift):
    """(diag energy of the shifted bath level, hp factor, weight) arrays."""
    if shift > 0:
        return _eps(n + 1, bath.s, bath.N), _hp_factor(n, bath.N), n + 1.0
    return _eps(n - 1, bath.s, bath.N), _hp_factor(n - 1, bath.N), n * 1.0


def _family_matrices(family, n1, n2, p):
    """Real matrices (K, S) for one family on sector grids n1, n2.

    ``n1``/``n2`` may be scalars or broadcastable arrays; the returned
    arrays have shape (..., 3, 3).  K is the generator of d(v)/dt = -iKv
    exactly as the equations of motion read; S = D K D^{-1} is its
    symmetrized form.
    """
    t2, shift2, t1, shift1 = _CHANNELS[family]
    n1 = np.asarray(n1, dtype=float)
    n2 = np.asarray(n2, dtype=float)
    e1_stay = _eps(n1, p.bath1.s, p.bath1.N)
    e2_stay = _eps(n2, p.bath2.s, p.bath2.N)

    e2_ch, fac2, w2 = _channel_terms(p.bath2, n2, shift2)
    e1_ch, fac1, w1 = _channel_terms(p.bath1, n1, shift1)

    shape = np.broadcast(n1, n2).shape
    K = np.zeros(shape + (3, 3))
    S = np.zeros(shape + (3, 3))
    for M in (K, S):
        M[..., 0, 0] = p.system_energy(family) + e1_stay + e2_stay
        M[..., 1, 1] = p.system_energy(t2) + e1_stay + e2_ch
        M[..., 2, 2] = p.system_energy(t1) + e1_ch + e2_stay
    K[..., 0, 1] = p.bath2.f * w2 * fac2
    K[..., 1, 0] = p.bath2.f * fac2
    K[..., 0, 2] = p.bath1.f * w1 * fac1
    K[..., 2, 0] = p.bath1.f * fac1
    S[..., 0, 1] = S[..., 1, 0] = p.bath2.f * np.sqrt(w2) * fac2
    S[..., 0, 2] = S[..., 2, 0] = p.bath1.f * np.sqrt(w1) * fac1
    return K, S


def family_generator(family, n1, n2, p):
    """Generator G = -iK of one two-qubit family at sector (n1, n2).

    The amplitude vector v = (stay, swap-2, swap-1) obeys dv/dt = G v with
    v(0) = (1, 0, 0).
    """
    if family not in TWO_QUBIT_FAMILIES:
        raise ValueError(f"unknown family {family!r}")
    if not (0 <= n1 <= p.N and 0 <= n2 <= p.N):
        raise ValueError(f"sector ({n1},{n2}) outside 0..{p.N}")
    K, _ = _family_matrices(family, n1, n2, p)
    return -1j * K


def single_qubit_norm_weights(family, n):
    """Integer norm weights (1, w_swap) of a single-qubit family."""
    return (1.0, n + 1.0) if family == "1" else (1.0, float(n))


def _single_qubit_matrices(family, n, p):
    """(K, S) for the single-qubit families on a label grid n."""
    n = np.asarray(n, dtype=float)
    bath = p.bath
    e_stay = _eps(n, bath.s, bath.N)
    if family == "1":
        e_sys, e_sys_ch = p.omega, -p.omega
        e_ch, fac, w = _channel_terms(bath, n, +1)
    elif family == "0":
        e_sys, e_sys_ch = -p.omega, p.omega
        e_ch, fac, w = _channel_terms(bath, n, -1)
    else:
        raise ValueError(f"unknown single-qubit family {family!r}")
    K = np.zeros(n.shape + (2, 2))
    S = np.zeros(n.shape + (2, 2))
    for M in (K, S):
        M[..., 0, 0] = e_sys + e_stay
        M[..., 1, 1] = e_sys_ch + e_ch
    K[..., 0, 1] = bath.f * w * fac
    K[..., 1, 0] = bath.f * fac
    S[..., 0, 1] = S[..., 1, 0] = bath.f * np.sqrt(w) * fac
    return K, S


def single_qubit_generator(family, n, p):
    """Generator G = -iK of a single-qubit family at ladder label n."""
    if not 0 <= n <= p.N:
        raise ValueError(f"label {n} outside 0..{p.N}")
    K, _ = _single_qubit_matrices(family, n, p)
    return -1j * K


def _propagate_symmetric(S, weights, t):
    """exp(-iSt) applied to e1, rescaled back to c-number amplitudes.

    ``S`` has shape (..., d, d); ``weights`` shape (..., d).  Channels with
    zero weight have zero coupling in S and receive amplitude 0.
    """
    lam, U = np.linalg.eigh(S)
    phase = np.exp(-1j * lam * t)
    # u(t) = U diag(phase) U^T e1  (U real orthogonal)
    u = np.einsum("...ij,...j,...j->...i", U, phase, U[..., 0, :])
    w = np.asarray(weights, dtype=float)
    scale = np.zeros_like(w)
    np.divide(1.0, np.sqrt(w), out=scale, where=w > 0)
    return u * scale


def propagate_sector(G, t, weights):
    """Amplitudes v(t) = exp(Gt) e1 for one family generator.

    ``weights`` are the family's integer norm weights; the exponential is
    evaluated through the symmetrized eigendecomposition described in the
    module docstring.
    """
    if t < 0:
        raise ValueError("t must be nonnegative")
    K = np.asarray(1j * np.asarray(G))
    if np.max(np.abs(K.imag)) > 1e-12:
        raise ValueError("generator is not of the form -i * (real matrix)")
    K = K.real
    w = np.asarray(weights, dtype=float)
    d = np.sqrt(np.where(w > 0, w, 1.0))
    S = (d[:, None] * K) / d[None, :]
    S = np.where((w[:, None] > 0) & (w[None, :] > 0), S, 0.0)
    np.fill_diagonal(S, np.diag(K))
    S = 0.5 * (S + S.T)
    return _propagate_symmetric(S, w, t)


@dataclass(frozen=True)
class SectorTables:
    """All two-qubit family amplitudes on the full (n1, n2) sector grid.

    ``amps[family]`` has shape (N+1, N+1, 3) holding (stay, swap-2,
    swap-1) c-numbers; ``probs1``/``probs2`` are the baths' normalized
    thermal occupations.
    """

    params: TwoQubitParams
    t: float
    amps: dict
    probs1: np.ndarray
    probs2: np.ndarray

    @property
    def N(self):
        return self.params.N


def two_qubit_tables(p, t):
    """Solve every sector of every family at time ``t`` in one batch."""
    if t < 0:
        raise ValueError("t must be nonnegative")
    dim = p.N + 1
    n1, n2 = np.meshgrid(np.arange(dim), np.arange(dim), indexing="ij")
    amps = {}
    for family in TWO_QUBIT_FAMILIES:
        _, S = _family_matrices(family, n1, n2, p)
        _, shift2, _, shift1 = _CHANNELS[family]
        w = np.stack([
            np.ones_like(n1, dtype=float),
            n2 + 1.0 if shift2 > 0 else n2.astype(float),
            n1 + 1.0 if shift1 > 0 else n1.astype(float),
        ], axis=-1)
        amps[family] = _propagate_symmetric(S, w, t)
    return SectorTables(
        params=p, t=t, amps=amps,
        probs1=thermal_probabilities(p.bath1),
        probs2=thermal_probabilities(p.bath2),
    )


@dataclass(frozen=True)
class SingleQubitTables:
    """Single-qubit family amplitudes on the ladder grid.

    ``amps[family]`` has shape (N+1, 2) holding (stay, swap) c-numbers.
    """

    params: SingleQubitParams
    t: float
    amps: dict
    probs: np.ndarray

    @property
    def N(self):
        return self.params.N


def single_qubit_tables(p, t):
    """Solve both single-qubit families on the full ladder at time ``t``."""
    if t < 0:
        raise ValueError("t must be nonnegative")
    n = np.arange(p.N + 1)
    amps = {}
    for family in SINGLE_QUBIT_FAMILIES:
        _, S = _single_qubit_matrices(family, n, p)
        w = np.stack([
            np.ones_like(n, dtype=float),
            n + 1.0 if family == "1" else n.astype(float),
        ], axis=-1)
        amps[family] = _propagate_symmetric(S, w, t)
    return SingleQubitTables(
        params=p, t=t, amps=amps, probs=thermal_probabilities(p.bath))
