"""Teleportation protocols over the conditional three-qubit state.

Two protocols act on rho_ABC (payload pair AB, control C last):

* standard: measure the control in the |+->/|-> basis, keep the branch
  state of AB, and report its best achievable teleportation fidelity;
* participatory: the state to be teleported is itself loaded onto the
  control, the pair (A, C) is measured in the Bell basis, and each branch
  of B is realigned by the optimal rotation from the Rodrigues formula.

Bell basis order is (Phi+, Phi-, Psi+, Psi-).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .assembly import teleport_state
from .measures import teleport_fidelity_max
from .validation import bloch_vector

__all__ = [
    "BranchError",
    "ProtocolOutcome",
    "BELL_LABELS",
    "bell_vector",
    "standard_protocol",
    "bell_project",
    "rodrigues_rotation",
    "participatory_fidelity",
    "participatory_protocol",
    "average_participatory_fidelity",
]

_BRANCH_TOL = 1e-14

BELL_LABELS = ("phi+", "phi-", "psi+", "psi-")


class BranchError(RuntimeError):
    """A measurement branch has vanishing probability."""

    def __init__(self, label, probability):
        super().__init__(f"branch {label} has probability {probability:.3e}")
        self.label = label
        self.probability = probability


@dataclass(frozen=True)
class ProtocolOutcome:
    """One measurement branch: its label, probability, state, fidelity."""

    branch: str
    probability: float
    state: np.ndarray
    fidelity: float


def bell_vector(k):
    """Bell state k on a qubit pair, in the |11>,|10>,|01>,|00> order."""
    v = np.zeros(4, dtype=complex)
    if k == 0:       # (|11> + |00>)/sqrt(2)
        v[[0, 3]] = 1.0
    elif k == 1:     # (|11> - |00>)/sqrt(2)
        v[0], v[3] = 1.0, -1.0
    elif k == 2:     # (|10> + |01>)/sqrt(2)
        v[[1, 2]] = 1.0
    elif k == 3:     # (|10> - |01>)/sqrt(2)
        v[1], v[2] = 1.0, -1.0
    else:
        raise ValueError(f"Bell index {k} outside 0..3")
    return v / math.sqrt(2.0)


def _control_blocks(rho_abc):
    """rho^{cc'} = <c|_C rho |c'>_C indexed by control value (0, 1)."""
    rho = np.asarray(rho_abc, dtype=complex).reshape(4, 2, 4, 2)
    # control index 0 is |1>, index 1 is |0>
    return {(0, 0): rho[:, 1, :, 1], (1, 1): rho[:, 0, :, 0],
            (0, 1): rho[:, 1, :, 0], (1, 0): rho[:, 0, :, 1]}


def standard_protocol(rho_abc, sign=+1):
    """Measure the control in |+>/|->; return the branch outcome on AB.

    The branch state is 1/(2p) (rho^00 + rho^11 +- rho^01 +- rho^10) with
    p its Born probability; fidelity is the branch state's maximal
    teleportation fidelity.
    """
    if sign not in (+1, -1):
        raise ValueError("sign must be +1 or -1")
    b = _control_blocks(rho_abc)
    raw = 0.5 * (b[(0, 0)] + b[(1, 1)] + sign * (b[(0, 1)] + b[(1, 0)]))
    p = float(np.real(np.trace(raw)))
    label = "+" if sign > 0 else "-"
    if p <= _BRANCH_TOL:
        raise BranchError(label, p)
    state = raw / p
    return ProtocolOutcome(branch=label, probability=p, state=state,
                           fidelity=teleport_fidelity_max(state))


def bell_project(rho_abc, k):
    """Project the (A, C) pair of rho_ABC onto Bell state k.

    Returns (state of B, branch probability).
    """
    rho = np.asarray(rho_abc, dtype=complex).reshape(2, 2, 2, 2, 2, 2)
    beta = bell_vector(k).reshape(2, 2)
    # slots: (a, b, c, a', b', c'); contract a,c and a',c' with the Bell state
    raw = np.einsum("ac,abcxyz,xz->by", beta.conj(), rho, beta)
    p = float(np.real(np.trace(raw)))
    if p <= _BRANCH_TOL:
        raise BranchError(BELL_LABELS[k], p)
    return raw / p, p


def _cross_matrix(u):
    return np.array([[0.0, -u[2], u[1]],
                     [u[2], 0.0, -u[0]],
                     [-u[1], u[0], 0.0]])


def rodrigues_rotation(nk, nc):
    """Rotation aligning branch vector nk with target vector nc.

    Returns (O, F_k) with O the proper rotation and F_k = (1 + O nk .
    nc)/2 = (1 + |nk||nc|)/2 the aligned overlap.  Degenerate cases:
    parallel vectors or nk = 0 give the identity; antiparallel vectors
    give a pi rotation about an axis perpendicular to nc.
    """
    nk = np.asarray(nk, dtype=float)
    nc = np.asarray(nc, dtype=float)
    lk, lc = np.linalg.norm(nk), np.linalg.norm(nc)
    fidelity = 0.5 * (1.0 + lk * lc)
    if lk < 1e-15 or lc < 1e-15:
        return np.eye(3), fidelity
    cross = np.cross(nk, nc)
    norm_cross = np.linalg.norm(cross)
    cos_t = float(nk @ nc) / (lk * lc)
    if norm_cross < 1e-14 * lk * lc:
        if cos_t > 0:
            return np.eye(3), fidelity
        # antiparallel: pi rotation about any axis perpendicular to nc
        trial = np.array([0.0, 0.0, 1.0])
        if abs(nc[2]) > 0.9 * lc:
            trial = np.array([1.0, 0.0, 0.0])
        axis = np.cross(nc, trial)
        axis /= np.linalg.norm(axis)
        K = _cross_matrix(axis)
        return np.eye(3) + 2.0 * (K @ K), fidelity
    axis = cross / norm_cross
    theta = math.acos(min(1.0, max(-1.0, cos_t)))
    K = _cross_matrix(axis)
    O = np.eye(3) + math.sin(theta) * K + (1.0 - math.cos(theta)) * (K @ K)
    return O, fidelity


def _control_amplitudes(nc):
    """(c0, c1) of the pure control state with Bloch vector nc."""
    nc = np.asarray(nc, dtype=float)
    if abs(np.linalg.norm(nc) - 1.0) > 1e-10:
        raise ValueError("control preparation needs a pure state "
                         f"(|n| = 1), got |n| = {np.linalg.norm(nc):.6f}")
    theta = math.acos(min(1.0, max(-1.0, nc[2])))
    phi = math.atan2(nc[1], nc[0])
    c1 = math.cos(theta / 2.0)
    c0 = complex(math.cos(phi), math.sin(phi)) * math.sin(theta / 2.0)
    return c0, c1


def participatory_fidelity(rho_abc, nc):
    """Bell-measure (A, C), realign each branch of B, sum P^k F_k."""
    total = 0.0
    outcomes = []
    for k in range(4):
        state, p = bell_project(rho_abc, k)
        _, fid = rodrigues_rotation(bloch_vector(state), np.asarray(nc))
        total += p * fid
        outcomes.append(ProtocolOutcome(branch=BELL_LABELS[k], probability=p,
                                        state=state, fidelity=fid))
    return total, outcomes


def participatory_protocol(bath0, bath1, omega_a, omega_b, t,
                           nc=(1.0, 0.0, 0.0)):
    """Teleport the control's own state through the conditional channel.

    The control is prepared in the pure state with Bloch vector ``nc``
    (default |+>), rho_ABC is assembled, (A, C) is Bell-measured, each
    branch of B is optimally realigned, and the weighted fidelity
    sum_k P^k F_k is returned together with the branch outcomes.
    """
    c0, c1 = _control_amplitudes(nc)
    rho_abc = teleport_state(c0, c1, bath0, bath1, omega_a, omega_b, t)
    return participatory_fidelity(rho_abc, nc)


def average_participatory_fidelity(bath0, bath1, omega_a, omega_b, t,
                                   n_polar=12, n_azimuth=20):
    """Bloch-sphere average of the participatory fidelity.

    Extension beyond the single-input protocol: averages over pure control
    states with a Gauss-Legendre (polar) x uniform (azimuth) product
    quadrature, exact for smooth integrands to high degree.
    """
    nodes, weights = np.polynomial.legendre.leggauss(n_polar)
    total = 0.0
    for z, w in zip(nodes, weights):
        sin_t = math.sqrt(1.0 - z * z)
        for k in range(n_azimuth):
            phi = 2.0 * math.pi * k / n_azimuth
            nc = (sin_t * math.cos(phi), sin_t * math.sin(phi), z)
            fid, _ = participatory_protocol(bath0, bath1, omega_a, omega_b,
                                            t, nc=nc)
            total += w * fid / n_azimuth
    return total / 2.0
