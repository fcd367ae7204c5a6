"""Scalar state diagnostics.

l1 coherence, Wootters concurrence, geometric discord, maximal standard
teleportation fidelity, quantum Fisher information (eigenbasis and Bloch
forms), and the predictability/visibility/entanglement/ignorance report
with the environment-indefiniteness quantifier I = 1 - P1^2.

Numerical policy: eigenvalues are clamped at zero below ``CLAMP = 1e-12``
before square roots, and spectral denominators below ``CLAMP`` are
excluded from QFI sums.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .validation import PAULI, SIGMA_Y, partial_trace

__all__ = [
    "CLAMP",
    "BlochDecomposition",
    "WpeiReport",
    "l1_coherence",
    "concurrence",
    "bloch_decomposition",
    "geometric_discord",
    "teleport_fidelity_max",
    "qfi",
    "qfi_of_family",
    "qfi_bloch",
    "wpei",
]

CLAMP = 1e-12

_SPIN_FLIP = np.kron(SIGMA_Y, SIGMA_Y)


def l1_coherence(rho):
    """Sum of absolute off-diagonal elements."""
    rho = np.asarray(rho)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise ValueError("need a square matrix")
    return float(np.sum(np.abs(rho)) - np.sum(np.abs(np.diag(rho))))


def concurrence(rho):
    """Wootters concurrence of a two-qubit state."""
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (4, 4):
        raise ValueError("concurrence needs a 4x4 density matrix")
    if np.min(np.linalg.eigvalsh(0.5 * (rho + rho.conj().T))) < -1e-8:
        raise ValueError("input is not positive semidefinite")
    rho_tilde = _SPIN_FLIP @ rho.conj() @ _SPIN_FLIP
    lam = np.linalg.eigvals(rho @ rho_tilde)
    lam = np.sqrt(np.maximum(lam.real, 0.0))
    lam.sort()
    return float(max(0.0, lam[-1] - lam[-2] - lam[-3] - lam[-4]))


@dataclass(frozen=True)
class BlochDecomposition:
    """Local Bloch vectors and correlation matrix of a two-qubit state."""

    a: np.ndarray
    b: np.ndarray
    C: np.ndarray


def bloch_decomposition(rho):
    """Expand rho = 1/4 (I + a.sigma x I + I x b.sigma + C_ij sigma_i x sigma_j)."""
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (4, 4):
        raise ValueError("need a 4x4 matrix")
    i2 = np.eye(2)
    a = np.array([np.real(np.trace(rho @ np.kron(s, i2))) for s in PAULI])
    b = np.array([np.real(np.trace(rho @ np.kron(i2, s))) for s in PAULI])
    C = np.array([[np.real(np.trace(rho @ np.kron(si, sj)))
                   for sj in PAULI] for si in PAULI])
    return BlochDecomposition(a=a, b=b, C=C)


def _sym3_max_eigenvalue(A):
    """Largest eigenvalue of a real symmetric 3x3 matrix, closed form.

    Trigonometric method: with q = tr(A)/3 and p the rms off-center
    scale, the shifted matrix B = (A - qI)/p has eigenvalues
    2 cos(phi + 2 pi k / 3) where cos(3 phi) = det(B)/2.
    """
    q = np.trace(A) / 3.0
    Ashift = A - q * np.eye(3)
    p2 = np.sum(Ashift * Ashift) / 6.0
    if p2 <= 0.0:
        return float(q)
    p = math.sqrt(p2)
    r = np.linalg.det(Ashift / p) / 2.0
    r = min(1.0, max(-1.0, r))
    phi = math.acos(r) / 3.0
    return float(q + 2.0 * p * math.cos(phi))


def geometric_discord(rho):
    """Hilbert-Schmidt distance squared to the closest zero-discord state.

    Closed two-qubit form 1/4 (|a|^2 + |C|^2 - lambda_max(a a^T + C C^T)),
    measurements on the first qubit.
    """
    d = bloch_decomposition(rho)
    G = np.outer(d.a, d.a) + d.C @ d.C.T
    val = 0.25 * (d.a @ d.a + np.sum(d.C * d.C) - _sym3_max_eigenvalue(G))
    return float(max(0.0, val))


def teleport_fidelity_max(rho):
    """Best achievable standard-teleportation fidelity of a resource state.

    1/2 (1 + 1/3 tr sqrt(C^T C)); values above 2/3 beat every classical
    strategy.
    """
    d = bloch_decomposition(rho)
    return float(0.5 * (1.0 + np.sum(np.linalg.svd(d.C, compute_uv=False)) / 3.0))


def qfi(rho, drho, clamp=CLAMP):
    """Quantum Fisher information from a state and its parameter derivative.

    Eigenbasis form: F = 2 sum_{ij} |<i|d rho|j>|^2 / (lambda_i +
    lambda_j), restricted to lambda_i + lambda_j > ``clamp``.  Equals
    tr(rho L^2) with L the symmetric logarithmic derivative; degenerate
    spectra need no special treatment here because only d rho matrix
    elements enter.
    """
    rho = np.asarray(rho, dtype=complex)
    drho = np.asarray(drho, dtype=complex)
    lam, U = np.linalg.eigh(0.5 * (rho + rho.conj().T))
    d = U.conj().T @ drho @ U
    denom = lam[:, None] + lam[None, :]
    mask = denom > clamp
    val = 2.0 * np.sum(np.abs(d[mask]) ** 2 / denom[mask])
    return float(val)


def qfi_of_family(family, theta, step=1e-5, clamp=CLAMP):
    """QFI of a parametrized family theta -> rho, by central differences."""
    rho = family(theta)
    drho = (family(theta + step) - family(theta - step)) / (2.0 * step)
    return qfi(rho, drho, clamp=clamp)


def qfi_bloch(r, dr):
    """Single-qubit QFI from the Bloch vector and its derivative."""
    r = np.asarray(r, dtype=float)
    dr = np.asarray(dr, dtype=float)
    r2 = float(r @ r)
    if r2 > 1.0 + 1e-10:
        raise ValueError(f"Bloch vector norm {math.sqrt(r2):.6f} exceeds 1")
    if 1.0 - r2 < CLAMP:
        return float(dr @ dr)
    return float(dr @ dr + (r @ dr) ** 2 / (1.0 - r2))


@dataclass(frozen=True)
class WpeiReport:
    """Predictability/visibility/entanglement/ignorance budget.

    The identity (P1^2 + P2^2 + V1^2 + V2^2)/2 + C^2 + eta = 1 holds by
    construction (eta is stored as the remainder); ``indefiniteness`` is
    1 - P1^2 with qubit 1 the control.
    """

    P1: float
    P2: float
    V1: float
    V2: float
    concurrence: float
    eta: float
    indefiniteness: float


def wpei(rho_cs):
    """WPEI report of a control (x) system two-qubit state (control first)."""
    rho_cs = np.asarray(rho_cs, dtype=complex)
    if rho_cs.shape != (4, 4):
        raise ValueError("need a 4x4 control (x) system state")
    r1 = partial_trace(rho_cs, [2, 2], keep=(0,))
    r2 = partial_trace(rho_cs, [2, 2], keep=(1,))
    p1 = abs(float(np.real(r1[0, 0] - r1[1, 1])))
    p2 = abs(float(np.real(r2[0, 0] - r2[1, 1])))
    v1 = 2.0 * abs(complex(r1[0, 1]))
    v2 = 2.0 * abs(complex(r2[0, 1]))
    c = concurrence(rho_cs)
    eta = 1.0 - 0.5 * (p1 ** 2 + p2 ** 2 + v1 ** 2 + v2 ** 2) - c ** 2
    return WpeiReport(P1=p1, P2=p2, V1=v1, V2=v2, concurrence=c,
                      eta=eta, indefiniteness=1.0 - p1 ** 2)
