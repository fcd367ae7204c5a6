"""Path-register algebra: superpositions, selective measurement, decoherence.

A system qubit sent through an M-port splitter couples to a different
bath on every path.  The joint state is a block structure indexed by path
pairs; everything observable is a weighted sum of those blocks:

* discarding the path register averages the diagonal blocks
  (:func:`trace_paths`);
* projecting it onto a phased superposition keeps the off-diagonal
  interference blocks (:func:`selective_measure`), with phases restricted
  to {0, pi};
* with identical baths and constant coupling only three distinct
  two-qubit blocks exist, and the phase sums collapse to three scalar
  weights (:func:`uniform_weights`);
* a register subject to cyclic dissipation suppresses the interference
  blocks by e^{-Gamma t} (:func:`evolve_path_lindblad`,
  :func:`decohered_selective_measure`).

Engines cache amplitude tables and blocks by their parameter signature,
so uniform ensembles cost three block assemblies regardless of M.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import expm

from .baths import BathSpec
from .sectors import (
    SingleQubitParams,
    TwoQubitParams,
    single_qubit_tables,
    two_qubit_tables,
)
from . import assembly

__all__ = [
    "ErasedStateError",
    "ConstantCoupling",
    "PositionCoupling",
    "PathEnsemble",
    "uniform_weights",
    "uniform_weights_single",
    "phase_pattern",
    "evolve_path_lindblad",
    "TwoQubitPathEngine",
    "SingleQubitPathEngine",
]

_ERASED_TOL = 1e-14


class ErasedStateError(RuntimeError):
    """The post-measurement state vanished by destructive interference."""

    def __init__(self, probability):
        super().__init__(
            f"post-measurement state erased (norm {probability:.3e})")
        self.probability = probability


@dataclass(frozen=True)
class ConstantCoupling:
    """Uniform inter-qubit coupling J for every path pair."""

    J: float

    def value(self, i, j):
        return self.J


@dataclass(frozen=True)
class PositionCoupling:
    """Position-dependent coupling J(i, j) = 1 / (gamma (i-j)^2 + d)."""

    gamma: float
    d: float

    def __post_init__(self):
        if self.d <= 0:
            raise ValueError("d must be positive")

    def value(self, i, j):
        return 1.0 / (self.gamma * (i - j) ** 2 + self.d)


@dataclass(frozen=True)
class PathEnsemble:
    """M paths per register with per-path temperatures and a coupling rule."""

    M: int
    betas: tuple
    coupling: object

    def __post_init__(self):
        if self.M < 1:
            raise ValueError("need at least one path")
        if len(self.betas) != self.M:
            raise ValueError(f"need {self.M} per-path betas, got {len(self.betas)}")

    @classmethod
    def uniform(cls, M, beta, J):
        return cls(M=M, betas=(beta,) * M, coupling=ConstantCoupling(J))


def phase_pattern(M, n):
    """Phase list with the first n of M entries flipped to pi."""
    if not 0 <= n <= M:
        raise ValueError(f"need 0 <= n <= M, got n={n}, M={M}")
    return tuple([math.pi] * n + [0.0] * (M - n))


def _check_phases(phases, M):
    phases = tuple(float(p) for p in phases)
    if len(phases) != M:
        raise ValueError(f"need {M} phases, got {len(phases)}")
    for p in phases:
        if not (abs(p) < 1e-12 or abs(p - math.pi) < 1e-12):
            raise ValueError("phase shifts are restricted to 0 or pi")
    return phases


def uniform_weights(M, n):
    """(w_diag, w_single, w_double) multiplying the three distinct blocks
    of a uniform two-register ensemble with n pi-flips out of M.

    ``w_single`` multiplies the average of the two one-register-mismatch
    blocks (they differ when the qubit splittings differ).
    """
    if not 0 <= n <= M:
        raise ValueError(f"need 0 <= n <= M, got n={n}, M={M}")
    s = (M - 2 * n) ** 2 - M
    return (1.0 / M ** 2,
            2.0 * s / M ** 3,
            float(s) ** 2 / M ** 4)


def uniform_weights_single(M, n):
    """(w_diag, w_cross) for one register: n pi-flips out of M paths."""
    if not 0 <= n <= M:
        raise ValueError(f"need 0 <= n <= M, got n={n}, M={M}")
    return 1.0 / M, ((M - 2 * n) ** 2 - M) / M ** 2


def evolve_path_lindblad(gamma, t, M=3, populations=None):
    """Register state under the cyclic three-level dissipator.

    Jump operators |0><1|, |1><2|, |2><0| at rate ``gamma`` with no
    Hamiltonian: every coherence decays as e^{-gamma t} exactly, while
    populations relax through the cyclic stochastic generator toward
    uniform.  The initial state is the uniform projector (1/3) sum |i><j|
    unless ``populations`` overrides its diagonal.
    """
    if M != 3:
        raise ValueError("the cyclic dissipator is defined for M = 3 only")
    if gamma < 0:
        raise ValueError("gamma must be nonnegative")
    if populations is None:
        populations = np.full(3, 1.0 / 3.0)
    populations = np.asarray(populations, dtype=float)
    # dp_k/dt = gamma (p_{k+1} - p_k)
    gen = gamma * (np.roll(np.eye(3), -1, axis=1) - np.eye(3))
    p_t = expm(gen * t) @ populations
    rho = np.full((3, 3), math.exp(-gamma * t) / 3.0, dtype=complex)
    np.fill_diagonal(rho, p_t)
    return rho


def _phase_matrix(phases):
    ph = np.asarray(phases, dtype=float)
    return np.exp(1j * (ph[:, None] - ph[None, :]))


class TwoQubitPathEngine:
    """Two-qubit blocks over a path ensemble, with signature deduplication."""

    def __init__(self, omega1, omega2, N, s, f, ensemble):
        self.omega1 = omega1
        self.omega2 = omega2
        self.N = N
        self.s = s
        self.f = f
        self.ensemble = ensemble
        self._tables = {}
        self._blocks = {}

    def bath(self, path):
        return BathSpec(N=self.N, s=self.s, f=self.f,
                        beta=self.ensemble.betas[path])

    def params(self, i, j):
        """Two-qubit parameters in effect when A rides path i, B path j."""
        return TwoQubitParams(
            omega1=self.omega1, omega2=self.omega2,
            J=self.ensemble.coupling.value(i, j),
            bath1=self.bath(i), bath2=self.bath(j))

    def tables(self, i, j, t):
        p = self.params(i, j)
        key = (p.J, p.bath1.beta, p.bath2.beta, t)
        if key not in self._tables:
            self._tables[key] = two_qubit_tables(p, t)
        return self._tables[key]

    def _block_signature(self, i, ip, j, jp):
        b = self.ensemble.betas
        J = self.ensemble.coupling.value
        kind = (i == ip, j == jp)
        return (kind, b[i], b[ip], b[j], b[jp], J(i, j), J(ip, jp))

    def block(self, rho0, i, ip, j, jp, t):
        """Path-indexed block for ket paths (i, j) and bra paths (ip, jp)."""
        rho0 = np.ascontiguousarray(rho0, dtype=complex)
        key = (self._block_signature(i, ip, j, jp), t, rho0.tobytes())
        if key in self._blocks:
            return self._blocks[key]
        left = self.tables(i, j, t)
        if i == ip and j == jp:
            out = assembly.case_a(rho0, left)
        elif i == ip:
            out = assembly.case_b(rho0, left, self.tables(ip, jp, t),
                                  shared="bath1")
        elif j == jp:
            out = assembly.case_b(rho0, left, self.tables(ip, jp, t),
                                  shared="bath2")
        else:
            out = assembly.case_c(rho0, left, self.tables(ip, jp, t))
        self._blocks[key] = out
        return out

    def trace_paths(self, rho0, t):
        """Statistical mixture: discard the path registers."""
        M = self.ensemble.M
        out = np.zeros((4, 4), dtype=complex)
        for i in range(M):
            for j in range(M):
                out += self.block(rho0, i, i, j, j, t)
        return out / M ** 2

    def selective_measure(self, rho0, t, phases_a, phases_b=None):
        """Project both path registers onto phased uniform superpositions.

        Returns (normalized state, probability); raises
        :class:`ErasedStateError` if the pattern interferes the state away.
        """
        M = self.ensemble.M
        phases_a = _check_phases(phases_a, M)
        phases_b = phases_a if phases_b is None else _check_phases(phases_b, M)
        pa = _phase_matrix(phases_a)
        pb = _phase_matrix(phases_b)
        raw = np.zeros((4, 4), dtype=complex)
        for i in range(M):
            for ip in range(M):
                for j in range(M):
                    for jp in range(M):
                        raw += (pa[i, ip] * pb[j, jp]
                                * self.block(rho0, i, ip, j, jp, t))
        raw /= M ** 4
        return _normalize_measured(raw)

    def uniform_selective_measure(self, rho0, t, n):
        """Weight-formula fast path for identical baths and constant J."""
        betas = set(self.ensemble.betas)
        if len(betas) != 1 or not isinstance(self.ensemble.coupling,
                                             ConstantCoupling):
            raise ValueError("uniform weights need identical baths and "
                             "constant coupling")
        M = self.ensemble.M
        w_diag, w_single, w_double = uniform_weights(M, n)
        raw = w_diag * self.block(rho0, 0, 0, 0, 0, t)
        if M > 1:
            raw = raw + w_double * self.block(rho0, 0, 1, 0, 1, t)
            raw += w_single * 0.5 * (self.block(rho0, 0, 0, 0, 1, t)
                                     + self.block(rho0, 0, 1, 0, 0, t))
        return _normalize_measured(raw)

    def decohered_selective_measure(self, rho0, t, path_state_a,
                                    path_state_b, phases_a, phases_b=None):
        """Selective measurement after the registers decohered.

        The register states replace the coherent 1/M coefficients:
        coefficient <psi_phi|i> rho_p[i,i'] <i'|psi_phi> per register.
        With undamped registers this reproduces
        :meth:`selective_measure` exactly.
        """
        M = self.ensemble.M
        phases_a = _check_phases(phases_a, M)
        phases_b = phases_a if phases_b is None else _check_phases(phases_b, M)
        ca = _phase_matrix(phases_a).conj() * np.asarray(path_state_a) / M
        cb = _phase_matrix(phases_b).conj() * np.asarray(path_state_b) / M
        raw = np.zeros((4, 4), dtype=complex)
        for i in range(M):
            for ip in range(M):
                for j in range(M):
                    for jp in range(M):
                        raw += (ca[i, ip] * cb[j, jp]
                                * self.block(rho0, i, ip, j, jp, t))
        return _normalize_measured(raw)


def _normalize_measured(raw):
    p = float(np.real(np.trace(raw)))
    if p <= _ERASED_TOL:
        raise ErasedStateError(p)
    return raw / p, p


class SingleQubitPathEngine:
    """Single-qubit analogue of :class:`TwoQubitPathEngine`."""

    def __init__(self, omega, N, s, f, ensemble):
        self.omega = omega
        self.N = N
        self.s = s
        self.f = f
        self.ensemble = ensemble
        self._tables = {}

    def tables(self, i, t):
        beta = self.ensemble.betas[i]
        key = (beta, t)
        if key not in self._tables:
            p = SingleQubitParams(
                omega=self.omega,
                bath=BathSpec(N=self.N, s=self.s, f=self.f, beta=beta))
            self._tables[key] = single_qubit_tables(p, t)
        return self._tables[key]

    def block(self, rho0, i, ip, t):
        if i == ip:
            return assembly.single_qubit_block(rho0, self.tables(i, t))
        return assembly.single_qubit_cross_block(
            rho0, self.tables(i, t), self.tables(ip, t))

    def trace_paths(self, rho0, t):
        M = self.ensemble.M
        out = sum(self.block(rho0, i, i, t) for i in range(M))
        return out / M

    def selective_measure(self, rho0, t, phases):
        M = self.ensemble.M
        phases = _check_phases(phases, M)
        pm = _phase_matrix(phases)
        raw = np.zeros((2, 2), dtype=complex)
        for i in range(M):
            for ip in range(M):
                raw += pm[i, ip] * self.block(rho0, i, ip, t)
        raw /= M ** 2
        return _normalize_measured(raw)

    def uniform_raw(self, rho0, t, n):
        """Unnormalized weight-formula measurement map (linear in rho0)."""
        if len(set(self.ensemble.betas)) != 1:
            raise ValueError("uniform weights need identical baths")
        M = self.ensemble.M
        w_diag, w_cross = uniform_weights_single(M, n)
        raw = w_diag * self.block(rho0, 0, 0, t)
        if M > 1:
            raw = raw + w_cross * self.block(rho0, 0, 1, t)
        return raw

    def uniform_selective_measure(self, rho0, t, n):
        return _normalize_measured(self.uniform_raw(rho0, t, n))
