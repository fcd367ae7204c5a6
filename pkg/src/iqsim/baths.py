"""Collective-spin bath: level energies, thermal weights, partition function.

A bath of N interacting qubits restricted to its symmetric sector is an
(N+1)-level ladder labelled by the excitation number n = 0..N, with level
energy

    eps(n) = s * (n * (1 - (n-1)/N) - 1/2).

Thermal sums always run over the full ladder n = 0..N inclusive.  Inverse
temperature ``beta = inf`` is the zero-temperature flag: only n = 0 carries
weight.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "BathSpec",
    "level_energy",
    "thermal_weight",
    "partition_function",
    "thermal_probabilities",
]


@dataclass(frozen=True)
class BathSpec:
    """One collective-spin bath.

    Parameters
    ----------
    N : int
        Number of bath qubits; also the Fock truncation of the ladder.
    s : float
        Intra-bath coupling (energy units).
    f : float
        System-bath coupling (energy units).
    beta : float
        Inverse temperature, >= 0.  ``math.inf`` selects the
        zero-temperature state (all weight on n = 0).
    """

    N: int
    s: float
    f: float
    beta: float

    def __post_init__(self):
        if self.N < 1:
            raise ValueError(f"bath needs N >= 1 qubits, got {self.N}")
        if self.beta < 0:
            raise ValueError(f"beta must be nonnegative, got {self.beta}")

    @property
    def dim(self):
        """Number of ladder levels, N + 1."""
        return self.N + 1


def _eps(n, s, N):
    """Raw level energy, valid for any integer n (no range check).

    The sector generators evaluate this one step outside 0..N for closed
    edge channels; those entries multiply exactly-zero couplings.
    """
    return s * (n * (1.0 - (n - 1.0) / N) - 0.5)


def level_energy(n, bath):
    """Energy eps(n) of ladder level n of ``bath``."""
    if not 0 <= n <= bath.N:
        raise ValueError(f"level {n} outside 0..{bath.N}")
    return _eps(n, bath.s, bath.N)


def thermal_weight(n, bath):
    """Unnormalized Boltzmann weight exp(-beta * eps(n))."""
    if not 0 <= n <= bath.N:
        raise ValueError(f"level {n} outside 0..{bath.N}")
    if math.isinf(bath.beta):
        return 1.0 if n == 0 else 0.0
    return math.exp(-bath.beta * _eps(n, bath.s, bath.N))


def partition_function(bath):
    """Z = sum of thermal weights over n = 0..N."""
    if math.isinf(bath.beta):
        return 1.0
    n = np.arange(bath.dim)
    return float(np.sum(np.exp(-bath.beta * _eps(n, bath.s, bath.N))))


def thermal_probabilities(bath):
    """Normalized thermal occupation of every ladder level.

    Computed in log space (weights shifted by their maximum before
    exponentiation) so large beta*s*N cannot overflow.
    """
    if math.isinf(bath.beta):
        p = np.zeros(bath.dim)
        p[0] = 1.0
        return p
    n = np.arange(bath.dim)
    logw = -bath.beta * _eps(n, bath.s, bath.N)
    w = np.exp(logw - np.max(logw))
    return w / np.sum(w)
