"""State-validation helpers and small linear-algebra utilities.

Conventions used throughout the package:

* Local qubit basis is ordered excited-first: index 0 is ``|1>``, index 1
  is ``|0>``, so ``sigma_z = diag(+1, -1)`` has ``|1>`` as its +1
  eigenstate.
* Two-qubit composites follow the same rule, giving the index order
  ``|11>, |10>, |01>, |00>``.
"""

from __future__ import annotations

import numpy as np

__all__ = [
    "PhysicalityError",
    "SIGMA_X",
    "SIGMA_Y",
    "SIGMA_Z",
    "PAULI",
    "kron_all",
    "partial_trace",
    "density_report",
    "assert_physical",
    "bloch_vector",
    "state_from_bloch",
]

SIGMA_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
SIGMA_Y = np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex)
SIGMA_Z = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)
PAULI = (SIGMA_X, SIGMA_Y, SIGMA_Z)


class PhysicalityError(ValueError):
    """A matrix failed a density-matrix physicality check."""


def kron_all(*ops):
    """Kronecker product of any number of operators, left to right."""
    out = np.asarray(ops[0], dtype=complex)
    for op in ops[1:]:
        out = np.kron(out, op)
    return out


def partial_trace(rho, dims, keep):
    """Trace out all tensor factors not listed in ``keep``.

    Parameters
    ----------
    rho : ndarray
        Square matrix on the tensor product of subsystems with
        dimensions ``dims``.
    dims : sequence of int
        Dimension of each tensor factor, in order.
    keep : sequence of int
        Indices of the factors to retain (order is preserved).
    """
    dims = list(dims)
    n = len(dims)
    keep = list(keep)
    rho = np.asarray(rho).reshape(dims + dims)
    # Trace out factors from the highest index down so positions stay valid.
    traced = 0
    for ax in sorted(set(range(n)) - set(keep), reverse=True):
        rho = np.trace(rho, axis1=ax, axis2=ax + n - traced)
        traced += 1
    d = int(np.prod([dims[k] for k in keep]))
    return rho.reshape(d, d)


def density_report(rho):
    """Return (hermiticity defect, trace defect, min eigenvalue) of ``rho``."""
    rho = np.asarray(rho)
    herm = float(np.max(np.abs(rho - rho.conj().T)))
    tr = abs(complex(np.trace(rho)) - 1.0)
    min_eig = float(np.min(np.linalg.eigvalsh(0.5 * (rho + rho.conj().T))))
    return herm, tr, min_eig


def assert_physical(rho, herm_tol=1e-12, trace_tol=1e-12, eig_tol=-1e-10,
                    context=""):
    """Raise :class:`PhysicalityError` unless ``rho`` is a density matrix.

    Tolerances mirror the package-wide physicality contract: Hermiticity
    and unit trace to 1e-12, minimum eigenvalue above -1e-10.
    """
    herm, tr, min_eig = density_report(rho)
    label = f" ({context})" if context else ""
    if herm > herm_tol:
        raise PhysicalityError(f"not Hermitian{label}: defect {herm:.3e}")
    if tr > trace_tol:
        raise PhysicalityError(f"trace not 1{label}: defect {tr:.3e}")
    if min_eig < eig_tol:
        raise PhysicalityError(f"not PSD{label}: min eigenvalue {min_eig:.3e}")
    return rho


def bloch_vector(rho):
    """Bloch vector (x, y, z) of a single-qubit state in the |1>-first basis."""
    rho = np.asarray(rho)
    return np.array([np.real(np.trace(rho @ s)) for s in PAULI])


def state_from_bloch(r):
    """Single-qubit density matrix ½(I + r·σ)."""
    r = np.asarray(r, dtype=float)
    if np.linalg.norm(r) > 1.0 + 1e-10:
        raise ValueError(f"Bloch vector length {np.linalg.norm(r):.6f} > 1")
    rho = 0.5 * (np.eye(2, dtype=complex)
                 + r[0] * SIGMA_X + r[1] * SIGMA_Y + r[2] * SIGMA_Z)
    return rho
