"""Dense 2x2 complex matrix algebra for qubit states and operators.

Everything in this module operates on plain ``numpy`` arrays of shape
``(..., 2, 2)``; leading axes broadcast, so the same routines serve single
states and stacked trajectories.  Density matrices are ordinary arrays that
pass :func:`check_density_matrix`.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

IDENTITY = np.eye(2, dtype=complex)
SIGMA_Z = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)
#: lowering operator |g><e| in the ordered basis (|e>, |g>)
SIGMA_MINUS = np.array([[0.0, 0.0], [1.0, 0.0]], dtype=complex)
#: raising operator |e><g|
SIGMA_PLUS = np.array([[0.0, 1.0], [0.0, 0.0]], dtype=complex)

EXCITED = np.array([1.0, 0.0], dtype=complex)
GROUND = np.array([0.0, 1.0], dtype=complex)

for _const in (IDENTITY, SIGMA_Z, SIGMA_MINUS, SIGMA_PLUS, EXCITED, GROUND):
    _const.setflags(write=False)
del _const

#: absolute tolerance on the max off-hermitian entry; beyond it inputs are
#: rejected, within it matrices are symmetrized before eigenvalue extraction
HERMITICITY_ATOL = 1e-9


@dataclass(frozen=True)
class CouplingOperator:
    """System operator coupled to the environment, sigma_- + chi * sigma_+.

    ``chi`` interpolates between the pure lowering operator (``chi=0``,
    excitation-number conserving) and the symmetric sigma_x-like coupling
    (``chi=1``, equal off-diagonals).
    """

    chi: float

    def __post_init__(self):
        if not 0.0 <= self.chi <= 1.0:
            raise ValueError(f"chi must lie in [0, 1], got {self.chi}")

    @cached_property
    def matrix(self) -> np.ndarray:
        return SIGMA_MINUS + self.chi * SIGMA_PLUS


def dagger(a: np.ndarray) -> np.ndarray:
    """Conjugate transpose on the trailing two axes."""
    return np.conj(np.swapaxes(a, -1, -2))


def commutator(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Return ``a @ b - b @ a``."""
    return a @ b - b @ a


def hermitian_eigenvalues(h: np.ndarray) -> np.ndarray:
    """Eigenvalues of hermitian 2x2 matrices by the closed-form quadratic.

    Parameters
    ----------
    h : ndarray, shape (..., 2, 2)
        Hermitian within :data:`HERMITICITY_ATOL` (max off-hermitian entry);
        inputs within tolerance are symmetrized, beyond it a ``ValueError``
        is raised.

    Returns
    -------
    ndarray, shape (..., 2)
        Eigenvalues ``mean - radius, mean + radius`` (ascending).
    """
    h = np.asarray(h, dtype=complex)
    defect = np.max(np.abs(h - dagger(h))) if h.size else 0.0
    if defect > HERMITICITY_ATOL:
        raise ValueError(
            f"matrix is not hermitian: max off-hermitian entry {defect:.3e} "
            f"exceeds tolerance {HERMITICITY_ATOL:.0e}"
        )
    h = 0.5 * (h + dagger(h))
    a = h[..., 0, 0].real
    d = h[..., 1, 1].real
    mean = 0.5 * (a + d)
    radius = np.sqrt(0.25 * (a - d) ** 2 + np.abs(h[..., 0, 1]) ** 2)
    return np.stack([mean - radius, mean + radius], axis=-1)


def trace_distance(r1: np.ndarray, r2: np.ndarray) -> np.ndarray | float:
    """Trace distance ``0.5 * ||r1 - r2||_1`` between density matrices.

    Computed as half the sum of absolute eigenvalues of the hermitian
    difference.  Broadcasts over leading axes; a non-hermitian difference
    beyond tolerance signals a corrupted state and raises ``ValueError``.
    """
    diff = np.asarray(r1, dtype=complex) - np.asarray(r2, dtype=complex)
    eigs = hermitian_eigenvalues(diff)
    dist = 0.5 * np.sum(np.abs(eigs), axis=-1)
    return float(dist) if dist.ndim == 0 else dist


def phase_unitary(epsilon: float, t: float) -> np.ndarray:
    """Diagonal unitary ``diag(exp(i*eps*t/2), exp(-i*eps*t/2))``.

    Conjugating a state by this removes the free phase rotation of the
    coherences; trace distances are invariant under it.
    """
    half = 0.5 * epsilon * t
    return np.array([[np.exp(1j * half), 0.0], [0.0, np.exp(-1j * half)]])


def check_density_matrix(rho: np.ndarray, atol: float = 1e-8) -> np.ndarray:
    """Validate trace one, hermiticity, and eigenvalues >= -atol.

    Returns the input as a complex array; raises ``ValueError`` describing
    the first violated invariant.  Broadcasts over leading axes.
    """
    rho = np.asarray(rho, dtype=complex)
    if rho.shape[-2:] != (2, 2):
        raise ValueError(f"expected trailing shape (2, 2), got {rho.shape}")
    trace_err = np.max(np.abs(rho[..., 0, 0] + rho[..., 1, 1] - 1.0))
    if trace_err > atol:
        raise ValueError(f"trace deviates from 1 by {trace_err:.3e}")
    herm_err = np.max(np.abs(rho - dagger(rho)))
    if herm_err > atol:
        raise ValueError(f"not hermitian: max deviation {herm_err:.3e}")
    lo = np.min(hermitian_eigenvalues(0.5 * (rho + dagger(rho))))
    if lo < -atol:
        raise ValueError(f"negative eigenvalue {lo:.3e}")
    return rho


def is_density_matrix(rho: np.ndarray, atol: float = 1e-8) -> bool:
    try:
        check_density_matrix(rho, atol=atol)
    except ValueError:
        return False
    return True
