"""Dense symmetric linear algebra used by the rate analysis and oracles.

Everything runs in float64 on plain numpy arrays. Matrices at this scale are
tiny (at most m-by-m with m in the hundreds), so clarity and hard input
checks win over sparse formats or iterative solvers.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

SYMMETRY_TOL = 1e-10
PSD_TOL = 1e-8
# Eigenvalues at or below 1e-12 * max(lambda_max, 1) count as zero; this is
# what makes "minimum nonzero eigenvalue" well defined in floating point.
ZERO_CUTOFF_SCALE = 1e-12


@dataclass(frozen=True)
class EigenDecomposition:
    """Eigenvalues ascending, eigenvectors as matching orthonormal columns."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


def _require_symmetric(M: np.ndarray, op: str) -> np.ndarray:
    M = np.asarray(M, dtype=np.float64)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ValueError(f"{op}: expected a square matrix, got shape {M.shape}")
    skew = np.max(np.abs(M - M.T)) if M.size else 0.0
    if skew > SYMMETRY_TOL:
        raise ValueError(f"{op}: matrix not symmetric (max asymmetry {skew:.3e})")
    return M


def zero_cutoff(eigenvalues: np.ndarray) -> float:
    """Threshold below which an eigenvalue of this spectrum counts as zero."""
    lam_max = float(np.max(eigenvalues)) if eigenvalues.size else 0.0
    return ZERO_CUTOFF_SCALE * max(lam_max, 1.0)


def sym_eigen(M: np.ndarray) -> EigenDecomposition:
    """Full eigendecomposition of a symmetric matrix.

    Raises ValueError on non-symmetric input and numpy.linalg.LinAlgError if
    the solver fails to converge; it never silently returns garbage.
    """
    M = _require_symmetric(M, "sym_eigen")
    eigenvalues, eigenvectors = np.linalg.eigh(M)
    return EigenDecomposition(eigenvalues=eigenvalues, eigenvectors=eigenvectors)


def pinv_psd(M: np.ndarray) -> np.ndarray:
    """Moore-Penrose pseudoinverse of a symmetric positive semidefinite matrix.

    Eigenvalues below the zero cutoff are treated as exact zeros. A negative
    eigenvalue beyond -1e-8 means the input is not PSD and is rejected.
    """
    dec = sym_eigen(_require_symmetric(M, "pinv_psd"))
    lam = dec.eigenvalues
    if lam.size and lam[0] < -PSD_TOL:
        raise ValueError(f"pinv_psd: matrix not PSD (eigenvalue {lam[0]:.3e})")
    cutoff = zero_cutoff(lam)
    inv = np.where(lam > cutoff, 1.0 / np.where(lam > cutoff, lam, 1.0), 0.0)
    Q = dec.eigenvectors
    out = (Q * inv) @ Q.T
    return (out + out.T) / 2.0


def lambda_min_plus(M: np.ndarray) -> float:
    """Smallest eigenvalue strictly above the zero cutoff."""
    dec = sym_eigen(M)
    cutoff = zero_cutoff(dec.eigenvalues)
    above = dec.eigenvalues[dec.eigenvalues > cutoff]
    if above.size == 0:
        raise ValueError("lambda_min_plus: all eigenvalues are zero")
    return float(above[0])
