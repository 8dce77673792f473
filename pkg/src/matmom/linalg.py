"""Dense Hermitian linear algebra with explicit tolerance rules.

Everything in this package runs through the helpers here: one shared rank
cutoff, one shared positive-semidefiniteness slack, and eigendecomposition
based pseudo-inverse / square root so that rank decisions are consistent
across modules.  All matrices are small (dimension at most a few tens) and
dense complex double precision; 0x0 matrices are legal values throughout.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np

from .errors import ValidationError

# Default tolerances.  PSD_TOL is the slack allowed below zero for "is PSD"
# decisions, RANK_TOL the relative eigenvalue cutoff for rank decisions,
# HERM_TOL the allowed relative asymmetry of Hermitian inputs.
PSD_TOL = 1e-10
RANK_TOL = 1e-10
HERM_TOL = 1e-12


class EigDecomposition(NamedTuple):
    """Spectral decomposition of a Hermitian matrix.

    ``eigenvalues`` are real and ascending, ``eigenvectors`` holds the
    matching orthonormal eigenvectors as columns.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


def as_square_matrix(a, name: str = "matrix") -> np.ndarray:
    """Coerce to a square complex matrix, rejecting non-finite entries."""
    arr = np.asarray(a, dtype=complex)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise ValidationError(f"{name} must be square, got shape {arr.shape}")
    if arr.size and not np.all(np.isfinite(arr)):
        raise ValidationError(f"{name} contains non-finite entries")
    return arr


def require_hermitian(a, tol: float = HERM_TOL, name: str = "matrix") -> np.ndarray:
    """Validate Hermitian symmetry and return the symmetrized matrix.

    The asymmetry bound is relative to the largest absolute entry.
    """
    arr = as_square_matrix(a, name)
    if arr.size:
        scale = np.abs(arr).max()
        skew = np.abs(arr - arr.conj().T).max()
        if skew > tol * max(1.0, scale):
            raise ValidationError(
                f"{name} is not Hermitian: asymmetry {skew:.3e} exceeds "
                f"{tol:.1e} * max(1, {scale:.3e})"
            )
    return 0.5 * (arr + arr.conj().T)


def herm_part(a: np.ndarray) -> np.ndarray:
    """Hermitian part (A + A*)/2 without validation."""
    return 0.5 * (a + a.conj().T)


def opnorm(a: np.ndarray) -> float:
    """Spectral norm; 0 for empty matrices."""
    if a.size == 0:
        return 0.0
    return float(np.linalg.norm(a, 2))


def hermitian_eig(a, tol: float = HERM_TOL) -> EigDecomposition:
    """Eigendecomposition of a Hermitian matrix.

    Ascending real eigenvalues with orthonormal eigenvectors.  The input must
    be Hermitian within ``tol`` (relative); it is symmetrized before the
    solve so that repeated runs are bitwise identical on one platform.
    """
    h = require_hermitian(a, tol)
    if h.shape[0] == 0:
        return EigDecomposition(np.zeros(0), np.zeros((0, 0), dtype=complex))
    w, v = np.linalg.eigh(h)
    return EigDecomposition(w, v)


def check_psd(a, tol: float = PSD_TOL) -> bool:
    """True iff the Hermitian matrix has min eigenvalue >= -tol * max(1, norm)."""
    h = require_hermitian(a)
    if h.shape[0] == 0:
        return True
    w = np.linalg.eigvalsh(h)
    scale = max(1.0, float(np.abs(w).max()))
    return bool(w.min() >= -tol * scale)


def _psd_eig(a, rank_tol: float, psd_tol: float, name: str) -> EigDecomposition:
    dec = hermitian_eig(a)
    if dec.eigenvalues.size:
        w = dec.eigenvalues
        scale = max(1.0, float(np.abs(w).max()))
        if w.min() < -psd_tol * scale:
            raise ValidationError(
                f"{name} has negative eigenvalue {w.min():.3e} beyond tolerance"
            )
    return dec


def pinv_psd(a, rank_tol: float = RANK_TOL, psd_tol: float = PSD_TOL) -> np.ndarray:
    """Moore-Penrose pseudo-inverse of a PSD matrix.

    Eigenvalues below ``rank_tol`` times the largest one are treated as zero.
    A negative eigenvalue beyond ``psd_tol`` slack is a validation error.
    """
    dec = _psd_eig(a, rank_tol, psd_tol, "pinv_psd input")
    if dec.eigenvalues.size == 0:
        return np.zeros((0, 0), dtype=complex)
    w, v = dec
    lam_max = max(float(w.max()), 0.0)
    keep = w > rank_tol * lam_max
    if not np.any(keep):
        return np.zeros_like(v)
    vk = v[:, keep]
    return herm_part((vk / w[keep]) @ vk.conj().T)


def sqrt_psd(a, rank_tol: float = RANK_TOL, psd_tol: float = PSD_TOL) -> np.ndarray:
    """The PSD square root of a PSD matrix via eigendecomposition."""
    dec = _psd_eig(a, rank_tol, psd_tol, "sqrt_psd input")
    if dec.eigenvalues.size == 0:
        return np.zeros((0, 0), dtype=complex)
    w, v = dec
    lam_max = max(float(w.max()), 0.0)
    keep = w > rank_tol * lam_max
    if not np.any(keep):
        return np.zeros_like(v)
    vk = v[:, keep]
    return herm_part((vk * np.sqrt(w[keep])) @ vk.conj().T)


def loewner_leq(a, b, tol: float = PSD_TOL) -> bool:
    """Loewner order test: True iff B - A is PSD within ``tol``."""
    ah = require_hermitian(a, name="left operand")
    bh = require_hermitian(b, name="right operand")
    if ah.shape != bh.shape:
        raise ValidationError(
            f"dimension mismatch in Loewner comparison: {ah.shape} vs {bh.shape}"
        )
    return check_psd(bh - ah, tol)
