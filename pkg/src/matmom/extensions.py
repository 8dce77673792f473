"""Self-adjoint contraction extensions of the shift contraction.

Given the block column [P; Q] of a Hermitian contraction with non-dense
domain, the self-adjoint contraction completions

    [[P, Q*], [Q, X]]

form a Loewner-order operator interval whose endpoints have the closed
Schur-complement form

    X_min = Q (I + P)^+ Q* - I,      X_max = I - Q (I - P)^+ Q*.

(The pseudo-inverses are safe because the relevant range inclusions hold
automatically for contraction columns, including the attainable case
norm(P) = 1.)  The defect C is the gap between the extreme extensions; when
it vanishes the extension, and hence the solution measure, is unique.  The
interval is swept by B_min + C^(1/2) K C^(1/2) with a Hermitian parameter
0 <= K <= I on the defect space, and each such extension has resolvent

    R_K(z) = R_min(z) - R_min(z) C^(1/2) K (I + (Q_mu(z) - I) K)^(-1)
             C^(1/2) R_min(z),

where Q_mu(z) = (C^(1/2) R_min(z) C^(1/2) + I) restricted to the defect
space; the identity is plain Woodbury algebra and is what this module
evaluates.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NumericalInconsistency, ValidationError
from .linalg import (
    PSD_TOL,
    RANK_TOL,
    EigDecomposition,
    herm_part,
    hermitian_eig,
    opnorm,
    pinv_psd,
    require_hermitian,
    sqrt_psd,
)
from .operator_model import ContractionModel

# Defect norm below which the extension problem counts as determinate, the
# margin kept between resolvent arguments and the spectrum, and the condition
# bound beyond which the middle inverse of the resolvent formula is rejected.
DETERMINATE_TOL = 1e-10
Z_MARGIN = 1e-8
COND_LIMIT = 1e12
NORM_SLACK = 1e-8


@dataclass(frozen=True, eq=False)
class ExtensionInterval:
    """Endpoints of the operator interval of self-adjoint contraction extensions.

    ``B_mu`` and ``B_M`` act on the whole Gram space (standard coordinates),
    ``X_mu``/``X_M`` are their defect-space blocks, ``C = B_M - B_mu``
    the defect, and ``R0_dim`` the dimension of the defect directions on
    which both endpoints agree.
    """

    model: ContractionModel
    B_mu: np.ndarray
    B_M: np.ndarray
    C: np.ndarray
    X_mu: np.ndarray
    X_M: np.ndarray
    determinate: bool
    R0_dim: int
    C_R: np.ndarray
    C_R_half: np.ndarray
    mu_eig: EigDecomposition

    @property
    def def_dim(self) -> int:
        return self.model.def_dim

    def defect_support_basis(self, rank_tol: float = RANK_TOL) -> np.ndarray:
        """Orthonormal basis (in defect coordinates) of the range of the defect."""
        dec = hermitian_eig(self.C_R)
        lam_max = max(float(dec.eigenvalues.max(initial=0.0)), 0.0)
        return dec.eigenvectors[:, dec.eigenvalues > rank_tol * lam_max]


def extremal_completions(p_block, q_block,
                         rank_tol: float = RANK_TOL) -> tuple[np.ndarray, np.ndarray]:
    """Extreme defect blocks X_min, X_max completing the contraction column."""
    p = require_hermitian(p_block, name="P")
    q = np.asarray(q_block, dtype=complex)
    if q.ndim != 2 or q.shape[1] != p.shape[0]:
        raise ValidationError(f"Q must have {p.shape[0]} columns, got shape {q.shape}")
    eye_p = np.eye(p.shape[0], dtype=complex)
    eye_q = np.eye(q.shape[0], dtype=complex)
    x_mu = herm_part(q @ pinv_psd(eye_p + p, rank_tol, psd_tol=NORM_SLACK)
                     @ q.conj().T - eye_q)
    x_m = herm_part(eye_q - q @ pinv_psd(eye_p - p, rank_tol, psd_tol=NORM_SLACK)
                    @ q.conj().T)
    return x_mu, x_m


def _assemble(p, q, x) -> np.ndarray:
    return np.block([[p, q.conj().T], [q, x]])


def extremal_extensions(model: ContractionModel,
                        rank_tol: float = RANK_TOL) -> ExtensionInterval:
    """Extreme self-adjoint contraction extensions and the defect between them."""
    x_mu, x_m = extremal_completions(model.P, model.Q, rank_tol)
    for name, x in (("minimal", x_mu), ("maximal", x_m)):
        norm = opnorm(_assemble(model.P, model.Q, x))
        if norm > 1.0 + NORM_SLACK:
            raise NumericalInconsistency(
                f"{name} completion has norm {norm:.12f} > 1; "
                "upstream PSD or rank decision failed"
            )
    u = np.hstack([model.dom_basis, model.def_basis])
    b_mu = herm_part(u @ _assemble(model.P, model.Q, x_mu) @ u.conj().T)
    b_m = herm_part(u @ _assemble(model.P, model.Q, x_m) @ u.conj().T)
    c_r = herm_part(x_m - x_mu)
    c_full = herm_part(model.def_basis @ c_r @ model.def_basis.conj().T)

    if c_r.size:
        c_eigs = np.linalg.eigvalsh(c_r)
        lam_max = max(float(c_eigs.max()), 0.0)
        r0_dim = int(np.sum(c_eigs <= rank_tol * lam_max)) if lam_max > 0 else c_r.shape[0]
    else:
        lam_max = 0.0
        r0_dim = 0
    return ExtensionInterval(
        model=model,
        B_mu=b_mu,
        B_M=b_m,
        C=c_full,
        X_mu=x_mu,
        X_M=x_m,
        determinate=lam_max <= DETERMINATE_TOL,
        R0_dim=r0_dim,
        C_R=c_r,
        C_R_half=sqrt_psd(c_r),
        mu_eig=hermitian_eig(b_mu),
    )


def as_unit_interval_param(value, dim: int, psd_tol: float = PSD_TOL,
                           name: str = "parameter") -> np.ndarray:
    """Validate a Hermitian parameter with 0 <= K <= I on a ``dim``-space.

    Accepts a scalar t in [0, 1] (meaning t times the identity) or a
    Hermitian ``dim x dim`` matrix with spectrum in [0, 1] up to tolerance.
    """
    if np.isscalar(value):
        t = complex(value)
        if abs(t.imag) > psd_tol or not -psd_tol <= t.real <= 1.0 + psd_tol:
            raise ValidationError(f"scalar {name} must lie in [0, 1], got {value}")
        return float(min(max(t.real, 0.0), 1.0)) * np.eye(dim, dtype=complex)
    mat = require_hermitian(value, name=name)
    if mat.shape[0] != dim:
        raise ValidationError(f"{name} must be {dim}x{dim}, got {mat.shape}")
    if mat.size:
        w = np.linalg.eigvalsh(mat)
        if w.min() < -psd_tol or w.max() > 1.0 + psd_tol:
            raise ValidationError(
                f"{name} eigenvalues [{w.min():.3e}, {w.max():.3e}] "
                "must lie in [0, 1]"
            )
    return mat


def canonical_extension(interval: ExtensionInterval, k) -> np.ndarray:
    """The extension B_min + C^(1/2) K C^(1/2) for a parameter 0 <= K <= I.

    K = 0 gives the minimal extension, K = I the maximal one; directions off
    the defect support are fixed automatically by the sandwich.
    """
    kk = as_unit_interval_param(k, interval.def_dim, name="extension parameter")
    ur = interval.model.def_basis
    bump = interval.C_R_half @ kk @ interval.C_R_half
    return herm_part(interval.B_mu + ur @ bump @ ur.conj().T)


def _require_admissible(interval: ExtensionInterval, z: complex) -> complex:
    z = complex(z)
    if z.imag == 0.0 and -1.0 <= z.real <= 1.0:
        raise ValidationError(f"resolvent argument {z} lies inside [-1, 1]")
    w = interval.mu_eig.eigenvalues
    if w.size and np.abs(w - z).min() < Z_MARGIN:
        raise ValidationError(
            f"resolvent argument {z} is within {Z_MARGIN:.1e} of the spectrum"
        )
    return z


def _mu_resolvent(interval: ExtensionInterval, z: complex) -> np.ndarray:
    w, v = interval.mu_eig
    return (v / (w - z)) @ v.conj().T


def qmu(interval: ExtensionInterval, z: complex) -> np.ndarray:
    """The defect-space function C^(1/2) (B_min - z)^(-1) C^(1/2) + I."""
    z = _require_admissible(interval, z)
    q = interval.def_dim
    if q == 0:
        return np.zeros((0, 0), dtype=complex)
    w, v = interval.mu_eig
    ur_v = v.conj().T @ interval.model.def_basis  # defect basis in eigencoordinates
    middle = ur_v.conj().T @ (ur_v / (w - z)[:, None])
    return interval.C_R_half @ middle @ interval.C_R_half + np.eye(q, dtype=complex)


def generalized_resolvent(interval: ExtensionInterval, k, z: complex) -> np.ndarray:
    """Resolvent of the canonical extension with parameter K, evaluated at z.

    Equals (B_min - z)^(-1) corrected by a defect-space term; for K = 0, or
    when the defect vanishes, the correction is zero.
    """
    kk = as_unit_interval_param(k, interval.def_dim, name="extension parameter")
    z = _require_admissible(interval, z)
    r_mu = _mu_resolvent(interval, z)
    q = interval.def_dim
    if q == 0:
        return r_mu
    eye_q = np.eye(q, dtype=complex)
    mid_base = eye_q + (qmu(interval, z) - eye_q) @ kk
    if np.linalg.cond(mid_base) > COND_LIMIT:
        raise NumericalInconsistency(
            f"resolvent middle factor is numerically singular at z={z}"
        )
    middle = kk @ np.linalg.inv(mid_base)
    ur = interval.model.def_basis
    left = r_mu @ ur @ interval.C_R_half
    right = interval.C_R_half @ ur.conj().T @ r_mu
    return r_mu - left @ middle @ right
