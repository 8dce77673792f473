"""Solvability criteria for truncated matrix moment problems on [a, b].

Three cases by the number of prescribed moments:

* ``l = 0``: S_0 PSD is necessary and sufficient.
* ``l = 2d`` (d >= 1): the moment matrix and its interval-weighted companion
  must be PSD and the kernel of the order-(d-1) moment matrix must be
  annihilated by the shifted block Hankel matrix.
* ``l = 2d+1``: the order-d pair must be PSD, two block linear systems must
  be consistent, and the admissible interval for the next moment must be
  nonempty.

An independent cross-check criterion is evaluated alongside: the plain PSD
pair without the kernel condition when l = 2d, the endpoint-weighted Hankel
pair when l = 2d+1.  Both verdicts are recorded; a disagreement counts as
hard only when no participating condition sits within the tolerance band of
its own threshold, and hard disagreements are logged as errors.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

from .errors import ValidationError
from .linalg import (
    PSD_TOL,
    RANK_TOL,
    herm_part,
    hermitian_eig,
    opnorm,
    require_hermitian,
)
from .moments import (
    MomentSequence,
    build_gamma,
    build_gamma_hat,
    build_gamma_tilde,
    build_h_pair,
)

logger = logging.getLogger(__name__)

# Relative residual bound for the block linear systems of the even case and
# for the kernel-inclusion test; AGREEMENT_BAND is the normalized margin
# inside which a criteria disagreement counts as numerical rather than hard.
CONSISTENCY_TOL = 1e-8
KERNEL_TOL = 1e-8
AGREEMENT_BAND = 1e-8


@dataclass(frozen=True)
class Condition:
    """One named solvability condition.

    ``quantity`` is the normalized decisive number: the relative minimum
    eigenvalue for PSD conditions (pass iff >= -threshold), the relative
    residual for residual conditions (pass iff <= threshold).  ``value`` is
    the raw unnormalized diagnostic for reporting.
    """

    name: str
    passed: bool
    kind: str  # "psd" | "residual"
    quantity: float
    threshold: float
    value: float

    @property
    def marginal(self) -> bool:
        """Whether the verdict sits inside the tolerance band of its threshold."""
        if self.kind == "psd":
            return abs(self.quantity) <= self.threshold + AGREEMENT_BAND
        return (not self.passed) and (
            self.quantity <= self.threshold + AGREEMENT_BAND
        )


@dataclass(frozen=True)
class EvenCaseData:
    """Solutions of the even-case block systems and the next-moment interval."""

    X: np.ndarray
    Y: np.ndarray
    S_min: np.ndarray
    S_max: np.ndarray


@dataclass(frozen=True)
class SolvabilityReport:
    solvable: bool
    case: str
    conditions: tuple[Condition, ...]
    failed_conditions: tuple[str, ...]
    even_case: EvenCaseData | None = None
    cdfk_solvable: bool | None = None
    criteria_agreement: bool | None = None
    details: dict = field(default_factory=dict)


def _psd_condition(name: str, matrix: np.ndarray, psd_tol: float) -> Condition:
    if matrix.size == 0:
        return Condition(name, True, "psd", np.inf, psd_tol, 0.0)
    w = np.linalg.eigvalsh(require_hermitian(matrix, name=name))
    scale = max(1.0, float(np.abs(w).max()))
    rel_min = float(w.min()) / scale
    return Condition(name, rel_min >= -psd_tol, "psd", rel_min, psd_tol,
                     float(w.min()))


def _residual_condition(name: str, residual: float, scale: float,
                        tol: float) -> Condition:
    if scale <= 0.0:
        rel = 0.0 if residual == 0.0 else np.inf
    else:
        rel = residual / scale
    return Condition(name, rel <= tol, "residual", rel, tol, residual)


def _range_solve(mat: np.ndarray, rhs: np.ndarray,
                 rank_tol: float) -> tuple[np.ndarray, float, np.ndarray]:
    """Minimal-norm solution of a PSD system with a stable residual.

    Works in the eigenbasis: the residual of the pseudo-inverse solution of a
    consistent system is exactly the component of ``rhs`` on the numerical
    kernel, so that component is measured directly instead of forming
    ``mat @ x - rhs`` (which would drown in rounding noise of order
    eps * cond(mat) for ill-conditioned moment matrices).  Also returns the
    quadratic form x* mat x evaluated the same stable way.
    """
    dec = hermitian_eig(mat)
    w, v = dec
    lam_max = max(float(w.max(initial=0.0)), 0.0)
    kept = w > rank_tol * lam_max
    coeff = v.conj().T @ rhs
    ck = coeff[kept]
    wk = w[kept][:, None]
    x = v[:, kept] @ (ck / wk)
    residual = float(np.linalg.norm(coeff[~kept]))
    quad = herm_part(ck.conj().T @ (ck / wk))
    return x, residual, quad


def _kernel_condition(seq: MomentSequence, d: int, rank_tol: float) -> Condition:
    gamma_prev = build_gamma(seq, d - 1).matrix
    gamma_hat = build_gamma_hat(seq, d).matrix
    dec = hermitian_eig(gamma_prev)
    lam_max = max(float(dec.eigenvalues.max(initial=0.0)), 0.0)
    kernel = dec.eigenvectors[:, dec.eigenvalues <= rank_tol * lam_max]
    if kernel.shape[1] == 0:
        return Condition("kernel inclusion", True, "residual", 0.0, KERNEL_TOL, 0.0)
    residual = float(np.linalg.norm(gamma_hat @ kernel, axis=0).max())
    return _residual_condition("kernel inclusion", residual,
                               max(1.0, opnorm(gamma_hat)), KERNEL_TOL)


def _cdfk_conditions(seq: MomentSequence, psd_tol: float) -> tuple[Condition, ...]:
    if seq.l < 1:
        raise ValidationError("cross-check requires at least two moments (l >= 1)")
    if seq.l % 2 == 0:
        d = seq.l // 2
        return (
            _psd_condition("Gamma PSD", build_gamma(seq, d).matrix, psd_tol),
            _psd_condition("GammaTilde PSD", build_gamma_tilde(seq, d).matrix, psd_tol),
        )
    d = (seq.l - 1) // 2
    h, ht = build_h_pair(seq, d)
    return (
        _psd_condition("H PSD", h.matrix, psd_tol),
        _psd_condition("HTilde PSD", ht.matrix, psd_tol),
    )


def check_cdfk(seq: MomentSequence, psd_tol: float = PSD_TOL) -> bool:
    """Cross-check criterion: PSD of the applicable block Hankel pair."""
    return all(c.passed for c in _cdfk_conditions(seq, psd_tol))


def _agreement(case: str, own: tuple[Condition, ...], seq: MomentSequence,
               psd_tol: float) -> tuple[bool, bool]:
    cdfk_conds = _cdfk_conditions(seq, psd_tol)
    cdfk_ok = all(c.passed for c in cdfk_conds)
    own_ok = all(c.passed for c in own)
    if own_ok == cdfk_ok:
        return cdfk_ok, True
    if any(c.marginal for c in own + cdfk_conds):
        logger.warning(
            "solvability criteria disagree within tolerance band (%s case): "
            "own=%s cross-check=%s", case, own_ok, cdfk_ok,
        )
        return cdfk_ok, True
    logger.error(
        "hard disagreement between solvability criteria (%s case): "
        "own=%s cross-check=%s", case, own_ok, cdfk_ok,
    )
    return cdfk_ok, False


def check_odd(seq: MomentSequence, psd_tol: float = PSD_TOL,
              rank_tol: float = RANK_TOL) -> SolvabilityReport:
    """Solvability for an odd number of prescribed moments (l = 2d, d >= 1)."""
    if seq.l % 2 != 0 or seq.l < 2:
        raise ValidationError(
            f"odd-case check requires l = 2d with d >= 1, got l={seq.l}"
        )
    d = seq.l // 2
    conditions = (
        _psd_condition("Gamma PSD", build_gamma(seq, d).matrix, psd_tol),
        _psd_condition("GammaTilde PSD", build_gamma_tilde(seq, d).matrix, psd_tol),
        _kernel_condition(seq, d, rank_tol),
    )
    cdfk_ok, agree = _agreement("odd", conditions, seq, psd_tol)
    failed = tuple(c.name for c in conditions if not c.passed)
    return SolvabilityReport(
        solvable=not failed,
        case="odd",
        conditions=conditions,
        failed_conditions=failed,
        cdfk_solvable=cdfk_ok,
        criteria_agreement=agree,
        details={c.name: c.value for c in conditions},
    )


def check_even(seq: MomentSequence, psd_tol: float = PSD_TOL,
               rank_tol: float = RANK_TOL) -> SolvabilityReport:
    """Solvability for an even number of prescribed moments (l = 2d+1, d >= 0).

    When the PSD conditions hold, the report carries the minimal-norm
    solutions of the two block systems and the admissible interval
    [S_min, S_max] for the next moment; solvability additionally requires
    both systems consistent and the interval nonempty.
    """
    if seq.l % 2 != 1:
        raise ValidationError(f"even-case check requires l = 2d+1, got l={seq.l}")
    d = (seq.l - 1) // 2
    s = seq.moments
    a, b, n = seq.a, seq.b, seq.N

    gamma = build_gamma(seq, d).matrix
    gtilde = build_gamma_tilde(seq, d).matrix
    conditions = [
        _psd_condition("Gamma PSD", gamma, psd_tol),
        _psd_condition("GammaTilde PSD", gtilde, psd_tol),
    ]
    even_case = None
    if all(c.passed for c in conditions):
        rhs_x = np.vstack([s[d + 1 + i] for i in range(d + 1)])
        x_sol, res_x, s_min = _range_solve(gamma, rhs_x, rank_tol)
        conditions.append(_residual_condition(
            "X system consistent", res_x, float(np.linalg.norm(rhs_x)),
            CONSISTENCY_TOL,
        ))
        if d > 0:
            rhs_y = np.vstack([
                -a * b * s[d + i] + (a + b) * s[d + i + 1] - s[d + i + 2]
                for i in range(d)
            ])
            y_sol, res_y, y_quad = _range_solve(gtilde, rhs_y, rank_tol)
            conditions.append(_residual_condition(
                "Y system consistent", res_y, float(np.linalg.norm(rhs_y)),
                CONSISTENCY_TOL,
            ))
        else:
            y_sol = np.zeros((0, n), dtype=complex)
            y_quad = np.zeros((n, n), dtype=complex)
            conditions.append(Condition("Y system consistent", True, "residual",
                                        0.0, CONSISTENCY_TOL, 0.0))

        s_max = herm_part(
            -a * b * s[2 * d] + (a + b) * s[2 * d + 1] - y_quad
        )
        even_case = EvenCaseData(X=x_sol, Y=y_sol, S_min=s_min, S_max=s_max)
        # the interval may collapse to a point, so normalize its PSD test by
        # the endpoint scale rather than by the (possibly zero) width
        width_eigs = np.linalg.eigvalsh(s_max - s_min)
        scale = max(1.0, opnorm(s_min), opnorm(s_max))
        rel_min = float(width_eigs.min()) / scale
        conditions.append(Condition("S interval nonempty", rel_min >= -psd_tol,
                                    "psd", rel_min, psd_tol,
                                    float(width_eigs.min())))

    conditions = tuple(conditions)
    cdfk_ok, agree = _agreement("even", conditions, seq, psd_tol)
    failed = tuple(c.name for c in conditions if not c.passed)
    return SolvabilityReport(
        solvable=not failed,
        case="even",
        conditions=conditions,
        failed_conditions=failed,
        even_case=even_case,
        cdfk_solvable=cdfk_ok,
        criteria_agreement=agree,
        details={c.name: c.value for c in conditions},
    )


def check_l0(s0, psd_tol: float = PSD_TOL) -> SolvabilityReport:
    """Solvability with only S_0 prescribed: S_0 PSD."""
    cond = _psd_condition("S0 PSD", require_hermitian(s0, name="S_0"), psd_tol)
    failed = () if cond.passed else (cond.name,)
    return SolvabilityReport(
        solvable=cond.passed,
        case="l0",
        conditions=(cond,),
        failed_conditions=failed,
        details={cond.name: cond.value},
    )


def check(seq: MomentSequence, psd_tol: float = PSD_TOL) -> SolvabilityReport:
    """Dispatch on the number of prescribed moments."""
    if seq.l == 0:
        return check_l0(seq.moments[0], psd_tol)
    if seq.l % 2 == 0:
        return check_odd(seq, psd_tol)
    return check_even(seq, psd_tol)
