"""Solution measures of truncated matrix moment problems.

The odd-case pipeline runs Gram space -> shift contraction -> extension
interval -> canonical extension, then reads a discrete matrix measure off
the extension's spectral decomposition: eigenvalue lambda maps to the atom
position (b-a)/2 * lambda + (a+b)/2 and the weight entries are the inner
products of the eigenprojection applied to the first N Gram vectors.  The
even case picks the next moment inside its admissible interval and defers to
the odd case; l = 0 returns a one-atom representative.  A slower, fully
independent recovery through Stieltjes-Perron inversion of the generalized
resolvent is provided as a numerical cross-check.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NumericalInconsistency, Unsolvable, ValidationError
from .extensions import (
    ExtensionInterval,
    as_unit_interval_param,
    canonical_extension,
    extremal_extensions,
)
from .linalg import PSD_TOL, check_psd, herm_part, hermitian_eig, sqrt_psd
from .moments import DiscreteMatrixMeasure, MomentSequence, measure_from_atoms, moments_of
from .operator_model import build_gram_space, build_operators
from .solvability import check_even, check_l0, check_odd

# Eigenvalues closer than CLUSTER_TOL are merged into one atom; positions
# within CLAMP_REL * (b - a) outside the interval (rounding of eigenvalues at
# +-1) are clamped to the endpoint; solved measures are re-verified at
# SOLVE_VERIFY_TOL before being returned.
CLUSTER_TOL = 1e-9
CLAMP_REL = 1e-9
SOLVE_VERIFY_TOL = 1e-8


@dataclass(frozen=True, eq=False)
class SpectralData:
    """Clustered spectrum of an extension with matrix projection weights.

    ``eigenvalues`` lie in [-1, 1] up to rounding; ``weights[i]`` is the
    N x N matrix of eigenprojection inner products between the first N Gram
    vectors, so the weights sum to the zeroth moment.
    """

    eigenvalues: np.ndarray
    weights: np.ndarray


@dataclass(frozen=True)
class VerificationReport:
    """Outcome of re-computing moments from a measure."""

    passed: bool
    tol: float
    moment_residuals: np.ndarray
    moment_scales: np.ndarray
    support_ok: bool
    weights_psd_ok: bool

    @property
    def max_relative_residual(self) -> float:
        if self.moment_residuals.size == 0:
            return 0.0
        return float((self.moment_residuals / self.moment_scales).max())


def spectral_data(extension: np.ndarray, first_vectors: np.ndarray,
                  cluster_tol: float = CLUSTER_TOL) -> SpectralData:
    """Cluster the spectrum of an extension and form matrix atom weights."""
    dec = hermitian_eig(extension)
    w, v = dec
    n_vec = first_vectors.shape[1]
    if w.size == 0:
        return SpectralData(np.zeros(0), np.zeros((0, n_vec, n_vec), dtype=complex))
    # greedy chaining: a new cluster starts where the gap exceeds the tolerance
    boundaries = [0]
    for i in range(1, w.size):
        if w[i] - w[i - 1] > cluster_tol:
            boundaries.append(i)
    boundaries.append(w.size)

    lams = []
    weights = []
    for s, e in zip(boundaries[:-1], boundaries[1:]):
        block = v[:, s:e]
        proj = block @ block.conj().T
        # weight entry (j, n) is <proj x_j, x_n> = x_n^H proj x_j
        wmat = herm_part((first_vectors.conj().T @ proj @ first_vectors).T)
        lams.append(float(w[s:e].mean()))
        weights.append(wmat)
    return SpectralData(np.array(lams), np.stack(weights))


def _measure_from_spectrum(sd: SpectralData, a: float, b: float) -> DiscreteMatrixMeasure:
    positions = 0.5 * (b - a) * sd.eigenvalues + 0.5 * (a + b)
    band = CLAMP_REL * (b - a)
    clamped = np.clip(positions, a, b)
    if np.abs(clamped - positions).max(initial=0.0) > band:
        raise NumericalInconsistency("spectral atom positions stray outside [a, b]")
    return measure_from_atoms(a, b, clamped, sd.weights, N=sd.weights.shape[-1])


def solve_odd(seq: MomentSequence, k=0.5, *,
              verify_tol: float = SOLVE_VERIFY_TOL) -> DiscreteMatrixMeasure:
    """Solve the odd case (l = 2d) with a constant extension parameter.

    Parameters
    ----------
    seq : MomentSequence
        Moments S_0..S_2d on [a, b]; must pass the odd-case solvability check.
    k : scalar in [0, 1] or Hermitian matrix on the defect space
        Selects the canonical extension; 0 and 1 give the extreme solutions.
        Ignored when the problem is determinate.
    verify_tol : float
        Relative tolerance of the internal round-trip verification.

    Returns a canonical discrete matrix measure whose moments reproduce the
    input sequence; a verification failure raises ``NumericalInconsistency``.
    """
    report = check_odd(seq)
    if not report.solvable:
        raise Unsolvable(
            "moment problem is unsolvable; failed: "
            + ", ".join(report.failed_conditions)
        )
    space = build_gram_space(seq)
    model = build_operators(space)
    interval = extremal_extensions(model)
    extension = canonical_extension(interval, k)
    sd = spectral_data(extension, space.vectors[:, : seq.N])
    measure = _measure_from_spectrum(sd, seq.a, seq.b)
    outcome = verify(measure, seq, tol=verify_tol)
    if not outcome.passed:
        raise NumericalInconsistency(
            f"solved measure fails verification at tol {verify_tol:.1e} "
            f"(max relative residual {outcome.max_relative_residual:.3e})"
        )
    return measure


def solve_even(seq: MomentSequence, t=0.5, k=0.5, *,
               verify_tol: float = SOLVE_VERIFY_TOL) -> DiscreteMatrixMeasure:
    """Solve the even case (l = 2d+1) by choosing the next moment.

    ``t`` (scalar in [0, 1] or Hermitian N x N matrix with 0 <= T <= I)
    selects S_{2d+2} = S_min + D^(1/2) T D^(1/2) inside the admissible
    interval, D its width; the extended problem is then solved as an odd
    case with parameter ``k``.  To supply a raw next moment instead, append
    it with ``seq.extended(s_next)`` and call :func:`solve_odd`, which
    validates admissibility through the odd-case solvability check.
    """
    report = check_even(seq)
    if not report.solvable:
        raise Unsolvable(
            "moment problem is unsolvable; failed: "
            + ", ".join(report.failed_conditions)
        )
    data = report.even_case
    t_mat = as_unit_interval_param(t, seq.N, name="moment-interval parameter")
    width_half = sqrt_psd(herm_part(data.S_max - data.S_min))
    s_next = herm_part(data.S_min + width_half @ t_mat @ width_half)
    return solve_odd(seq.extended(s_next), k, verify_tol=verify_tol)


def solve_l0(s0, a: float, b: float) -> DiscreteMatrixMeasure:
    """One-atom representative for the l = 0 problem.

    Any non-decreasing matrix function with total mass S_0 solves the
    problem; the canonical atomic representative puts all of S_0 at the
    midpoint of [a, b].
    """
    report = check_l0(s0)
    if not report.solvable:
        raise Unsolvable("S_0 is not positive semidefinite")
    s0 = np.asarray(s0, dtype=complex)
    return measure_from_atoms(a, b, [0.5 * (a + b)], [s0], N=s0.shape[0])


def verify(measure: DiscreteMatrixMeasure, seq: MomentSequence,
           tol: float = 1e-8) -> VerificationReport:
    """Re-compute the measure's moments and compare with the prescription.

    Passes iff every moment matches entrywise within ``tol * max(1, |S_n|)``,
    the support lies inside [a, b], and all weights are PSD.
    """
    if measure.N != seq.N:
        raise ValidationError(
            f"block size mismatch: measure has N={measure.N}, sequence N={seq.N}"
        )
    recomputed = moments_of(measure, seq.l)
    residuals = np.array([
        np.abs(recomputed.moments[i] - seq.moments[i]).max()
        for i in range(seq.l + 1)
    ])
    scales = np.array([
        max(1.0, float(np.linalg.norm(s, 2))) for s in seq.moments
    ])
    support_ok = _supported(measure, seq)
    weights_psd_ok = all(
        check_psd(measure.weights[i], PSD_TOL) for i in range(measure.num_atoms)
    )
    passed = bool(np.all(residuals <= tol * scales)) and support_ok and weights_psd_ok
    return VerificationReport(
        passed=passed,
        tol=tol,
        moment_residuals=residuals,
        moment_scales=scales,
        support_ok=support_ok,
        weights_psd_ok=weights_psd_ok,
    )


def _supported(measure: DiscreteMatrixMeasure, seq: MomentSequence) -> bool:
    if measure.num_atoms == 0:
        return True
    return bool(measure.positions.min() >= seq.a and measure.positions.max() <= seq.b)


def _resolvent_density(interval: ExtensionInterval, kk: np.ndarray,
                       ts: np.ndarray, eps: float) -> np.ndarray:
    """Matrix spectral density (1/pi Im of the resolvent inner products).

    Evaluates the generalized resolvent at every t + i*eps through the
    eigendecomposition of the minimal extension (batched over ``ts``) and
    forms the Hermitian density between the first N Gram vectors.
    """
    model = interval.model
    n = model.space.N
    first = model.space.vectors[:, :n]
    w, v = interval.mu_eig
    zs = ts + 1j * eps
    xv = v.conj().T @ first                      # (r, N)
    g = 1.0 / (w[None, :] - zs[:, None])         # (nz, r)
    raw = np.einsum("ri,tr,rj->tij", xv.conj(), g, xv)
    if interval.def_dim:
        ur_v = v.conj().T @ model.def_basis      # (r, q)
        ch = interval.C_R_half
        q_dim = interval.def_dim
        qm = np.einsum("ri,tr,rj->tij", ur_v.conj(), g, ur_v)
        qm = ch @ qm @ ch + np.eye(q_dim, dtype=complex)
        mid = np.linalg.inv(
            np.eye(q_dim, dtype=complex) + (qm - np.eye(q_dim)) @ kk
        )
        left = np.einsum("ri,tr,rj->tij", xv.conj(), g, ur_v) @ ch
        right = ch @ np.einsum("ri,tr,rj->tij", ur_v.conj(), g, xv)
        raw = raw - left @ (kk @ mid) @ right
    # entry (j, n) of the density comes from <R x_j, x_n> = raw[n, j]
    g_mat = np.transpose(raw, (0, 2, 1))
    return (g_mat - g_mat.conj().transpose(0, 2, 1)) / (2j * np.pi)


def stieltjes_perron_recover(interval: ExtensionInterval, k=0.5, *,
                             eps: float = 1e-4, step: float = 1e-4,
                             pad: float = 0.1,
                             density_floor: float = 1e-3) -> DiscreteMatrixMeasure:
    """Approximate the spectral measure by Stieltjes-Perron inversion.

    Integrates the matrix density (G(t) - G(t)*)/(2 pi i), where G(t) holds
    the generalized-resolvent inner products between the first N Gram
    vectors at t + i*eps, over a uniform grid on [-1-pad, 1+pad], then
    groups the cells into clusters separated at density minima.  Each cell
    is integrated by two midpoint subsamples: a uniform comb at spacing
    step/2 keeps the aliasing error of the width-``eps`` Poisson kernel
    negligible even when ``step`` equals ``eps``.  The result approximates
    the solution in the reference coordinates on [-1, 1]; atom locations
    and total mass converge as ``eps`` and ``step`` shrink together.
    """
    if eps <= 0 or step <= 0 or pad < 0:
        raise ValidationError("eps and step must be positive, pad non-negative")
    n = interval.model.space.N
    kk = as_unit_interval_param(k, interval.def_dim, name="extension parameter")
    empty = measure_from_atoms(-1.0, 1.0, [], np.zeros((0, n, n)), N=n)
    if interval.mu_eig.eigenvalues.size == 0:
        return empty

    lo, hi = -1.0 - pad, 1.0 + pad
    n_cells = max(int(np.ceil((hi - lo) / step)), 1)
    mids = lo + step * (np.arange(n_cells) + 0.5)
    d_lo = _resolvent_density(interval, kk, mids - 0.25 * step, eps)
    d_hi = _resolvent_density(interval, kk, mids + 0.25 * step, eps)
    cell = (d_lo + d_hi) * (0.5 * step)

    trace = np.einsum("tii->t", cell).real
    if trace.max(initial=0.0) <= 0.0:
        return empty

    # cores above the relative floor, split between cores at the density minimum
    above = trace > density_floor * trace.max()
    runs = []
    idx = 0
    while idx < above.size:
        if above[idx]:
            start = idx
            while idx < above.size and above[idx]:
                idx += 1
            runs.append((start, idx))
        else:
            idx += 1
    cuts = [0]
    for (_, e0), (s1, _) in zip(runs[:-1], runs[1:]):
        cuts.append(e0 + int(np.argmin(trace[e0:s1])))
    cuts.append(above.size)

    positions = []
    weights = []
    for s0, s1 in zip(cuts[:-1], cuts[1:]):
        seg_trace = trace[s0:s1]
        mass = seg_trace.sum()
        if mass <= 0.0:
            continue
        positions.append(float((mids[s0:s1] * seg_trace).sum() / mass))
        weights.append(herm_part(cell[s0:s1].sum(axis=0)))
    if not positions:
        return empty
    positions = np.clip(np.array(positions), -1.0, 1.0)
    return measure_from_atoms(-1.0, 1.0, positions, np.stack(weights), N=n)
