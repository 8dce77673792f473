"""Moment sequences, block Hankel builders, and discrete matrix measures.

A moment sequence holds Hermitian N x N matrices S_0..S_l together with the
interval [a, b].  The block Hankel builders assemble the structured matrices
whose positivity governs solvability; a discrete matrix measure is a finite
list of atoms (x_i, W_i) with PSD matrix weights, the package's concrete
representation of a solution.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ValidationError
from .linalg import HERM_TOL, PSD_TOL, check_psd, require_hermitian

# Atoms closer than ATOM_MERGE_REL * (b - a) are merged; weights whose norm is
# below WEIGHT_PRUNE_REL times the total-mass norm are dropped.
ATOM_MERGE_REL = 1e-12
WEIGHT_PRUNE_REL = 1e-12


def _check_interval(a: float, b: float) -> tuple[float, float]:
    a = float(a)
    b = float(b)
    if not (np.isfinite(a) and np.isfinite(b)):
        raise ValidationError("interval endpoints must be finite")
    if not a < b:
        raise ValidationError(f"interval requires a < b, got a={a}, b={b}")
    return a, b


@dataclass(frozen=True, eq=False)
class MomentSequence:
    """Prescribed moments S_0..S_l on the interval [a, b]."""

    a: float
    b: float
    moments: tuple[np.ndarray, ...]

    def __post_init__(self):
        a, b = _check_interval(self.a, self.b)
        if len(self.moments) == 0:
            raise ValidationError("moment sequence must contain at least S_0")
        checked = []
        n = None
        for i, s in enumerate(self.moments):
            arr = require_hermitian(s, HERM_TOL, name=f"S_{i}")
            if n is None:
                n = arr.shape[0]
                if n == 0:
                    raise ValidationError("block size N must be positive")
            elif arr.shape[0] != n:
                raise ValidationError(
                    f"S_{i} has dimension {arr.shape[0]}, expected {n}"
                )
            arr.setflags(write=False)
            checked.append(arr)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "moments", tuple(checked))

    @property
    def N(self) -> int:
        return self.moments[0].shape[0]

    @property
    def l(self) -> int:
        return len(self.moments) - 1

    def truncated(self, l: int) -> "MomentSequence":
        """The sub-sequence S_0..S_l on the same interval."""
        if not 0 <= l <= self.l:
            raise ValidationError(f"cannot truncate to l={l}, have l={self.l}")
        return MomentSequence(self.a, self.b, self.moments[: l + 1])

    def extended(self, s_next) -> "MomentSequence":
        """Append one more moment matrix."""
        return MomentSequence(self.a, self.b, self.moments + (np.asarray(s_next),))


@dataclass(frozen=True, eq=False)
class BlockHankel:
    """A structured Hermitian matrix built from a moment sequence.

    ``kind`` is one of "gamma", "gamma_tilde", "h", "h_tilde", "gamma_hat";
    ``k`` the order index; ``matrix`` the assembled matrix.
    """

    kind: str
    k: int
    matrix: np.ndarray


def _assemble(blocks, rows: int, cols: int, n: int) -> np.ndarray:
    out = np.zeros((rows * n, cols * n), dtype=complex)
    for i in range(rows):
        for j in range(cols):
            out[i * n : (i + 1) * n, j * n : (j + 1) * n] = blocks(i, j)
    return out


def build_gamma(seq: MomentSequence, k: int) -> BlockHankel:
    """Block Hankel matrix with (i, j) block S_{i+j}, 0 <= i, j <= k."""
    if k < 0 or 2 * k > seq.l:
        raise ValidationError(f"insufficient moments for order k={k} (l={seq.l})")
    s = seq.moments
    return BlockHankel("gamma", k, _assemble(lambda i, j: s[i + j], k + 1, k + 1, seq.N))


def build_gamma_tilde(seq: MomentSequence, k: int) -> BlockHankel:
    """Interval-weighted block Hankel: blocks -ab S_{i+j} + (a+b) S_{i+j+1} - S_{i+j+2}.

    Indices run 0 <= i, j <= k-1, so k = 0 yields the empty 0x0 matrix.
    """
    if k < 0 or 2 * k > seq.l:
        raise ValidationError(f"insufficient moments for order k={k} (l={seq.l})")
    a, b, s = seq.a, seq.b, seq.moments
    blocks = lambda i, j: -a * b * s[i + j] + (a + b) * s[i + j + 1] - s[i + j + 2]
    return BlockHankel("gamma_tilde", k, _assemble(blocks, k, k, seq.N))


def build_h_pair(seq: MomentSequence, k: int) -> tuple[BlockHankel, BlockHankel]:
    """Endpoint-weighted pair: blocks -a S_{i+j} + S_{i+j+1} and b S_{i+j} - S_{i+j+1}."""
    if k < 0 or 2 * k + 1 > seq.l:
        raise ValidationError(f"insufficient moments for order k={k} (l={seq.l})")
    a, b, s = seq.a, seq.b, seq.moments
    h = _assemble(lambda i, j: -a * s[i + j] + s[i + j + 1], k + 1, k + 1, seq.N)
    ht = _assemble(lambda i, j: b * s[i + j] - s[i + j + 1], k + 1, k + 1, seq.N)
    return BlockHankel("h", k, h), BlockHankel("h_tilde", k, ht)


def build_gamma_hat(seq: MomentSequence, d: int) -> BlockHankel:
    """Shifted block Hankel with (i, j) block S_{i+j+2}, 0 <= i, j <= d-1."""
    if d < 1 or 2 * d > seq.l:
        raise ValidationError(f"insufficient moments for order d={d} (l={seq.l})")
    s = seq.moments
    return BlockHankel(
        "gamma_hat", d - 1, _assemble(lambda i, j: s[i + j + 2], d, d, seq.N)
    )


@dataclass(frozen=True, eq=False)
class DiscreteMatrixMeasure:
    """Finite atomic matrix measure: atoms (x_i, W_i) with x_i in [a, b].

    Positions are strictly increasing and every weight is Hermitian PSD
    within tolerance.  Construct through :func:`measure_from_atoms`, which
    canonicalizes (sorts, merges near-coincident atoms, prunes negligible
    weights) so that measure equality is testable.
    """

    a: float
    b: float
    N: int
    positions: np.ndarray = field(repr=False)
    weights: np.ndarray = field(repr=False)

    def __post_init__(self):
        a, b = _check_interval(self.a, self.b)
        pos = np.asarray(self.positions, dtype=float)
        w = np.asarray(self.weights, dtype=complex)
        if pos.ndim != 1 or w.ndim != 3 or w.shape[0] != pos.shape[0]:
            raise ValidationError("atom arrays have inconsistent shapes")
        if w.shape[1] != self.N or w.shape[2] != self.N:
            raise ValidationError(f"weights must be {self.N}x{self.N}")
        if pos.size:
            if pos.min() < a or pos.max() > b:
                raise ValidationError("atom positions must lie inside [a, b]")
            if np.any(np.diff(pos) <= 0):
                raise ValidationError("atom positions must be strictly increasing")
        for i in range(pos.size):
            if not check_psd(w[i], PSD_TOL):
                raise ValidationError(f"weight {i} is not PSD within tolerance")
        pos.setflags(write=False)
        w.setflags(write=False)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "positions", pos)
        object.__setattr__(self, "weights", w)

    @property
    def num_atoms(self) -> int:
        return int(self.positions.size)

    def total_mass(self) -> np.ndarray:
        """Sum of all weights; equals the zeroth moment."""
        if self.num_atoms == 0:
            return np.zeros((self.N, self.N), dtype=complex)
        return self.weights.sum(axis=0)

    def isclose(self, other: "DiscreteMatrixMeasure", pos_tol: float = 1e-9,
                weight_tol: float = 1e-9) -> bool:
        """Atom-wise comparison of two canonical measures."""
        if self.N != other.N or self.num_atoms != other.num_atoms:
            return False
        if self.num_atoms == 0:
            return True
        if np.abs(self.positions - other.positions).max() > pos_tol:
            return False
        return bool(np.abs(self.weights - other.weights).max() <= weight_tol)


def measure_from_atoms(a: float, b: float, positions, weights,
                       N: int | None = None) -> DiscreteMatrixMeasure:
    """Build a canonical measure from raw atom data.

    Sorts by position, merges atoms closer than ``ATOM_MERGE_REL * (b - a)``
    by summing their weights, and prunes atoms whose weight norm is below
    ``WEIGHT_PRUNE_REL`` times the norm of the total mass.
    """
    a, b = _check_interval(a, b)
    pos = np.atleast_1d(np.asarray(positions, dtype=float))
    w = np.asarray(weights, dtype=complex)
    if w.ndim == 2:
        w = w[None, :, :]
    if pos.size == 0:
        if N is None:
            raise ValidationError("empty measure needs an explicit block size N")
        return DiscreteMatrixMeasure(a, b, N, np.zeros(0),
                                     np.zeros((0, N, N), dtype=complex))
    if N is None:
        N = w.shape[-1]

    order = np.argsort(pos, kind="stable")
    pos = pos[order]
    w = w[order]

    merge_tol = ATOM_MERGE_REL * (b - a)
    merged_pos: list[float] = []
    merged_w: list[np.ndarray] = []
    for x, wi in zip(pos, w):
        if merged_pos and x - merged_pos[-1] <= merge_tol:
            merged_w[-1] = merged_w[-1] + wi
        else:
            merged_pos.append(float(x))
            merged_w.append(wi)

    total = np.sum(merged_w, axis=0)
    floor = WEIGHT_PRUNE_REL * np.linalg.norm(total)
    keep = [i for i, wi in enumerate(merged_w) if np.linalg.norm(wi) > floor]
    kept_pos = np.array([merged_pos[i] for i in keep], dtype=float)
    kept_w = (np.stack([merged_w[i] for i in keep])
              if keep else np.zeros((0, N, N), dtype=complex))
    return DiscreteMatrixMeasure(a, b, N, kept_pos, kept_w)


def moments_of(measure: DiscreteMatrixMeasure, l: int) -> MomentSequence:
    """Power moments S_n = sum_i x_i^n W_i for n = 0..l (with 0^0 = 1)."""
    if l < 0:
        raise ValidationError("l must be non-negative")
    n_mat = measure.N
    if measure.num_atoms == 0:
        zero = np.zeros((n_mat, n_mat), dtype=complex)
        return MomentSequence(measure.a, measure.b, (zero,) * (l + 1))
    powers = measure.positions[:, None] ** np.arange(l + 1)[None, :]
    s = np.einsum("in,iab->nab", powers, measure.weights)
    return MomentSequence(measure.a, measure.b, tuple(s))


def gen_random_measure(seed: int, N: int, num_atoms: int, a: float,
                       b: float) -> DiscreteMatrixMeasure:
    """Seeded random measure with full-rank PSD weights.

    Atom positions are uniform in (a, b) and sorted; each weight is G* G for
    a random complex N x N factor G, hence PSD of full rank almost surely.
    The result is a deterministic function of the seed.
    """
    if num_atoms < 1:
        raise ValidationError("num_atoms must be at least 1")
    if N < 1:
        raise ValidationError("N must be at least 1")
    a, b = _check_interval(a, b)
    rng = np.random.default_rng(seed)
    pos = rng.uniform(a, b, size=num_atoms)
    g = rng.standard_normal((num_atoms, N, N)) + 1j * rng.standard_normal(
        (num_atoms, N, N)
    )
    w = np.einsum("iba,ibc->iac", g.conj(), g)
    return measure_from_atoms(a, b, pos, w, N=N)
