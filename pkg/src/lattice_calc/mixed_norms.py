"""The two mixed norms on tuples, truncated sequences, and their checks.

For a tuple (x_1, ..., x_n) of vectors there are two natural norms built
from a sequence-norm family:

  strong:    the family norm of the vector of row norms;
  pointwise: the space norm of the lattice element produced by applying the
             family norm coordinate by coordinate (functional calculus).

Both are invariant under zero-row padding and nondecreasing in the prefix
length, which is what lets eventually-zero sequences stand in for the
infinite-dimensional objects.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import DimensionMismatchError, InputError
from .finite_lattice import (FiniteLattice, NormedSpace, lattice_valued_norm)
from .reporting import check_record, inputs_digest
from .seq_lattice import LpFamily, SeqNormFamily, dual_witness, kothe_dual


@dataclass(frozen=True)
class VectorTuple:
    """An n-tuple of vectors stored as an immutable (n, dim) table."""
    rows: np.ndarray
    space_tag: str = "lattice"

    def __post_init__(self):
        arr = np.array(self.rows, dtype=float)
        if arr.ndim != 2 or arr.size == 0:
            raise InputError(f"tuple rows must form a nonempty 2-d table, "
                             f"got shape {arr.shape}")
        if not np.all(np.isfinite(arr)):
            raise InputError("tuple contains non-finite entries")
        arr.setflags(write=False)
        object.__setattr__(self, "rows", arr)

    @property
    def n(self) -> int:
        return self.rows.shape[0]

    @property
    def dim(self) -> int:
        return self.rows.shape[1]

    def padded(self, extra: int = 1) -> "VectorTuple":
        pad = np.zeros((extra, self.dim))
        return VectorTuple(np.vstack([self.rows, pad]), self.space_tag)


@dataclass(frozen=True)
class TruncatedSequence:
    """A vector tuple read as an eventually-zero sequence (implicit zero tail)."""
    tuple: VectorTuple

    @property
    def rows(self) -> np.ndarray:
        return self.tuple.rows

    @property
    def last_nonzero(self) -> int:
        """1-based index of the last nonzero row; 0 when all rows vanish."""
        alive = np.flatnonzero(np.any(self.tuple.rows != 0.0, axis=1))
        return int(alive[-1] + 1) if alive.size else 0


def as_rows(x, dim: int | None = None) -> np.ndarray:
    a = np.asarray(getattr(x, "rows", x), dtype=float)
    if a.ndim != 2 or a.size == 0:
        raise InputError(f"expected a nonempty (n, dim) array, got {a.shape}")
    if dim is not None and a.shape[1] != dim:
        raise DimensionMismatchError(
            f"rows have dimension {a.shape[1]}, expected {dim}")
    return a


def strong_mixed_norm_batch(space: NormedSpace, family: SeqNormFamily,
                            tuples: np.ndarray) -> np.ndarray:
    """Family norm of the row-norm vector; leading axes are batches."""
    a = np.asarray(tuples, dtype=float)
    family.check_length(a.shape[-2])
    return family.norm_array(space.norm_array(a))


def strong_mixed_norm(space: NormedSpace, family: SeqNormFamily, rows) -> float:
    return float(strong_mixed_norm_batch(space, family, as_rows(rows, space.dim)))


def pointwise_mixed_norm_batch(space: FiniteLattice, family: SeqNormFamily,
                               tuples: np.ndarray) -> np.ndarray:
    """Space norm of the coordinatewise family norm; leading axes are batches."""
    return space.norm_array(lattice_valued_norm(family, tuples))


def pointwise_mixed_norm(space: FiniteLattice, family: SeqNormFamily, rows) -> float:
    return float(pointwise_mixed_norm_batch(space, family, as_rows(rows, space.dim)))


def mixed_norm_equivalence_check(space: FiniteLattice, family: SeqNormFamily,
                        rows, rtol: float = 1e-9):
    """Sandwich the pointwise norm by explicit multiples of the summed row norms.

    Upper constant: family norm of the all-ones vector.  Lower constant:
    the smallest canonical-vector norm divided by the tuple length.
    """
    a = as_rows(rows, space.dim)
    n = a.shape[0]
    tau = pointwise_mixed_norm(space, family, a)
    summed = float(space.norm_array(a).sum())
    upper = family.norm(np.ones(n))
    lower = min(family.unit_vector_norm(j, n) for j in range(n)) / n
    holds = (lower * summed <= tau * (1.0 + rtol) + 1e-300
             and tau <= upper * summed * (1.0 + rtol) + 1e-300)
    return tau, summed, bool(holds)


def tail_profile(family: SeqNormFamily, space: NormedSpace,
                 seq: TruncatedSequence | VectorTuple | np.ndarray,
                 flavor: str = "strong") -> np.ndarray:
    """Mixed norms of the tails: entry k is the norm with rows before k zeroed.

    Positions are kept (the family need not be rearrangement invariant), so
    the profile is exactly nonincreasing and vanishes once the support ends.
    """
    a = as_rows(seq, space.dim)
    n = a.shape[0]
    tails = np.broadcast_to(a, (n, n, a.shape[1])).copy()
    mask = np.arange(n)[None, :] < np.arange(n)[:, None]
    tails[mask] = 0.0
    if flavor == "strong":
        return strong_mixed_norm_batch(space, family, tails)
    if flavor == "pointwise":
        if not isinstance(space, FiniteLattice):
            raise InputError("pointwise tails need a lattice")
        return pointwise_mixed_norm_batch(space, family, tails)
    raise InputError(f"unknown tail flavor {flavor!r}")


def sequence_pairing(space: NormedSpace, family: SeqNormFamily,
                     functionals, rows, rtol: float = 1e-9):
    """sum_j <w_j, phi_j> with its mixed-norm bound report.

    The bound pairs the strong mixed norm of the functionals (dual space,
    dual family) with the strong mixed norm of the vectors.
    """
    s = as_rows(functionals, space.dim)
    w = as_rows(rows, space.dim)
    if s.shape[0] != w.shape[0]:
        raise DimensionMismatchError(
            f"{s.shape[0]} functionals against {w.shape[0]} vectors")
    value = float((s * w).sum())
    lhs = abs(value)
    rhs = (strong_mixed_norm(space.dual(), kothe_dual(family), s)
           * strong_mixed_norm(space, family, w))
    report = check_record("sequence_pairing", lhs, rhs,
                          lhs <= rhs * (1.0 + rtol) + 1e-300,
                          inputs_digest(s, w, family.label, space.label))
    return value, report


def lattice_holder_check(space: FiniteLattice, family: SeqNormFamily,
                         vectors, functionals,
                         dual_family: SeqNormFamily | None = None,
                         rtol: float = 1e-9):
    """Pointwise pairing bound: sum_j |<x_j, phi_j>| against the inner product
    of the two lattice-valued norms (family on the vectors, dual family on
    the functionals)."""
    x = as_rows(vectors, space.dim)
    phi = as_rows(functionals, space.dim)
    if x.shape != phi.shape:
        raise DimensionMismatchError(
            f"tuples have shapes {x.shape} and {phi.shape}")
    dual_family = dual_family or kothe_dual(family)
    lhs = float(np.abs((x * phi).sum(axis=1)).sum())
    rhs = float(lattice_valued_norm(family, x)
                @ lattice_valued_norm(dual_family, phi))
    return lhs, rhs, bool(lhs <= rhs * (1.0 + rtol) + 1e-300)


def riesz_join_check(functionals, x, trials: int = 100, seed: int = 0,
                     tol: float = 1e-12):
    """The join of functionals evaluated on x >= 0 versus decompositions.

    The greedy split sends each coordinate of x to a functional attaining
    the coordinatewise max, which reproduces the join value exactly in an
    atomic lattice; random nonnegative splits never exceed it.
    """
    phis = as_rows(functionals)
    xv = np.asarray(x, dtype=float)
    if xv.ndim != 1 or xv.shape[0] != phis.shape[1]:
        raise DimensionMismatchError(
            f"x has shape {xv.shape}, functionals act on R^{phis.shape[1]}")
    if np.any(xv < 0.0):
        raise InputError("x must be coordinatewise nonnegative")
    join = phis.max(axis=0)
    join_value = float(join @ xv)
    greedy = np.zeros_like(phis)
    top = phis.argmax(axis=0)
    greedy[top, np.arange(phis.shape[1])] = xv
    greedy_value = float((phis * greedy).sum())
    rng = np.random.default_rng(seed)
    worst = -np.inf
    for _ in range(trials):
        weights = rng.exponential(size=phis.shape)
        weights /= weights.sum(axis=0, keepdims=True)
        value = float((phis * (weights * xv[None, :])).sum())
        worst = max(worst, value)
    scale = max(abs(join_value), 1.0)
    equal = abs(join_value - greedy_value) <= tol * scale
    never_exceeds = worst <= join_value + tol * scale
    return join_value, greedy_value, bool(equal and never_exceeds)


@dataclass
class JoinBoundReport:
    """Sampled dual-ball joins against the pointwise mixed norm."""
    sampled_norm: float
    pointwise_norm: float
    holds: bool
    analytic_gap: float | None = None


def join_bound_check(space: FiniteLattice, family: SeqNormFamily, rows,
                     samples: int = 32, seed: int = 0,
                     rtol: float = 1e-9) -> JoinBoundReport:
    """Space norm of a sampled join of dual-ball combinations of the rows.

    Every sampled family of dual-unit-ball coefficient vectors produces a
    join dominated pointwise by the lattice-valued norm, so its space norm
    never exceeds the pointwise mixed norm.  For lp families the closed-form
    per-coordinate maximizers drive the join up to equality.
    """
    a = as_rows(rows, space.dim)
    n = a.shape[0]
    tau = pointwise_mixed_norm(space, family, a)
    dual = kothe_dual(family)
    rng = np.random.default_rng(seed)
    dirs = rng.standard_normal((samples, n))
    nrm = dual.norm_array(dirs)
    keep = nrm > 0
    dirs = dirs[keep] / nrm[keep, None]
    combos = dirs @ a
    sampled = float(space.norm(np.abs(combos).max(axis=0)))
    holds = sampled <= tau * (1.0 + rtol) + 1e-300
    gap = None
    if isinstance(family, LpFamily):
        winners = np.stack([dual_witness(dual, a[:, w]) for w in range(a.shape[1])])
        lifted = float(space.norm((winners @ a).max(axis=0)))
        gap = abs(lifted - tau) / max(tau, 1e-300)
    return JoinBoundReport(sampled, tau, bool(holds), gap)
