"""Finite-dimensional normed spaces and atomic Banach lattices.

A lattice here is R^m with the coordinatewise order and a monotone norm.
Coordinate evaluations are lattice homomorphisms, so the functional calculus
of a degree-1 homogeneous h applied to a tuple (x_1, ..., x_n) is exactly
the pointwise evaluation omega -> h(x_1[omega], ..., x_n[omega]).  That
makes projection recovery, composition identities and order preservation
exact, not approximate.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import DimensionMismatchError, InputError
from .seq_lattice import (LpFamily, SeqNormFamily, dual_witness, kothe_dual,
                          as_vector)

_SUP_SAMPLES = 10_000


class NormedSpace:
    """R^dim carrying a norm family restricted to its dimension."""

    def __init__(self, dim: int, family: SeqNormFamily, label: str | None = None):
        if dim < 1:
            raise InputError(f"dimension must be positive, got {dim}")
        family.check_length(dim)
        self.dim = dim
        self.family = family
        self.label = label or f"({family.label})^{dim}"

    def norm_array(self, vectors: np.ndarray) -> np.ndarray:
        a = np.asarray(vectors, dtype=float)
        if a.shape[-1] != self.dim:
            raise DimensionMismatchError(
                f"{self.label}: expected vectors of length {self.dim}, "
                f"got {a.shape[-1]}")
        return self.family.norm_array(a)

    def norm(self, x) -> float:
        return float(self.norm_array(as_vector(x)))

    def dual(self) -> "NormedSpace":
        return NormedSpace(self.dim, kothe_dual(self.family), self.label + "*")

    def __repr__(self):
        return f"<{type(self).__name__} {self.label}>"


class FiniteLattice(NormedSpace):
    """Normed space whose order is coordinatewise; the norm must be monotone."""

    def dual(self) -> "DualLattice":
        return DualLattice(self)


class DualLattice(FiniteLattice):
    """Dual of a finite lattice: same coordinates, Koethe-dual norm."""

    def __init__(self, base: FiniteLattice):
        super().__init__(base.dim, kothe_dual(base.family), base.label + "*")
        self.base = base


def lattice(dim: int, family: SeqNormFamily, label: str | None = None) -> FiniteLattice:
    return FiniteLattice(dim, family, label)


def join(x, y):
    return np.maximum(np.asarray(x, float), np.asarray(y, float))


def meet(x, y):
    return np.minimum(np.asarray(x, float), np.asarray(y, float))


def absolute(x):
    return np.abs(np.asarray(x, float))


@dataclass
class HomogeneousFunction:
    """Continuous h: R^arity -> R with h(t*x) = t*h(x) for t >= 0.

    ``func`` is batched: it maps (..., arity) arrays to (...) arrays.
    ``sup_norm`` is the supremum of |h| over the max-norm unit sphere; exact
    for projections and norm families, a sampled lower estimate otherwise
    (``sup_exact`` records which).
    """
    arity: int
    func: Callable[[np.ndarray], np.ndarray]
    label: str
    sup_norm: float
    sup_exact: bool

    def __call__(self, points: np.ndarray) -> np.ndarray:
        return self.func(np.asarray(points, dtype=float))


def projection(arity: int, index: int) -> HomogeneousFunction:
    if not 0 <= index < arity:
        raise InputError(f"projection index {index} outside arity {arity}")
    return HomogeneousFunction(
        arity, lambda a: np.asarray(a, float)[..., index],
        f"proj[{index}/{arity}]", 1.0, True)


def norm_function(family: SeqNormFamily, arity: int) -> HomogeneousFunction:
    family.check_length(arity)
    # Monotone norms peak at the all-ones corner of the unit cube.
    sup = family.norm(np.ones(arity))
    return HomogeneousFunction(arity, family.norm_array,
                               f"norm[{family.label}/{arity}]", sup, True)


def _sampled_cube_sup(func, arity: int, samples: int, seed: int) -> float:
    rng = np.random.default_rng(seed)
    pts = rng.uniform(-1.0, 1.0, size=(samples, arity))
    tops = np.abs(pts).max(axis=-1)
    keep = tops > 0
    pts = pts[keep] / tops[keep, None]
    return float(np.abs(func(pts)).max())


def homogeneous(func: Callable, arity: int, label: str = "h",
                batched: bool = True, samples: int = _SUP_SAMPLES,
                seed: int = 0, validate_pairs: int = 256) -> HomogeneousFunction:
    """Wrap a user function; non-batched callables are vectorized row by row.

    Degree-1 positive homogeneity is probed on seeded (scale, point) pairs
    at construction; violations are rejected with the worst deviation.
    """
    if batched:
        wrapped = func
    else:
        def wrapped(a):
            arr = np.asarray(a, dtype=float)
            flat = arr.reshape(-1, arr.shape[-1])
            return np.array([float(func(r)) for r in flat]).reshape(arr.shape[:-1])
    if validate_pairs:
        rng = np.random.default_rng(190558)
        pts = rng.standard_normal((validate_pairs, arity)) * 2.0
        lam = rng.uniform(0.0, 4.0, validate_pairs)
        base = np.asarray(wrapped(pts), dtype=float)
        scaled = np.asarray(wrapped(lam[:, None] * pts), dtype=float)
        err = np.abs(scaled - lam * base)
        worst = float((err / np.maximum(np.abs(lam * base), 1e-12)).max())
        if not np.all(np.isfinite(scaled)) or worst > 1e-9:
            raise InputError(
                f"{label} is not positively homogeneous of degree 1 "
                f"(worst relative deviation {worst:.3e} on sampled pairs)")
    sup = _sampled_cube_sup(wrapped, arity, samples, seed)
    return HomogeneousFunction(arity, wrapped, label, sup, False)


def compose(outer: HomogeneousFunction,
            inner: Sequence[HomogeneousFunction],
            samples: int = _SUP_SAMPLES, seed: int = 0) -> HomogeneousFunction:
    """outer(inner_1, ..., inner_k) as a single homogeneous function."""
    if len(inner) != outer.arity:
        raise DimensionMismatchError(
            f"outer arity {outer.arity} does not match {len(inner)} inner maps")
    arities = {g.arity for g in inner}
    if len(arities) != 1:
        raise DimensionMismatchError("inner maps must share one arity")
    arity = arities.pop()

    def func(a):
        stacked = np.stack([g.func(a) for g in inner], axis=-1)
        return outer.func(stacked)

    sup = _sampled_cube_sup(func, arity, samples, seed)
    return HomogeneousFunction(arity, func,
                               f"{outer.label}o({len(inner)} maps)", sup, False)


def _tuple_rows(rows, arity: int | None = None) -> np.ndarray:
    a = np.asarray(getattr(rows, "rows", rows), dtype=float)
    if a.ndim != 2 or a.size == 0:
        raise InputError(f"expected a nonempty (n, m) tuple of rows, got {a.shape}")
    if arity is not None and a.shape[0] != arity:
        raise DimensionMismatchError(
            f"tuple has {a.shape[0]} rows, function has arity {arity}")
    return a


def krivine_apply(h: HomogeneousFunction, rows) -> np.ndarray:
    """Apply h to a tuple of lattice elements, coordinate by coordinate."""
    a = _tuple_rows(rows, h.arity)
    return h.func(a.T)


def lattice_valued_norm(family: SeqNormFamily, rows) -> np.ndarray:
    """The lattice element omega -> family norm of (x_1[omega], ..., x_n[omega])."""
    a = np.asarray(getattr(rows, "rows", rows), dtype=float)
    if a.ndim < 2:
        raise InputError(f"expected tuples of shape (..., n, m), got {a.shape}")
    family.check_length(a.shape[-2])
    return family.norm_array(np.moveaxis(a, -2, -1))


def krivine_compose_check(inner: Sequence[HomogeneousFunction],
                          h: HomogeneousFunction, rows):
    """Composing inside or outside the calculus gives the same element.

    lhs applies each inner map first and h to the resulting tuple; rhs
    applies the composed function directly.  In the pointwise realization
    these are the same arithmetic, so equality is exact.
    """
    a = _tuple_rows(rows)
    stage = np.stack([krivine_apply(g, a) for g in inner])
    lhs = krivine_apply(h, stage)
    rhs = krivine_apply(compose(h, inner, samples=2, seed=0), a)
    return lhs, rhs, bool(np.array_equal(lhs, rhs))


def krivine_bound_check(h: HomogeneousFunction, rows, space: NormedSpace,
                        rtol: float = 1e-9):
    """Norm of the calculus output against sup_norm(h) times the peak row.

    The sampled sup_norm only ever understates the right side, so a pass is
    trustworthy regardless of sampling quality.
    """
    a = _tuple_rows(rows, h.arity)
    lhs = space.norm(krivine_apply(h, a))
    rhs = h.sup_norm * space.norm(np.abs(a).max(axis=0))
    return lhs, rhs, bool(lhs <= rhs * (1.0 + rtol) + 1e-300)


@dataclass
class SupRepresentation:
    """Lower approximation of the lattice-valued norm by dual-ball pairings."""
    sampled: np.ndarray
    reference: np.ndarray
    analytic: np.ndarray | None


def sup_representation(family: SeqNormFamily, rows, samples: int = 64,
                       seed: int = 0) -> SupRepresentation:
    """Coordinatewise sup of sum_j a_j x_j over dual-unit-ball vectors a.

    Random directions are normalized in the dual norm, so each pairing is a
    true lower bound pointwise.  For lp families the per-coordinate
    maximizers are closed-form and reproduce the norm exactly.
    """
    a = _tuple_rows(rows)
    n = a.shape[0]
    reference = lattice_valued_norm(family, a)
    dual = kothe_dual(family)
    rng = np.random.default_rng(seed)
    dirs = rng.standard_normal((samples, n))
    nrm = dual.norm_array(dirs)
    keep = nrm > 0
    dirs = dirs[keep] / nrm[keep, None]
    sampled = (dirs @ a).max(axis=0)
    analytic = None
    if isinstance(family, LpFamily):
        winners = np.stack([dual_witness(dual, a[:, w]) for w in range(a.shape[1])])
        analytic = np.einsum("wn,nw->w", winners, a)
    return SupRepresentation(sampled, reference, analytic)
