"""Linear operators as matrices with normed domain and codomain.

Transposition swaps the matrix and replaces each side by its dual space.
Operator norms are ascent estimates (certified lower bounds); every check
that consumes one is arranged so an underestimate cannot fake a pass.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatchError, InputError
from .finite_lattice import NormedSpace
from .mixed_norms import as_rows, strong_mixed_norm
from .optimize import AscentBudget, AscentResult, maximize_ratio
from .seq_lattice import SeqNormFamily


@dataclass
class OperatorInstance:
    """A matrix mapping the domain space into the codomain space."""
    matrix: np.ndarray
    domain: NormedSpace
    codomain: NormedSpace
    label: str = "T"

    def __post_init__(self):
        m = np.array(self.matrix, dtype=float)
        if m.ndim != 2 or m.size == 0:
            raise InputError(f"operator matrix must be 2-d, got shape {m.shape}")
        if not np.all(np.isfinite(m)):
            raise InputError("operator matrix has non-finite entries")
        if m.shape != (self.codomain.dim, self.domain.dim):
            raise DimensionMismatchError(
                f"matrix shape {m.shape} does not map "
                f"R^{self.domain.dim} into R^{self.codomain.dim}")
        m.setflags(write=False)
        self.matrix = m

    @property
    def in_dim(self) -> int:
        return self.domain.dim

    @property
    def out_dim(self) -> int:
        return self.codomain.dim


def apply(op: OperatorInstance, w) -> np.ndarray:
    v = np.asarray(w, dtype=float)
    if v.shape != (op.in_dim,):
        raise DimensionMismatchError(
            f"vector of shape {v.shape} fed to operator on R^{op.in_dim}")
    return op.matrix @ v


def apply_n(op: OperatorInstance, rows) -> np.ndarray:
    """Rowwise application to a tuple; leading axes are batches."""
    a = np.asarray(getattr(rows, "rows", rows), dtype=float)
    if a.shape[-1] != op.in_dim:
        raise DimensionMismatchError(
            f"tuple rows of length {a.shape[-1]} fed to operator on R^{op.in_dim}")
    return a @ op.matrix.T


def transpose(op: OperatorInstance) -> OperatorInstance:
    return OperatorInstance(op.matrix.T.copy(), op.codomain.dual(),
                            op.domain.dual(), op.label + "*")


def operator_norm(op: OperatorInstance, budget: AscentBudget | None = None,
                  seed: int = 0, extra_inits=()) -> AscentResult:
    """Ascent estimate of sup ||Tw|| / ||w||, a certified lower bound."""
    mat = op.matrix

    def numer(z):
        return op.codomain.norm_array(z @ mat.T)

    def denom(z):
        return op.domain.norm_array(z)

    inits = [row for row in np.eye(op.in_dim)]
    inits.extend(np.asarray(e, dtype=float).ravel() for e in extra_inits)
    return maximize_ratio(numer, denom, op.in_dim, seed=seed,
                          budget=budget or AscentBudget(restarts=16, iterations=300),
                          inits=inits)


def tuple_lifting_bound_check(op: OperatorInstance, family: SeqNormFamily,
                              rows, budget: AscentBudget | None = None,
                              seed: int = 0, rtol: float = 1e-6):
    """Strong mixed norm of the lifted tuple against ||T|| times the original.

    The norm estimate is seeded with the tuple's own normalized rows, which
    already makes the inequality hold with the estimated constant; the check
    therefore exercises the homogeneity and monotonicity of the norms rather
    than the optimizer.
    """
    a = as_rows(rows, op.in_dim)
    lifted = apply_n(op, a)
    base = strong_mixed_norm(op.domain, family, a)
    row_norms = op.domain.norm_array(a)
    alive = row_norms > 0
    extra = a[alive] / row_norms[alive, None]
    t_est = operator_norm(op, budget, seed, extra_inits=extra).value
    lhs = strong_mixed_norm(op.codomain, family, lifted)
    rhs = t_est * base
    return lhs, rhs, bool(lhs <= rhs * (1.0 + rtol) + 1e-300)
