"""Projected ascent for homogeneous ratios.

The one optimizer the package needs: maximize f(z)/g(z) where both f and g
are continuous, degree-1 positively homogeneous and g vanishes only at the
origin.  The ratio is constant along rays, so iterates are renormalized to
the sphere {g = 1} after every accepted step.  Gradients are central finite
differences of the ratio (which is tangent to rays automatically), the step
direction is unit-normalized, and steps adapt by backtracking.  All decision
rules are scale-invariant, so scaling f by a constant scales the reported
value exactly and leaves the search path unchanged.

Restarts draw from independent substreams of one seed; results are
deterministic for a fixed seed and the first r restarts of a budget are a
prefix of any larger budget.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .errors import InputError
from .seeding import spawn_rngs

_FD_STEP = 1e-6
_TRIAL_LADDER = 0.25 ** np.arange(4)


@dataclass(frozen=True)
class AscentBudget:
    """Search effort: restart count, iterations per restart, initial step."""
    restarts: int = 32
    iterations: int = 500
    step0: float = 0.1

    def doubled(self) -> "AscentBudget":
        return AscentBudget(self.restarts * 2, self.iterations, self.step0)

    def validate(self):
        if self.restarts < 1 or self.iterations < 1 or not self.step0 > 0:
            raise InputError(f"budget must be positive, got {self}")


DEFAULT_BUDGET = AscentBudget()


@dataclass
class AscentResult:
    value: float
    argmax: np.ndarray
    converged: bool
    restart_values: list[float] = field(default_factory=list)


def _normalize(z: np.ndarray, denominator) -> np.ndarray | None:
    gz = float(denominator(z[None, :])[0])
    if not gz > 0.0 or not np.isfinite(gz):
        return None
    return z / gz


def maximize_ratio(numerator: Callable, denominator: Callable, dim: int,
                   seed: int = 0, budget: AscentBudget | None = None,
                   inits: Sequence[np.ndarray] = (), nonneg: bool = False
                   ) -> AscentResult:
    """Best found value of f/g over nonzero points of R^dim.

    ``numerator`` and ``denominator`` act on (batch, dim) arrays and return
    (batch,) values.  Structured ``inits`` are consumed first; remaining
    restarts start from seeded standard normals (folded positive when
    ``nonneg``).  The reported value is attained at ``argmax``, hence a
    certified lower bound of the supremum.
    """
    budget = budget or DEFAULT_BUDGET
    budget.validate()
    rngs = spawn_rngs(seed, budget.restarts)
    starts: list[np.ndarray] = []
    for init in inits:
        if len(starts) >= budget.restarts:
            break
        z = np.asarray(init, dtype=float).ravel()
        if z.shape != (dim,):
            raise InputError(f"init has size {z.size}, expected {dim}")
        starts.append(z)
    while len(starts) < budget.restarts:
        z = rngs[len(starts)].standard_normal(dim)
        starts.append(np.abs(z) if nonneg else z)

    eye = np.eye(dim)
    best_val = -np.inf
    best_z = None
    finals: list[float] = []
    for ridx, z0 in enumerate(starts):
        z = np.maximum(z0, 0.0) if nonneg else z0.copy()
        zn = _normalize(z, denominator)
        if zn is None:
            # degenerate start (for instance an all-zero tuple): resample
            for _ in range(8):
                z = rngs[ridx].standard_normal(dim)
                if nonneg:
                    z = np.abs(z)
                zn = _normalize(z, denominator)
                if zn is not None:
                    break
            if zn is None:
                finals.append(-np.inf)
                continue
        z = zn
        val = float(numerator(z[None, :])[0])
        eta = budget.step0
        stalls = 0
        quiet = 0
        ladder_count = len(_TRIAL_LADDER)
        for _ in range(budget.iterations):
            probe = np.concatenate([z + _FD_STEP * eye, z - _FD_STEP * eye])
            ratios = numerator(probe) / denominator(probe)
            grad = (ratios[:dim] - ratios[dim:]) / (2.0 * _FD_STEP)
            gn = float(np.linalg.norm(grad))
            if not np.isfinite(gn):
                break
            direction = grad / gn if gn > 0.0 else np.zeros(dim)
            # gradient-ladder steps plus compass moves in one batch; the
            # compass directions survive kinks where finite differences of
            # the norms mix the smooth pieces
            trials = np.concatenate([
                z[None, :] + (eta * _TRIAL_LADDER)[:, None] * direction[None, :],
                z + eta * eye,
                z - eta * eye,
            ])
            if nonneg:
                trials = np.maximum(trials, 0.0)
            gt = denominator(trials)
            ok = gt > 0.0
            scaled = trials / np.where(ok, gt, 1.0)[:, None]
            cand = np.where(ok, numerator(scaled) / denominator(scaled), -np.inf)
            pick = int(np.argmax(cand))
            if cand[pick] > val:
                gain = cand[pick] - val
                z = scaled[pick]
                val = float(cand[pick])
                if pick < ladder_count:
                    eta = min(eta * _TRIAL_LADDER[pick] * 1.6, 16.0)
                stalls = 0
                quiet = quiet + 1 if gain <= 1e-12 * max(abs(val), 1e-300) else 0
            else:
                eta *= 0.3
                stalls += 1
                quiet += 1
            if eta < 1e-13 or stalls > 8 or quiet > 40:
                break
        finals.append(val)
        if val > best_val:
            best_val = val
            best_z = z
    agree = sum(1 for v in finals if v >= best_val * (1.0 - 1e-4) - 1e-300)
    converged = agree >= min(2, len(finals))
    return AscentResult(best_val, best_z, converged, finals)
