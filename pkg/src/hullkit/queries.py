"""LP-based hull queries: membership, extreme-point tests, vertex pruning.

Membership of a query point in ``conv(V)`` is decided by the feasibility of

    sum_i alpha_i v_i = query,  sum_i alpha_i = 1,  alpha >= 0

with a zero cost vector, so one phase-1 solve settles the question. An
infeasible system yields a Farkas vector whose first n components give a
separating hyperplane; the certificate is re-offset against the point set so
it can be checked independently.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .errors import DimensionError
from .linalg import Hyperplane, as_vector
from .lp import INFEASIBLE, OPTIMAL, LpProblem, lp_solve
from .polytope import VRep


@dataclass(frozen=True)
class Weights:
    """A point on the standard simplex: alpha >= 0, sum(alpha) = 1."""

    alpha: np.ndarray

    def __post_init__(self):
        alpha = as_vector(self.alpha)
        if alpha.shape[0] < 1:
            raise ValueError("weights need at least one coordinate")
        if np.min(alpha) < -1e-9:
            raise ValueError("weights must be nonnegative within 1e-9")
        if abs(alpha.sum() - 1.0) > 1e-9:
            raise ValueError("weights must sum to 1 within 1e-9")
        alpha = alpha.copy()
        alpha.setflags(write=False)
        object.__setattr__(self, "alpha", alpha)

    @property
    def m(self) -> int:
        return self.alpha.shape[0]


@dataclass(frozen=True)
class MembershipResult:
    inside: bool
    weights: Weights | None = None
    separator: Hyperplane | None = None


def membership_problem(v: VRep, query) -> LpProblem:
    """The feasibility LP whose solvability decides ``query in conv(V)``."""
    query = as_vector(query, v.dim)
    eq = np.vstack([v.points.T, np.ones((1, v.n_points))])
    rhs = np.concatenate([query, [1.0]])
    return LpProblem(np.zeros(v.n_points), eq, rhs)


def contains(v: VRep, query) -> MembershipResult:
    """Decide membership of ``query`` in ``conv(V)`` by one LP solve.

    Inside answers carry the recovered convex-combination weights; outside
    answers carry a separating hyperplane derived from the Farkas
    certificate.
    """
    if np.asarray(query, dtype=float).shape != (v.dim,):
        raise DimensionError(f"query must have dimension {v.dim}")
    outcome = lp_solve(membership_problem(v, query))
    if outcome.status == OPTIMAL:
        alpha = np.maximum(outcome.solution, 0.0)
        alpha /= alpha.sum()
        return MembershipResult(True, weights=Weights(alpha))
    if outcome.status != INFEASIBLE:
        raise ArithmeticError("membership LP cannot be unbounded")

    u = outcome.farkas[:v.dim]
    norm = np.linalg.norm(u)
    if norm <= 1e-15:
        raise ArithmeticError("degenerate Farkas certificate")
    normal = -u / norm
    offset = float(np.max(v.points @ normal))
    return MembershipResult(False, separator=Hyperplane(normal, offset))


def is_extreme(v: VRep, k: int) -> bool:
    """True iff ``v_k`` is not a convex combination of the other points."""
    if not 0 <= k < v.n_points:
        raise IndexError(f"point index {k} out of range")
    if v.n_points == 1:
        return True
    others = np.delete(np.arange(v.n_points), k)
    pts = v.points[others]
    eq = np.vstack([pts.T, np.ones((1, pts.shape[0]))])
    rhs = np.concatenate([v.points[k], [1.0]])
    outcome = lp_solve(LpProblem(np.zeros(pts.shape[0]), eq, rhs))
    return outcome.status == INFEASIBLE


def _thread_count() -> int:
    raw = os.environ.get("HULLKIT_THREADS")
    if raw is None:
        return 1
    try:
        val = int(raw)
    except ValueError as exc:
        raise ValueError("HULLKIT_THREADS must be a positive integer") from exc
    if val < 1:
        raise ValueError("HULLKIT_THREADS must be a positive integer")
    return val


def extreme_points(v: VRep) -> VRep:
    """The sub-VRep of extreme points, in their original order.

    By the Krein-Milman property the hull is unchanged. The per-point LPs
    are independent; HULLKIT_THREADS > 1 classifies them concurrently.
    """
    if v.n_points == 1:
        return v
    threads = _thread_count()
    indices = range(v.n_points)
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            flags = list(pool.map(lambda k: is_extreme(v, k), indices))
    else:
        flags = [is_extreme(v, k) for k in indices]
    kept = np.flatnonzero(flags)
    if kept.size == 0:
        raise ArithmeticError("no extreme points found; numerical invariant violated")
    return VRep(v.points[kept])
