"""Two-phase dense-tableau simplex for standard-form linear programs.

Solves ``min c.x  s.t.  A x = b, x >= 0``. Bland's entering/leaving rule is
used in both phases, so every solve is deterministic and cycle-free.
Infeasible problems come back with a Farkas certificate ``y`` satisfying
``y.A >= 0`` componentwise and ``y.b < 0``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionError
from .linalg import as_matrix, as_vector

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"

# Reduced-cost threshold for entering columns.
_RC_EPS = 1e-9
# Smallest usable ratio-test pivot.
_PIV_EPS = 1e-9
# Phase-1 optimum above this means infeasible.
_FEAS_EPS = 1e-8


@dataclass(frozen=True)
class LpProblem:
    """``min cost . x`` subject to ``eq_matrix x = eq_rhs`` and ``x >= 0``."""

    cost: np.ndarray
    eq_matrix: np.ndarray
    eq_rhs: np.ndarray

    def __post_init__(self):
        a = as_matrix(self.eq_matrix)
        c = as_vector(self.cost, a.shape[1])
        b = as_vector(self.eq_rhs, a.shape[0])
        if a.shape[0] < 1 or a.shape[1] < 1:
            raise DimensionError("LP needs at least one row and one column")
        object.__setattr__(self, "eq_matrix", a)
        object.__setattr__(self, "cost", c)
        object.__setattr__(self, "eq_rhs", b)

    @property
    def n_rows(self) -> int:
        return self.eq_matrix.shape[0]

    @property
    def n_vars(self) -> int:
        return self.eq_matrix.shape[1]


@dataclass(frozen=True)
class LpOutcome:
    status: str
    solution: np.ndarray | None = None
    objective: float | None = None
    farkas: np.ndarray | None = None
    iterations: int = 0
    pivots: tuple | None = None


class _IterationCap(RuntimeError):
    pass


def _simplex(tableau, obj_row, basis, n_cols, phase, pivots, max_iterations, start_iter):
    """Run Bland-rule pivots in place. Returns (status, iterations).

    ``obj_row`` holds reduced costs in columns ``0..n_cols-1`` and ``-z`` in
    its last cell. ``n_cols`` limits the entering-column scan (used in phase
    2 to keep artificial columns out of the basis).
    """
    m = tableau.shape[0]
    iters = start_iter
    while True:
        negative = obj_row[:n_cols] < -_RC_EPS
        if not negative.any():
            return OPTIMAL, iters
        entering = int(np.argmax(negative))  # first True: Bland's rule

        col = tableau[:, entering]
        rhs = tableau[:, -1]
        eligible = col > _PIV_EPS
        if not eligible.any():
            return UNBOUNDED, iters
        ratios = np.where(eligible, rhs / np.where(eligible, col, 1.0), np.inf)
        best = ratios.min()
        # Ties broken by smallest basis index: Bland's rule.
        tied = np.flatnonzero(ratios <= best + 1e-12)
        leaving = int(tied[np.argmin(np.asarray(basis)[tied])])

        piv = tableau[leaving, entering]
        tableau[leaving] /= piv
        factors = tableau[:, entering].copy()
        factors[leaving] = 0.0
        tableau -= np.outer(factors, tableau[leaving])
        obj_row -= obj_row[entering] * tableau[leaving]
        basis[leaving] = entering

        # Clamp roundoff drift so the ratio test stays meaningful.
        rhs = tableau[:, -1]
        rhs[(rhs < 0.0) & (rhs > -1e-11)] = 0.0

        if pivots is not None:
            pivots.append((phase, entering, leaving))
        iters += 1
        if iters >= max_iterations:
            raise _IterationCap(f"simplex exceeded {max_iterations} pivots")


def lp_solve(problem: LpProblem, track_pivots: bool = False,
             max_iterations: int | None = None) -> LpOutcome:
    """Two-phase primal simplex with Bland's anticycling rule.

    Phase 1 minimizes the artificial-variable sum; a phase-1 optimum above
    1e-8 yields ``INFEASIBLE`` with the Farkas vector recovered from the
    final dual values. Phase 2 optimizes ``cost``; ``UNBOUNDED`` is reported
    when an entering column admits no ratio-test row.
    """
    a = problem.eq_matrix
    b = problem.eq_rhs
    c = problem.cost
    m, n = a.shape
    if max_iterations is None:
        max_iterations = 1000 + 200 * (m + n)
    pivots = [] if track_pivots else None

    # Row equilibration keeps pivot thresholds meaningful across scales;
    # sign flips make the right-hand side nonnegative.
    row_scale = np.maximum(np.max(np.abs(a), axis=1), np.abs(b))
    row_scale[row_scale < 1e-12] = 1.0
    sign = np.where(b / row_scale < 0.0, -1.0, 1.0)
    e = sign / row_scale
    a1 = a * e[:, None]
    b1 = b * e

    # Phase 1 tableau: [A | I | b] with an all-artificial basis.
    tableau = np.hstack([a1, np.eye(m), b1[:, None]])
    basis = list(range(n, n + m))
    obj_row = np.concatenate([np.zeros(n), np.ones(m), [0.0]])
    obj_row -= tableau.sum(axis=0)  # reduce against the artificial basis

    status, iters = _simplex(tableau, obj_row, basis, n + m, 1, pivots,
                             max_iterations, 0)
    if status == UNBOUNDED:  # phase-1 objective is bounded below by 0
        raise ArithmeticError("phase 1 reported unbounded; input is malformed")

    phase1_value = -obj_row[-1]
    if phase1_value > _FEAS_EPS:
        # Dual values: reduced cost of artificial i is 1 - y_i.
        y = 1.0 - obj_row[n:n + m]
        farkas = -(y * e)
        norm = np.max(np.abs(farkas))
        if norm > 0.0:
            farkas = farkas / norm
        return LpOutcome(INFEASIBLE, farkas=farkas, iterations=iters,
                         pivots=tuple(pivots) if pivots is not None else None)

    # Drive leftover artificials out of the basis; drop redundant rows.
    # The largest available pivot is taken: this is a single structural pass,
    # not an optimization loop, so Bland's rule is unnecessary here.
    keep = np.ones(m, dtype=bool)
    for i in range(m):
        if basis[i] >= n:
            row = np.abs(tableau[i, :n])
            entering = int(np.argmax(row))
            if row[entering] <= _PIV_EPS:
                keep[i] = False
                continue
            piv = tableau[i, entering]
            tableau[i] /= piv
            factors = tableau[:, entering].copy()
            factors[i] = 0.0
            tableau -= np.outer(factors, tableau[i])
            basis[i] = entering
    if not keep.all():
        tableau = tableau[keep]
        basis = [bv for bv, k in zip(basis, keep) if k]

    # Phase 2 over the original columns only.
    tableau2 = np.hstack([tableau[:, :n], tableau[:, -1:]])
    obj_row = np.concatenate([c, [0.0]])
    for i, bv in enumerate(basis):
        if abs(obj_row[bv]) > 0.0:
            obj_row -= obj_row[bv] * tableau2[i]

    status, iters = _simplex(tableau2, obj_row, basis, n, 2, pivots,
                             max_iterations, iters)
    if status == UNBOUNDED:
        return LpOutcome(UNBOUNDED, iterations=iters,
                         pivots=tuple(pivots) if pivots is not None else None)

    x = np.zeros(n)
    for i, bv in enumerate(basis):
        x[bv] = tableau2[i, -1]
    return LpOutcome(OPTIMAL, solution=x, objective=float(-obj_row[-1]),
                     iterations=iters,
                     pivots=tuple(pivots) if pivots is not None else None)


@dataclass(frozen=True)
class StandardFormLp:
    """A standard-form LP plus the bookkeeping to undo the conversion."""

    problem: LpProblem
    n_original: int
    n_slacks: int
    pos_index: np.ndarray
    neg_index: np.ndarray

    def original_solution(self, x_std) -> np.ndarray:
        x_std = as_vector(x_std, self.problem.n_vars)
        x = x_std[self.pos_index].copy()
        has_neg = self.neg_index >= 0
        x[has_neg] -= x_std[self.neg_index[has_neg]]
        return x


def to_standard_form(cost, eq_matrix=None, eq_rhs=None, ineq_matrix=None,
                     ineq_rhs=None, nonneg=None) -> StandardFormLp:
    """Convert ``min c.x  s.t.  E x = f, G x <= h`` to standard form.

    ``nonneg[i]`` marks variable i as sign-constrained; free variables are
    split ``x = x+ - x-``. Each inequality row gains a nonnegative slack.
    The returned wrapper maps standard-form solutions back to the original
    variables.
    """
    c = as_vector(cost)
    n = c.shape[0]
    if nonneg is None:
        nonneg = np.ones(n, dtype=bool)
    else:
        nonneg = np.asarray(nonneg, dtype=bool)
        if nonneg.shape != (n,):
            raise DimensionError("nonneg flags must match the cost dimension")

    blocks, rhs_parts = [], []
    if eq_matrix is not None:
        eqa = as_matrix(eq_matrix, cols=n)
        blocks.append(eqa)
        rhs_parts.append(as_vector(eq_rhs, eqa.shape[0]))
    n_eq = blocks[0].shape[0] if blocks else 0
    if ineq_matrix is not None:
        ga = as_matrix(ineq_matrix, cols=n)
        blocks.append(ga)
        rhs_parts.append(as_vector(ineq_rhs, ga.shape[0]))
    if not blocks:
        raise DimensionError("need at least one constraint row")

    big = np.vstack(blocks)
    rhs = np.concatenate(rhs_parts)
    n_slacks = big.shape[0] - n_eq

    free = np.flatnonzero(~nonneg)
    pos_index = np.arange(n)
    neg_index = np.full(n, -1, dtype=int)
    neg_index[free] = n + np.arange(free.size)

    cols = [big, -big[:, free]]
    cost_parts = [c, -c[free]]
    if n_slacks:
        slack_block = np.zeros((big.shape[0], n_slacks))
        slack_block[n_eq:, :] = np.eye(n_slacks)
        cols.append(slack_block)
        cost_parts.append(np.zeros(n_slacks))
    problem = LpProblem(np.concatenate(cost_parts), np.hstack(cols), rhs)
    return StandardFormLp(problem, n, n_slacks, pos_index, neg_index)
