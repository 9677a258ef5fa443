"""Constrained minimization over a hull in both representations.

The vertex route reparameterizes the problem on the standard simplex
(``x = sum_i alpha_i v_i``) and runs projected gradient or Frank-Wolfe; the
half-space route runs a log-barrier method over ``A x <= b``. Extra
inequality constraints ``g_j(x) >= 0`` are handled by a quadratic penalty
whose weight is escalated over a few outer rounds.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import DimensionError, EmptyInterior, InfeasibleStart
from .linalg import as_vector
from .lp import OPTIMAL, UNBOUNDED, lp_solve, to_standard_form
from .polytope import HRep, VRep
from .queries import Weights

# Central-difference step used when an objective has no analytic gradient.
_FD_STEP = 1e-6
_ARMIJO_C = 1e-4
_PENALTY_START = 10.0
_PENALTY_GROWTH = 10.0
_PENALTY_ROUNDS = 3


@dataclass(frozen=True)
class Objective:
    """Scalar objective with an optional analytic gradient."""

    dim: int
    eval: Callable[[np.ndarray], float]
    grad: Callable[[np.ndarray], np.ndarray] | None = None


@dataclass(frozen=True)
class Constraint:
    """Inequality constraint, feasible iff ``eval(x) >= 0``."""

    dim: int
    eval: Callable[[np.ndarray], float]


@dataclass(frozen=True)
class SolveOptions:
    """Solver budgets and tolerances.

    ``max_fun_evals=None`` resolves to 20000 on the vertex route and 5000 on
    the half-space route.
    """

    max_fun_evals: int | None = None
    max_iters: int = 500
    step_tol: float = 1e-6
    constraint_tol: float = 1e-6
    objective_tol: float = 1e-6
    fd_step_max: float = 0.1
    fd_step_min: float = 1e-8

    def __post_init__(self):
        for name in ("max_iters", "step_tol", "constraint_tol",
                     "objective_tol", "fd_step_max", "fd_step_min"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")
        if self.fd_step_min >= self.fd_step_max:
            raise ValueError("fd_step_min must be below fd_step_max")


@dataclass(frozen=True)
class SolveResult:
    minimizer: np.ndarray
    objective: float
    iterations: int
    fun_evals: int
    elapsed: float
    converged: bool
    weights: Weights | None = None
    trace: tuple = field(default=())


class _Budget:
    """Counts function evaluations against a hard cap."""

    def __init__(self, cap):
        self.cap = cap
        self.used = 0

    def spend(self, k=1) -> bool:
        self.used += k
        return self.used <= self.cap

    @property
    def exhausted(self) -> bool:
        return self.used > self.cap


def _fd_gradient(fun, x, budget, opts: SolveOptions) -> np.ndarray:
    h = min(max(_FD_STEP, opts.fd_step_min), opts.fd_step_max)
    g = np.empty_like(x)
    for i in range(x.shape[0]):
        e = np.zeros_like(x)
        e[i] = h
        budget.spend(2)
        g[i] = (fun(x + e) - fun(x - e)) / (2.0 * h)
    return g


def project_to_simplex(y) -> Weights:
    """Euclidean projection onto ``{alpha : alpha >= 0, sum(alpha) = 1}``.

    Sort-and-threshold closed form; the output is renormalized so the
    simplex invariants hold exactly.
    """
    y = as_vector(y)
    m = y.shape[0]
    u = np.sort(y)[::-1]
    css = np.cumsum(u)
    ks = np.arange(1, m + 1)
    cond = u + (1.0 - css) / ks > 0.0
    rho = int(np.max(np.flatnonzero(cond)))
    lam = (1.0 - css[rho]) / (rho + 1.0)
    alpha = np.maximum(y + lam, 0.0)
    alpha /= alpha.sum()
    return Weights(alpha)


def compose_objective(f: Objective, v: VRep) -> Objective:
    """Pull ``f`` back through the hull map ``alpha -> sum_i alpha_i v_i``."""
    if f.dim != v.dim:
        raise DimensionError("objective dimension must match the point set")
    pts = v.points

    def fun(alpha):
        return f.eval(pts.T @ alpha)

    grad = None
    if f.grad is not None:
        def grad(alpha):  # noqa: E731 - chain rule through the linear hull map
            return pts @ f.grad(pts.T @ alpha)

    return Objective(dim=v.n_points, eval=fun, grad=grad)


def _penalized(f: Objective, cons, rho, budget, opts):
    """Objective + quadratic penalty max(0, -g)^2, with gradient closure."""
    def fun(x):
        val = f.eval(x)
        for c in cons:
            viol = -c.eval(x)
            if viol > 0.0:
                val += rho * viol * viol
        return val

    def grad(x):
        if f.grad is not None:
            g = np.array(f.grad(x), dtype=float)
        else:
            g = _fd_gradient(f.eval, x, budget, opts)
        for c in cons:
            viol = -c.eval(x)
            if viol > 0.0:
                g += rho * 2.0 * viol * -_fd_gradient(c.eval, x, budget, opts)
        return g

    return fun, grad


def _max_violation(cons, x) -> float:
    if not cons:
        return 0.0
    return max(0.0, max(-c.eval(x) for c in cons))


def _proj_grad(fun, grad, alpha, opts, budget, trace, max_iters):
    f_cur = fun(alpha)
    budget.spend()
    best_x, best_f = alpha, f_cur
    trace.append(best_f)
    step = 1.0
    iters = 0
    converged = False
    for _ in range(max_iters):
        iters += 1
        g = grad(alpha)
        accepted = False
        while step > 1e-18:
            cand = project_to_simplex(alpha - step * g).alpha
            if not budget.spend():
                break
            f_new = fun(cand)
            if f_new <= f_cur + _ARMIJO_C * float(g @ (cand - alpha)):
                accepted = True
                break
            step *= 0.5
        if budget.exhausted:
            break
        if not accepted:
            converged = True
            break
        move = float(np.max(np.abs(cand - alpha)))
        drop = f_cur - f_new
        alpha, f_cur = cand, f_new
        if f_cur < best_f:
            best_x, best_f = alpha, f_cur
        trace.append(best_f)
        step = min(step * 2.0, 1e12)
        if move <= opts.step_tol or drop <= opts.objective_tol:
            converged = True
            break
    return best_x, best_f, iters, converged


def _frank_wolfe(fun, grad, alpha, opts, budget, trace, max_iters):
    f_cur = fun(alpha)
    budget.spend()
    best_x, best_f = alpha, f_cur
    trace.append(best_f)
    iters = 0
    converged = False
    for t in range(max_iters):
        iters += 1
        g = grad(alpha)
        j = int(np.argmin(g))  # linear minimization over the simplex vertices
        vertex = np.zeros_like(alpha)
        vertex[j] = 1.0
        gap = float(g @ (alpha - vertex))
        if gap <= opts.objective_tol:
            converged = True
            break
        gamma = 2.0 / (t + 2.0)
        cand = (1.0 - gamma) * alpha + gamma * vertex
        if not budget.spend():
            break
        f_new = fun(cand)
        move = float(np.max(np.abs(cand - alpha)))
        alpha, f_cur = cand, f_new
        if f_cur < best_f:
            best_x, best_f = alpha, f_cur
        trace.append(best_f)
        if move <= opts.step_tol:
            converged = True
            break
    return best_x, best_f, iters, converged


def solve_vrep(f: Objective, cons, v: VRep, opts: SolveOptions | None = None,
               method: str = "projgrad") -> SolveResult:
    """Minimize ``f`` over ``conv(V)`` via the simplex reparameterization.

    ``method`` is ``"projgrad"`` (projected gradient with Armijo
    backtracking) or ``"frankwolfe"`` (step 2/(t+2), vertex-scan linear
    oracle). Starts from the barycenter. On budget exhaustion the best
    iterate so far is returned with ``converged=False``.
    """
    if opts is None:
        opts = SolveOptions()
    if f.dim != v.dim:
        raise DimensionError("objective dimension must match the point set")
    if v.n_points < 2:
        raise ValueError("need at least two points to optimize over")
    if method not in ("projgrad", "frankwolfe"):
        raise ValueError(f"unknown method {method!r}")
    cons = list(cons or [])

    t0 = time.perf_counter()
    budget = _Budget(opts.max_fun_evals if opts.max_fun_evals is not None else 20000)
    ft = compose_objective(f, v)
    cons_t = [Constraint(v.n_points, (lambda c: lambda a: c.eval(v.points.T @ a))(c))
              for c in cons]

    alpha = np.full(v.n_points, 1.0 / v.n_points)
    trace: list[float] = []
    inner = _proj_grad if method == "projgrad" else _frank_wolfe
    rho = _PENALTY_START
    iters_total = 0
    converged = False
    rounds = _PENALTY_ROUNDS if cons_t else 1
    for _ in range(rounds):
        fun, grad = _penalized(ft, cons_t, rho, budget, opts)
        alpha, f_val, iters, converged = inner(fun, grad, alpha, opts, budget,
                                               trace, opts.max_iters)
        iters_total += iters
        if _max_violation(cons_t, alpha) <= opts.constraint_tol:
            break
        rho *= _PENALTY_GROWTH

    if budget.exhausted:
        converged = False
    weights = Weights(alpha)
    x = v.points.T @ alpha
    return SolveResult(minimizer=x, objective=float(ft.eval(alpha)),
                       iterations=iters_total, fun_evals=budget.used,
                       elapsed=time.perf_counter() - t0, converged=converged,
                       weights=weights, trace=tuple(trace))


def solve_hrep(f: Objective, cons, h: HRep, start,
               opts: SolveOptions | None = None) -> SolveResult:
    """Minimize ``f`` over ``{x : A x <= b}`` by a log-barrier method.

    The barrier weight follows the schedule 1 -> 1e-6 (factor 0.1 per outer
    round); inner iterations are gradient descent with Armijo backtracking
    that rejects steps leaving the domain. ``start`` must be strictly
    interior.
    """
    if opts is None:
        opts = SolveOptions()
    if f.dim != h.dim:
        raise DimensionError("objective dimension must match the half-spaces")
    cons = list(cons or [])
    start = as_vector(start, h.dim)
    a_mat, b_vec = h.normals, h.offsets
    slacks = b_vec - a_mat @ start
    if np.min(slacks) <= 1e-9:
        raise InfeasibleStart("start point is not strictly inside the region")

    t0 = time.perf_counter()
    budget = _Budget(opts.max_fun_evals if opts.max_fun_evals is not None else 5000)
    mus = [10.0 ** (-k) for k in range(7)]  # 1 ... 1e-6
    trace: list[float] = []
    x = start.copy()
    iters_total = 0
    rho = _PENALTY_START
    rounds = _PENALTY_ROUNDS if cons else 1
    best_x = x
    converged = False

    for _ in range(rounds):
        fun0, grad0 = _penalized(f, cons, rho, budget, opts)

        def barrier_val(xx, mu, fun0=fun0):
            s = b_vec - a_mat @ xx
            if np.min(s) <= 0.0:
                return np.inf
            return fun0(xx) - mu * float(np.log(s).sum())

        def barrier_grad(xx, mu, grad0=grad0):
            s = b_vec - a_mat @ xx
            return grad0(xx) + mu * (a_mat.T @ (1.0 / s))

        def descent_dir(xx, g, mu):
            # Scale by the (always available) barrier curvature. Plain
            # gradient steps crawl once iterates approach a face, while the
            # barrier Hessian mu * A' diag(1/s^2) A captures exactly the
            # geometry that causes it; the objective part stays first-order.
            s = b_vec - a_mat @ xx
            hess = mu * (a_mat.T * (1.0 / (s * s))) @ a_mat
            hess[np.diag_indices_from(hess)] += 1e-10 * (1.0 + np.trace(hess) / hess.shape[0])
            try:
                return -np.linalg.solve(hess, g)
            except np.linalg.LinAlgError:
                return -g

        per_round = max(1, opts.max_iters // len(mus))
        converged = True
        for mu in mus:
            phi = barrier_val(x, mu)
            budget.spend()
            step = 1.0
            inner_done = False
            for _ in range(per_round):
                iters_total += 1
                g = barrier_grad(x, mu)
                if float(np.linalg.norm(g)) <= 1e-14:
                    inner_done = True
                    break
                d = descent_dir(x, g, mu)
                slope = float(g @ d)
                if slope >= 0.0:
                    d, slope = -g, -float(g @ g)
                step = min(1.0, step * 4.0)
                accepted = False
                while step > 1e-18:
                    cand = x + step * d
                    if not budget.spend():
                        break
                    phi_new = barrier_val(cand, mu)
                    if phi_new <= phi + _ARMIJO_C * step * slope:
                        accepted = True
                        break
                    step *= 0.5
                if budget.exhausted or not accepted:
                    inner_done = not accepted
                    break
                move = float(np.max(np.abs(cand - x)))
                drop = phi - phi_new
                x, phi = cand, phi_new
                trace.append(f.eval(x))
                budget.spend()
                if move <= opts.step_tol or drop <= opts.objective_tol:
                    inner_done = True
                    break
            if budget.exhausted:
                converged = False
                break
            if not inner_done:
                converged = False
        best_x = x
        if _max_violation(cons, x) <= opts.constraint_tol:
            break
        rho *= _PENALTY_GROWTH

    if budget.exhausted:
        converged = False
    obj = float(f.eval(best_x))
    # Track the best objective seen along the path, not the raw barrier value.
    best_trace: list[float] = []
    running = math.inf
    for val in trace or [obj]:
        running = min(running, val)
        best_trace.append(running)
    return SolveResult(minimizer=best_x, objective=obj, iterations=iters_total,
                       fun_evals=budget.used, elapsed=time.perf_counter() - t0,
                       converged=converged, trace=tuple(best_trace))


def chebyshev_center(h: HRep) -> np.ndarray:
    """Center of the largest inscribed ball, via the LP ``max r`` s.t.
    ``normal_i . x + r <= offset_i`` and ``r >= 0``.

    Requires a bounded, full-dimensional region; raises
    :class:`EmptyInterior` when the optimal radius is <= 1e-9.
    """
    n = h.dim
    ineq = np.hstack([h.normals, np.ones((h.n_halfspaces, 1))])
    cost = np.zeros(n + 1)
    cost[-1] = -1.0  # maximize r
    nonneg = np.zeros(n + 1, dtype=bool)
    nonneg[-1] = True
    sf = to_standard_form(cost, ineq_matrix=ineq, ineq_rhs=h.offsets, nonneg=nonneg)
    outcome = lp_solve(sf.problem)
    if outcome.status == UNBOUNDED:
        raise ValueError("half-space region is unbounded")
    if outcome.status != OPTIMAL:
        raise EmptyInterior("no feasible center found")
    sol = sf.original_solution(outcome.solution)
    center, radius = sol[:n], float(sol[n])
    if radius <= 1e-9:
        raise EmptyInterior(f"inscribed radius {radius:.2e} is not positive")
    return center
