"""Independent oracles used by the tests.

Each oracle takes a deliberately different route from the code it checks:
basis enumeration instead of simplex pivoting, lattice search instead of the
sort-and-threshold projection, bisection on the KKT threshold instead of
sorting, and dense grid scans for small membership questions.
"""

import itertools
import math

import numpy as np


def lp_oracle_min(cost, eq_matrix, eq_rhs, tol=1e-9):
    """Optimal value of ``min c.x : A x = b, x >= 0`` by basis enumeration.

    Enumerates every square column subset, keeps nonnegative basic
    solutions, and returns the minimum objective (None if no feasible basic
    solution exists).
    """
    a = np.asarray(eq_matrix, dtype=float)
    b = np.asarray(eq_rhs, dtype=float)
    c = np.asarray(cost, dtype=float)
    m, n = a.shape
    best = None
    for cols in itertools.combinations(range(n), m):
        sub = a[:, cols]
        try:
            xb = np.linalg.solve(sub, b)
        except np.linalg.LinAlgError:
            continue
        if np.abs(sub @ xb - b).max() > 1e-7:
            continue  # numerically singular basis
        if xb.min() < -tol:
            continue
        val = float(c[list(cols)] @ xb)
        if best is None or val < best - 1e-12:
            best = val
    return best


def simplex_lattice(m, steps, lower, upper):
    """Lattice points of the simplex with ``alpha_i = k_i/steps`` and
    per-coordinate integer bounds ``lower <= k <= upper``."""
    out = []

    def rec(prefix, remaining, idx):
        if idx == m - 1:
            if lower[idx] <= remaining <= upper[idx]:
                out.append(prefix + [remaining])
            return
        lo = max(lower[idx], remaining - int(upper[idx + 1:].sum()))
        hi = min(upper[idx], remaining)
        for k in range(lo, hi + 1):
            rec(prefix + [k], remaining - k, idx + 1)

    rec([], steps, 0)
    return np.array(out, dtype=float) / steps


def grid_project(y, spacing=1e-3):
    """Exact minimizer of ``|alpha - y|^2`` over the simplex mesh of the given
    spacing.

    The mesh optimum of this separable convex objective under the single
    budget constraint ``sum k_i = K`` is found by greedy marginal allocation
    (allocate one mesh unit at a time to the coordinate with the smallest
    cost increase), which is exact for convex per-coordinate costs.
    ``grid_project_bruteforce`` cross-checks this on small cases.
    """
    import heapq

    y = np.asarray(y, dtype=float)
    m = y.shape[0]
    steps = int(round(1.0 / spacing))

    def marginal(i, k):
        # ((k+1)/K - y_i)^2 - (k/K - y_i)^2
        return ((2 * k + 1) / steps - 2.0 * y[i]) / steps

    k = np.zeros(m, dtype=int)
    heap = [(marginal(i, 0), i) for i in range(m)]
    heapq.heapify(heap)
    for _ in range(steps):
        _, i = heapq.heappop(heap)
        k[i] += 1
        heapq.heappush(heap, (marginal(i, k[i]), i))
    return k / steps


def grid_project_bruteforce(y, steps):
    """Reference mesh minimizer by full lattice enumeration (tiny m only)."""
    y = np.asarray(y, dtype=float)
    m = y.shape[0]
    pts = simplex_lattice(m, steps, np.zeros(m, dtype=int),
                          np.full(m, steps, dtype=int))
    d2 = ((pts - y) ** 2).sum(axis=1)
    return pts[int(np.argmin(d2))]


def kkt_project(y, tol=1e-12):
    """Projection onto the simplex via bisection on the KKT threshold."""
    y = np.asarray(y, dtype=float)
    lo, hi = y.min() - 1.0, y.max()
    for _ in range(200):
        tau = 0.5 * (lo + hi)
        s = np.maximum(y - tau, 0.0).sum()
        if s > 1.0:
            lo = tau
        else:
            hi = tau
        if hi - lo < tol:
            break
    tau = 0.5 * (lo + hi)
    alpha = np.maximum(y - tau, 0.0)
    return alpha / alpha.sum()


def min_grid_distance(points, target, steps=60):
    """Smallest max-norm distance from ``target`` to any convex combination
    on a dense simplex lattice over ``points``."""
    pts = np.asarray(points, dtype=float)
    m = pts.shape[0]
    lattice = simplex_lattice(m, steps, np.zeros(m, dtype=int),
                              np.full(m, steps, dtype=int))
    combos = lattice @ pts
    return float(np.abs(combos - np.asarray(target)).max(axis=1).min())


def central_difference(fun, x, h=1e-6):
    """Central finite-difference gradient of a scalar function."""
    x = np.asarray(x, dtype=float)
    g = np.empty_like(x)
    for i in range(x.size):
        e = np.zeros_like(x)
        e[i] = h
        g[i] = (fun(x + e) - fun(x - e)) / (2.0 * h)
    return g
