"""Dense linear-algebra kernels: pivoted solves, affine rank, hyperplane fits.

Vectors and matrices are plain float ``numpy`` arrays; the helpers here
validate shape and finiteness at module boundaries.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateError, DimensionError, SingularError

# Global geometric tolerance (applied relative to a scale where one exists).
GEOM_EPS = 1e-9
# Pivot threshold after row scaling.
PIVOT_EPS = 1e-12


def as_vector(x, dim=None) -> np.ndarray:
    """Validate and return ``x`` as a finite 1-D float array."""
    v = np.asarray(x, dtype=float)
    if v.ndim != 1:
        raise DimensionError(f"expected a vector, got array of ndim {v.ndim}")
    if dim is not None and v.shape[0] != dim:
        raise DimensionError(f"expected dimension {dim}, got {v.shape[0]}")
    if not np.all(np.isfinite(v)):
        raise ValueError("vector entries must be finite")
    return v


def as_matrix(a, rows=None, cols=None) -> np.ndarray:
    """Validate and return ``a`` as a finite 2-D float array."""
    m = np.asarray(a, dtype=float)
    if m.ndim != 2:
        raise DimensionError(f"expected a matrix, got array of ndim {m.ndim}")
    if rows is not None and m.shape[0] != rows:
        raise DimensionError(f"expected {rows} rows, got {m.shape[0]}")
    if cols is not None and m.shape[1] != cols:
        raise DimensionError(f"expected {cols} columns, got {m.shape[1]}")
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix entries must be finite")
    return m


@dataclass(frozen=True)
class Hyperplane:
    """Half-space boundary ``normal . x <= offset`` with a unit normal.

    Normals are stored normalized so that equal half-spaces compare
    coefficient-wise.
    """

    normal: np.ndarray
    offset: float

    def __post_init__(self):
        normal = as_vector(self.normal)
        object.__setattr__(self, "normal", normal)
        object.__setattr__(self, "offset", float(self.offset))
        if abs(np.linalg.norm(normal) - 1.0) > 1e-12:
            raise ValueError("hyperplane normal must be unit length")

    @classmethod
    def from_unnormalized(cls, normal, offset) -> "Hyperplane":
        normal = as_vector(normal)
        scale = np.linalg.norm(normal)
        if scale <= PIVOT_EPS:
            raise DegenerateError("hyperplane normal is numerically zero")
        return cls(normal / scale, float(offset) / scale)

    @property
    def dim(self) -> int:
        return self.normal.shape[0]

    def side(self, x) -> float:
        """Signed distance-like value ``normal . x - offset``."""
        return float(self.normal @ as_vector(x, self.dim) - self.offset)

    def flipped(self) -> "Hyperplane":
        return Hyperplane(-self.normal, -self.offset)


def gaussian_solve(a, rhs) -> np.ndarray:
    """Solve ``a x = rhs`` by Gaussian elimination with partial pivoting.

    Pivots are selected by scaled magnitude; a pivot below 1e-12 after row
    scaling raises :class:`SingularError`.
    """
    a = as_matrix(a)
    n = a.shape[0]
    if a.shape[1] != n:
        raise DimensionError("gaussian_solve requires a square matrix")
    b = as_vector(rhs, n)

    aug = np.hstack([a, b[:, None]])
    scale = np.max(np.abs(a), axis=1)
    if np.any(scale == 0.0):
        raise SingularError("matrix has a zero row")

    for k in range(n):
        rel = np.abs(aug[k:, k]) / scale[k:]
        p = k + int(np.argmax(rel))
        if rel[p - k] < PIVOT_EPS:
            raise SingularError(f"pivot below {PIVOT_EPS:g} in column {k}")
        if p != k:
            aug[[k, p]] = aug[[p, k]]
            scale[[k, p]] = scale[[p, k]]
        factors = aug[k + 1:, k] / aug[k, k]
        aug[k + 1:, k:] -= np.outer(factors, aug[k, k:])

    x = np.empty(n)
    for k in range(n - 1, -1, -1):
        x[k] = (aug[k, -1] - aug[k, k + 1:n] @ x[k + 1:]) / aug[k, k]
    return x


def _rref(mat, tol):
    """Reduced row echelon form with partial pivoting; returns (rref, pivot cols)."""
    a = np.array(mat, dtype=float)
    rows, cols = a.shape
    piv_cols = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        p = r + int(np.argmax(np.abs(a[r:, c])))
        if abs(a[p, c]) <= tol:
            continue
        if p != r:
            a[[r, p]] = a[[p, r]]
        a[r] /= a[r, c]
        others = np.arange(rows) != r
        a[others] -= np.outer(a[others, c], a[r])
        piv_cols.append(c)
        r += 1
    return a, piv_cols


def affine_rank(points) -> int:
    """Rank of ``{p_i - p_0}``, i.e. the dimension of the affine hull."""
    pts = as_matrix(np.atleast_2d(np.asarray(points, dtype=float)))
    if pts.shape[0] == 1:
        return 0
    diffs = pts[1:] - pts[0]
    scale = max(1.0, float(np.max(np.abs(diffs))))
    _, piv = _rref(diffs, GEOM_EPS * scale)
    return len(piv)


def hyperplane_through(points) -> Hyperplane:
    """Hyperplane through exactly ``n`` points of R^n.

    Orientation is unspecified; callers fix the sign. Raises
    :class:`DegenerateError` when the points span less than n-1 affine
    dimensions.
    """
    pts = as_matrix(np.atleast_2d(np.asarray(points, dtype=float)))
    n = pts.shape[1]
    if pts.shape[0] != n:
        raise DimensionError(f"need exactly {n} points in R^{n}, got {pts.shape[0]}")
    if n == 1:
        return Hyperplane(np.array([1.0]), float(pts[0, 0]))

    diffs = pts[1:] - pts[0]
    scale = max(1.0, float(np.max(np.abs(diffs))))
    rref, piv = _rref(diffs, GEOM_EPS * scale)
    free = [c for c in range(n) if c not in piv]
    if len(free) != 1:
        raise DegenerateError("points are affinely degenerate for a hyperplane fit")

    normal = np.zeros(n)
    normal[free[0]] = 1.0
    for row, pc in enumerate(piv):
        normal[pc] = -rref[row, free[0]]
    normal /= np.linalg.norm(normal)
    return Hyperplane(normal, float(normal @ pts[0]))
