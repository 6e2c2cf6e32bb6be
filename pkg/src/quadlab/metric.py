"""Exact graph metrics on quadrangulations.

Everything is BFS-based and integer-exact.  Distances fit comfortably in
int32 (diameters grow like n^(1/4)).
"""

import numpy as np

from . import _kernels
from .errors import IndexOutOfRange, InvariantViolation, SizeTooLarge

EXACT_DIAMETER_LIMIT = 20_000


def bfs_distances(q, v):
    """Exact distances from vertex v; guaranteed all-reachable (connected)."""
    indptr, heads, _ = q.adjacency
    if not 0 <= v < q.vertex_count:
        raise IndexOutOfRange(f"vertex {v} outside [0, {q.vertex_count})")
    dist = _kernels.bfs_distances(indptr, heads, int(v))
    if dist.min() < 0:
        raise InvariantViolation("graph not connected")
    return dist


def radius_and_profile(q):
    """(max distance from the pointed vertex, counts per distance)."""
    dist = bfs_distances(q, q.pointed_vertex)
    profile = np.bincount(dist)
    return int(dist.max()), profile


def diameter(q, mode="exact", sweeps=4):
    """Maximum pairwise distance (exact) or a realized lower bound.

    exact runs one BFS per vertex and is guarded at 2e4 vertices;
    double-sweep iterates farthest-point BFS and returns a distance
    actually attained by some pair.
    """
    indptr, heads, _ = q.adjacency
    if mode == "exact":
        if q.vertex_count > EXACT_DIAMETER_LIMIT:
            raise SizeTooLarge(
                f"exact diameter guarded at {EXACT_DIAMETER_LIMIT} vertices")
        best = 0
        for v in range(q.vertex_count):
            best = max(best, int(_kernels.bfs_distances(indptr, heads, v).max()))
        return best
    if mode == "double-sweep":
        cur = int(q.pointed_vertex)
        best = 0
        for _ in range(sweeps):
            dist = _kernels.bfs_distances(indptr, heads, cur)
            far = int(np.argmax(dist))
            if dist[far] <= best:
                break
            best = int(dist[far])
            cur = far
        return best
    raise ValueError(f"unknown mode {mode!r}")


def set_diameter(q, vertices, mode="exact", sweeps=8):
    """Ambient diameter of a vertex subset: max d(x, y) over x, y in the set.

    exact runs one BFS per member; double-sweep gives a realized lower bound.
    """
    vertices = np.asarray(vertices, dtype=np.int64)
    if vertices.size <= 1:
        return 0
    indptr, heads, _ = q.adjacency
    if mode == "exact":
        best = 0
        for v in vertices:
            dist = _kernels.bfs_distances(indptr, heads, int(v))
            best = max(best, int(dist[vertices].max()))
        return best
    if mode == "double-sweep":
        cur = int(vertices[0])
        best = 0
        for _ in range(sweeps):
            dist = _kernels.bfs_distances(indptr, heads, cur)
            far = int(vertices[np.argmax(dist[vertices])])
            d = int(dist[far])
            if d <= best:
                break
            best = d
            cur = far
        return best
    raise ValueError(f"unknown mode {mode!r}")


class RangeMin:
    """Static range-minimum structure (sparse table), O(1) per query."""

    def __init__(self, values):
        values = np.asarray(values)
        levels = [values]
        span = 1
        while 2 * span <= values.shape[0]:
            prev = levels[-1]
            levels.append(np.minimum(prev[:-span], prev[span:]))
            span *= 2
        self._levels = levels

    def query(self, lo, hi):
        """Vectorized minimum over the inclusive index ranges [lo, hi]."""
        lo = np.asarray(lo, dtype=np.int64)
        hi = np.asarray(hi, dtype=np.int64)
        if np.any(lo > hi):
            raise IndexOutOfRange("range minimum needs lo <= hi")
        width = hi - lo + 1
        k = np.floor(np.log2(width)).astype(np.int64)
        out = np.empty(lo.shape, dtype=self._levels[0].dtype)
        for kk in np.unique(k):
            mask = k == kk
            tab = self._levels[int(kk)]
            span = 1 << int(kk)
            out[mask] = np.minimum(tab[lo[mask]], tab[hi[mask] - span + 1])
        return out


def check_contour_bound(pair, q, i, j, tv_to_qv=None):
    """One instance of the contour distance bound.

    lhs is the exact distance between the vertices visited at contour times
    i < j; rhs = L_i + L_j - 2 min_{i<=k<=j} L_k + 2.  Returns
    (lhs, rhs, lhs <= rhs).
    """
    two_n = 2 * pair.n
    if not (0 <= i < j <= two_n):
        raise IndexOutOfRange(f"need 0 <= i < j <= {two_n}")
    wlt = pair.reconstruct()
    if tv_to_qv is None:
        from .schaeffer import vertex_correspondence
        tv_to_qv, _ = vertex_correspondence(wlt, q)
    vat = wlt.tree.vertex_at_time
    src = int(tv_to_qv[vat[i]])
    dst = int(tv_to_qv[vat[j]])
    lhs = int(bfs_distances(q, src)[dst])
    rhs = int(pair.L[i] + pair.L[j] - 2 * int(pair.L[i:j + 1].min()) + 2)
    return lhs, rhs, lhs <= rhs


def contour_bound_report(pair, q, index_pairs, tv_to_qv=None):
    """Bulk form of check_contour_bound: rows (i, j, lhs, rhs).

    Groups the queries by source vertex so each distinct source costs one
    BFS, and answers the range minima through a sparse table.
    """
    index_pairs = np.asarray(index_pairs, dtype=np.int64)
    if index_pairs.ndim != 2 or index_pairs.shape[1] != 2:
        raise IndexOutOfRange("index_pairs must be (k, 2)")
    i_arr, j_arr = index_pairs[:, 0], index_pairs[:, 1]
    two_n = 2 * pair.n
    if np.any(i_arr < 0) or np.any(j_arr > two_n) or np.any(i_arr >= j_arr):
        raise IndexOutOfRange(f"need 0 <= i < j <= {two_n}")

    wlt = pair.reconstruct()
    if tv_to_qv is None:
        from .schaeffer import vertex_correspondence
        tv_to_qv, _ = vertex_correspondence(wlt, q)
    vat = wlt.tree.vertex_at_time
    src = tv_to_qv[vat[i_arr]]
    dst = tv_to_qv[vat[j_arr]]

    rmq = RangeMin(pair.L)
    mins = rmq.query(i_arr, j_arr)
    rhs = pair.L[i_arr].astype(np.int64) + pair.L[j_arr] - 2 * mins.astype(np.int64) + 2

    lhs = np.empty(index_pairs.shape[0], dtype=np.int64)
    indptr, heads, _ = q.adjacency
    order = np.argsort(src, kind="stable")
    k = 0
    while k < order.shape[0]:
        k2 = k
        v = src[order[k]]
        while k2 < order.shape[0] and src[order[k2]] == v:
            k2 += 1
        dist = _kernels.bfs_distances(indptr, heads, int(v))
        sel = order[k:k2]
        lhs[sel] = dist[dst[sel]]
        k = k2
    return np.column_stack((i_arr, j_arr, lhs, rhs))


class FiniteMetricSpace:
    """Finite point set with exact distances, matrix- or BFS-backed."""

    def __init__(self, size, matrix=None, quad=None, scale=1.0):
        self.size = int(size)
        self._matrix = matrix
        self._quad = quad
        self.scale = float(scale)
        self._cache = {}

    @classmethod
    def from_matrix(cls, matrix, scale=1.0, check=True, rng=None):
        matrix = np.asarray(matrix, dtype=np.float64)
        if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
            raise InvariantViolation("distance matrix must be square")
        if check:
            if np.any(np.diag(matrix) != 0):
                raise InvariantViolation("nonzero diagonal")
            if np.any(matrix < 0) or not np.allclose(matrix, matrix.T):
                raise InvariantViolation("matrix not symmetric nonnegative")
            n = matrix.shape[0]
            rng = rng or np.random.default_rng(0)
            trials = min(200, n ** 3)
            for _ in range(trials):
                a, b, c = rng.integers(0, n, size=3)
                if matrix[a, c] > matrix[a, b] + matrix[b, c] + 1e-9:
                    raise InvariantViolation("triangle inequality fails")
        return cls(matrix.shape[0], matrix=matrix)

    @classmethod
    def from_quadrangulation(cls, q, scale=1.0):
        return cls(q.vertex_count, quad=q, scale=scale)

    def _row(self, i):
        if self._matrix is not None:
            return self._matrix[i]
        rows = self._cache.setdefault("rows", {})
        if i not in rows:
            rows[i] = bfs_distances(self._quad, i).astype(np.float64)
        return rows[i]

    def distance(self, i, j):
        return float(self._row(int(i))[int(j)]) * self.scale

    def matrix(self):
        """Full scaled matrix; materializes BFS-backed spaces (guarded)."""
        if self._matrix is not None:
            return self._matrix * self.scale
        if self.size > EXACT_DIAMETER_LIMIT:
            raise SizeTooLarge("refusing to materialize a huge matrix")
        out = np.empty((self.size, self.size), dtype=np.float64)
        for i in range(self.size):
            out[i] = self._row(i)
        return out * self.scale

    def rescaled(self, factor):
        return FiniteMetricSpace(self.size, matrix=self._matrix,
                                 quad=self._quad, scale=self.scale * factor)

    def diameter(self):
        return float(self.matrix().max())
