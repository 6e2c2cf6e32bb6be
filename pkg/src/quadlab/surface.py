"""Discretized metric surface glued from per-face emptied-cube charts.

Each face contributes five unit squares (four side walls and a top; the
bottom of the cube is removed), gridded at spacing 1/m with axis and
diagonal mesh edges.  The four bottom rim segments of a chart run along the
face's half-edges; gluing identifies rim node i/m of a half-edge with rim
node 1 - i/m of its opposite.  Every mesh edge is a straight segment inside
one chart, so mesh shortest paths are genuine surface path lengths: they
upper-bound the quotient metric everywhere and equal the graph distance on
vertex pairs (rim edge-paths realize it, and no surface path is shorter).
"""

import numpy as np
from scipy.sparse import coo_matrix, csr_matrix
from scipy.sparse.csgraph import connected_components, dijkstra

from . import _kernels
from .errors import InvariantViolation, ResolutionZero

SQ_WALL0, SQ_WALL1, SQ_WALL2, SQ_WALL3, SQ_TOP = range(5)

# rim segment k of the unit square, from corner k to corner k+1 (ccw)
_SEG_START = np.array([[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]])
_SEG_DIR = np.array([[1.0, 0.0], [0.0, 1.0], [-1.0, 0.0], [0.0, -1.0]])


class MeshedSurface:
    """Glued mesh of a quadrangulation at resolution m."""

    def __init__(self, q, m, node_count, graph, node_rep, node_xyz,
                 vertex_nodes, axis_edge_count):
        self.q = q
        self.m = m
        self.node_count = node_count
        self.graph = graph                  # scipy CSR, symmetric, weighted
        self.node_rep = node_rep            # (N, 4): face, square, i, j
        self.node_xyz = node_xyz            # (N, 3) representative coordinates
        self.vertex_nodes = vertex_nodes    # map vertex -> mesh node
        self.axis_edge_count = axis_edge_count

    def distances_from(self, node):
        return dijkstra(self.graph, directed=False, indices=int(node))

    def distances_from_many(self, nodes):
        return dijkstra(self.graph, directed=False, indices=np.asarray(nodes))


def _raw_id(f, sq, i, j, m):
    return ((np.asarray(f) * 5 + sq) * (m + 1) + j) * (m + 1) + i


def build_mesh(q, m):
    """Build the glued chart mesh; validates the complex is a sphere."""
    m = int(m)
    if m < 1:
        raise ResolutionZero("resolution m must be >= 1")
    n = q.n
    fm = q.faces_matrix()
    side = m + 1
    raw_count = 5 * n * side * side

    ii, jj = np.meshgrid(np.arange(side), np.arange(side), indexing="ij")
    ii = ii.ravel()
    jj = jj.ravel()
    faces = np.arange(n)

    pairs = []

    def glue(a, b):
        pairs.append((a.ravel(), b.ravel()))

    rng_f = faces[:, None]
    line = np.arange(side)[None, :]
    for k in range(4):
        # vertical wall-to-wall seam above corner k+1
        glue(_raw_id(rng_f, k, m, line, m),
             _raw_id(rng_f, (k + 1) % 4, 0, line, m))
    # wall tops onto the top square
    glue(_raw_id(rng_f, SQ_WALL0, line, m, m), _raw_id(rng_f, SQ_TOP, line, 0, m))
    glue(_raw_id(rng_f, SQ_WALL1, line, m, m), _raw_id(rng_f, SQ_TOP, m, line, m))
    glue(_raw_id(rng_f, SQ_WALL2, line, m, m), _raw_id(rng_f, SQ_TOP, m - line, m, m))
    glue(_raw_id(rng_f, SQ_WALL3, line, m, m), _raw_id(rng_f, SQ_TOP, 0, m - line, m))

    # cross-chart rim gluing: c_e(t) ~ c_opposite(e)(1 - t)
    face_of = q.face_of()
    pos_in_face = np.empty(q.map.half_edge_count, dtype=np.int64)
    for k in range(4):
        pos_in_face[fm[:, k]] = k
    h = 2 * np.arange(2 * n)
    h_opp = q.map.opposite[h]
    fa, ka = face_of[h], pos_in_face[h]
    fb, kb = face_of[h_opp], pos_in_face[h_opp]
    glue(_raw_id(fa[:, None], ka[:, None], line, 0, m),
         _raw_id(fb[:, None], kb[:, None], m - line, 0, m))

    rows = np.concatenate([a for a, _ in pairs])
    cols = np.concatenate([b for _, b in pairs])
    ident = coo_matrix((np.ones(rows.shape[0], dtype=np.int8), (rows, cols)),
                       shape=(raw_count, raw_count))
    n_nodes, labels = connected_components(ident, directed=False)

    # node representatives, deterministic: smallest raw id in each class
    _, first_raw = np.unique(labels, return_index=True)
    rep_raw = first_raw
    rep_f, rest = np.divmod(rep_raw, 5 * side * side)
    rep_sq, rest = np.divmod(rest, side * side)
    rep_j, rep_i = np.divmod(rest, side)
    node_rep = np.column_stack((rep_f, rep_sq, rep_i, rep_j)).astype(np.int32)
    node_xyz = _chart_xyz(rep_sq, rep_i, rep_j, m)

    # mesh edges, generated square by square
    e_a, e_b, e_w = [], [], []
    base = (np.arange(5 * n)[:, None] * side * side)

    def add_edges(i0, j0, i1, j1, w):
        a = base + (j0 * side + i0).ravel()[None, :]
        b = base + (j1 * side + i1).ravel()[None, :]
        e_a.append(a.ravel())
        e_b.append(b.ravel())
        e_w.append(np.full(a.size, w))

    gi, gj = np.meshgrid(np.arange(m), np.arange(side), indexing="ij")
    add_edges(gi, gj, gi + 1, gj, 1.0 / m)            # horizontal
    add_edges(gj.T, gi.T, gj.T, gi.T + 1, 1.0 / m)    # vertical
    ci, cj = np.meshgrid(np.arange(m), np.arange(m), indexing="ij")
    add_edges(ci, cj, ci + 1, cj + 1, np.sqrt(2.0) / m)
    add_edges(ci + 1, cj, ci, cj + 1, np.sqrt(2.0) / m)

    ea = labels[np.concatenate(e_a)]
    eb = labels[np.concatenate(e_b)]
    ew = np.concatenate(e_w)
    lo = np.minimum(ea, eb)
    hi = np.maximum(ea, eb)
    axis_mask = ew < 1.2 / m

    key = lo.astype(np.int64) * n_nodes + hi
    order = np.lexsort((ew, key))
    key_sorted = key[order]
    keep = np.empty(order.shape[0], dtype=bool)
    keep[0] = True
    np.not_equal(key_sorted[1:], key_sorted[:-1], out=keep[1:])
    sel = order[keep]
    lo, hi, ew = lo[sel], hi[sel], ew[sel]

    axis_edge_count = int(np.count_nonzero(axis_mask[sel]))
    # Euler check, via node count: every boundary segment is glued to exactly
    # one partner, so the complex has 10nm^2 edges and 5nm^2 cells; the glued
    # complex is a sphere iff the identification produced 5nm^2 + 2 nodes.
    if n_nodes != 5 * n * m * m + 2:
        raise InvariantViolation("glued complex is not a sphere")

    graph = csr_matrix(
        (np.concatenate((ew, ew)),
         (np.concatenate((lo, hi)), np.concatenate((hi, lo)))),
        shape=(n_nodes, n_nodes))

    vertex_nodes = np.empty(q.vertex_count, dtype=np.int64)
    corner_vertex = q.map.vertex_of[fm]        # tail of h_k = corner k
    for k in range(4):
        vertex_nodes[corner_vertex[:, k]] = labels[_raw_id(faces, k, 0, 0, m)]
    # cross-check: every corner of a vertex landed on one glued node
    for k in range(4):
        got = labels[_raw_id(faces, k, 0, 0, m)]
        if not np.array_equal(vertex_nodes[corner_vertex[:, k]], got):
            raise InvariantViolation("vertex corners not glued together")

    return MeshedSurface(q, m, n_nodes, graph, node_rep, node_xyz,
                         vertex_nodes, axis_edge_count)


def _chart_xyz(sq, i, j, m):
    """Representative 3D coordinates inside the unit-cube chart."""
    sq = np.asarray(sq)
    i = np.asarray(i, dtype=np.float64) / m
    j = np.asarray(j, dtype=np.float64) / m
    xyz = np.empty(sq.shape + (3,), dtype=np.float64)
    top = sq == SQ_TOP
    walls = ~top
    xyz[top, 0] = i[top]
    xyz[top, 1] = j[top]
    xyz[top, 2] = 1.0
    k = sq[walls]
    base = _SEG_START[k] + i[walls, None] * _SEG_DIR[k]
    xyz[walls, 0] = base[:, 0]
    xyz[walls, 1] = base[:, 1]
    xyz[walls, 2] = j[walls]
    return xyz


def mesh_distance(s, a, b):
    """Shortest mesh path length between two nodes."""
    return float(s.distances_from(a)[int(b)])


def vertex_distance_matrix(q):
    """Exact graph distances between all vertex pairs (small maps)."""
    indptr, heads, _ = q.adjacency
    v = q.vertex_count
    out = np.empty((v, v), dtype=np.int32)
    for i in range(v):
        out[i] = _kernels.bfs_distances(indptr, heads, i)
    return out


def verify_vertex_isometry(q, s):
    """Max |mesh distance - graph distance| over all vertex pairs."""
    d_mesh = s.distances_from_many(s.vertex_nodes)[:, s.vertex_nodes]
    d_gr = vertex_distance_matrix(q)
    return float(np.abs(d_mesh - d_gr).max())


def verify_density_and_gh(q, s, block=512):
    """(density radius, GH upper bound from the nearest-vertex correspondence).

    density radius: max over mesh nodes of the distance to the vertex set.
    The correspondence relates each node to a nearest map vertex; half its
    exact distortion is an upper bound for the Gromov-Hausdorff distance
    between the vertex metric and the meshed surface.
    """
    dist_to_v, _, src = dijkstra(s.graph, directed=False,
                                 indices=s.vertex_nodes, min_only=True,
                                 return_predecessors=True)
    density_radius = float(dist_to_v.max())

    node_to_vertex = np.empty(s.node_count, dtype=np.int64)
    node_to_vertex[s.vertex_nodes] = np.arange(s.vertex_nodes.shape[0])
    nearest = node_to_vertex[src]

    d_gr = vertex_distance_matrix(q).astype(np.float64)
    worst = 0.0
    for lo in range(0, s.node_count, block):
        idx = np.arange(lo, min(lo + block, s.node_count))
        d_block = s.distances_from_many(idx)
        mismatch = np.abs(d_block - d_gr[nearest[idx]][:, nearest])
        worst = max(worst, float(mismatch.max()))
    return density_radius, worst / 2.0


def surface_report(q, s):
    """One row of the certification report for (q, s)."""
    err = verify_vertex_isometry(q, s)
    density, gh_upper = verify_density_and_gh(q, s)
    return {
        "n": q.n,
        "m": s.m,
        "max_isometry_error": err,
        "density_radius": density,
        "gh_upper": gh_upper,
    }


def export_off(s):
    """OFF-style text: nodes with chart coordinates, then weighted edges."""
    lines = [f"QUADLAB-MESH 1", f"nodes {s.node_count}"]
    for node in range(s.node_count):
        f, sq, i, j = s.node_rep[node]
        x, y, z = s.node_xyz[node]
        lines.append(f"{node} {x:.12g} {y:.12g} {z:.12g} {f} {sq} {i} {j}")
    coo = s.graph.tocoo()
    mask = coo.row < coo.col
    lines.append(f"edges {int(mask.sum())}")
    for a, b, w in zip(coo.row[mask], coo.col[mask], coo.data[mask]):
        lines.append(f"{a} {b} {w:.12g}")
    return "\n".join(lines) + "\n"


def single_chart(m):
    """Mesh of one chart alone (five glued squares, no cross-face gluing)."""
    side = m + 1
    raw_count = 5 * side * side
    pairs = []
    line = np.arange(side)
    zero = np.zeros(side, dtype=np.int64)
    for k in range(4):
        pairs.append((_raw_id(zero, k, m, line, m),
                      _raw_id(zero, (k + 1) % 4, 0, line, m)))
    pairs.append((_raw_id(zero, SQ_WALL0, line, m, m), _raw_id(zero, SQ_TOP, line, 0, m)))
    pairs.append((_raw_id(zero, SQ_WALL1, line, m, m), _raw_id(zero, SQ_TOP, m, line, m)))
    pairs.append((_raw_id(zero, SQ_WALL2, line, m, m), _raw_id(zero, SQ_TOP, m - line, m, m)))
    pairs.append((_raw_id(zero, SQ_WALL3, line, m, m), _raw_id(zero, SQ_TOP, 0, m - line, m)))
    rows = np.concatenate([a for a, _ in pairs])
    cols = np.concatenate([b for _, b in pairs])
    ident = coo_matrix((np.ones(rows.shape[0], dtype=np.int8), (rows, cols)),
                       shape=(raw_count, raw_count))
    n_nodes, labels = connected_components(ident, directed=False)

    e_a, e_b, e_w = [], [], []
    base = np.arange(5)[:, None] * side * side

    def add_edges(i0, j0, i1, j1, w):
        a = base + (j0 * side + i0).ravel()[None, :]
        b = base + (j1 * side + i1).ravel()[None, :]
        e_a.append(a.ravel())
        e_b.append(b.ravel())
        e_w.append(np.full(a.size, w))

    gi, gj = np.meshgrid(np.arange(m), np.arange(side), indexing="ij")
    add_edges(gi, gj, gi + 1, gj, 1.0 / m)
    add_edges(gj.T, gi.T, gj.T, gi.T + 1, 1.0 / m)
    ci, cj = np.meshgrid(np.arange(m), np.arange(m), indexing="ij")
    add_edges(ci, cj, ci + 1, cj + 1, np.sqrt(2.0) / m)
    add_edges(ci + 1, cj, ci, cj + 1, np.sqrt(2.0) / m)

    ea = labels[np.concatenate(e_a)]
    eb = labels[np.concatenate(e_b)]
    ew = np.concatenate(e_w)
    graph = csr_matrix((np.concatenate((ew, ew)),
                        (np.concatenate((ea, eb)), np.concatenate((eb, ea)))),
                       shape=(n_nodes, n_nodes))

    corner_nodes = labels[[_raw_id(0, k, 0, 0, m) for k in range(4)]]
    top_center = labels[_raw_id(0, SQ_TOP, m // 2, m // 2, m)] if m % 2 == 0 else None
    return graph, corner_nodes, top_center
