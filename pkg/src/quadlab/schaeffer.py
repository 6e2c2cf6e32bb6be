"""The corner-to-successor bijection between labeled trees and quadrangulations.

Forward: add an isolated pointed vertex, then draw one edge from every
contour corner to its successor (the next corner in cyclic contour order
whose label is one less; corners with label 1 connect to the pointed
vertex).  The rotation system of the image is assembled from the nesting
order of those arcs: within one corner, incoming arcs attach nearest-source
first and the outgoing arc last (in clockwise walk order), and the whole
per-vertex list is reversed to give the counterclockwise rotation.  The
root edge of the image is the arc drawn from the first label-1 corner,
oriented from the pointed vertex, so its tip is the tree root whenever the
root label is 1.

Reverse: labels are graph distances from the pointed vertex; each face
shows one of the two label patterns (l, l+1, l, l+1) or (l, l+1, l+2, l+1)
around its boundary and selects one tree chord (the diagonal between the
two l+1 corners, resp. the chord from the l+2 corner to the corner after
it in face order).  The plane structure is read off the corners holding
the chords.
"""

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import InvariantViolation, NotQuadrangulation
from .map_core import CombinatorialMap, Quadrangulation
from .trees import PlaneTree, WellLabeledTree


@dataclass(frozen=True)
class CornerSequence:
    """Corners in contour order: tree vertex, label, successor corner.

    successor is -1 where the arc goes to the pointed vertex.
    """
    vertices: np.ndarray
    labels: np.ndarray
    successors: np.ndarray

    def __len__(self):
        return self.vertices.shape[0]


def corner_sequence(wlt):
    two_n = 2 * wlt.n
    vat = wlt.tree.vertex_at_time
    corner_v = vat[:two_n].astype(np.int64)
    labels = wlt.labels[corner_v].astype(np.int64)
    succ = _kernels.successors(labels)
    return CornerSequence(corner_v, labels, np.asarray(succ, dtype=np.int64))


def forward(wlt, validate=True):
    """Image quadrangulation of a well-labeled tree.

    Arc k (from corner k) gets half-edges 2k at its source corner and 2k+1
    at its target, so opposite(2k) = 2k+1.
    """
    n = wlt.n
    two_n = 2 * n
    cs = corner_sequence(wlt)
    corner_v, s = cs.vertices, cs.successors

    srcs = np.nonzero(s >= 0)[0]
    tgt = s[srcs]
    cyc = (tgt - srcs) % two_n
    order = np.lexsort((cyc, tgt))
    in_src = srcs[order]
    in_tgt = tgt[order]

    cnt_in = np.bincount(tgt, minlength=two_n).astype(np.int64)
    seg_len = cnt_in + 1

    # corner segments laid out grouped by tree vertex, contour order within
    corner_order = np.argsort(corner_v, kind="stable")
    seg_start = np.empty(two_n, dtype=np.int64)
    seg_start[corner_order] = np.concatenate(
        ([0], np.cumsum(seg_len[corner_order])[:-1]))

    m_in = in_src.shape[0]
    flat_len = two_n + m_in
    flat_cw = np.empty(flat_len, dtype=np.int64)
    grp_first = np.cumsum(cnt_in) - cnt_in
    rank = np.arange(m_in) - grp_first[in_tgt]
    flat_cw[seg_start[in_tgt] + rank] = 2 * in_src + 1
    flat_cw[seg_start + cnt_in] = 2 * np.arange(two_n)

    deg = np.bincount(corner_v, weights=seg_len, minlength=n + 1).astype(np.int64)
    vstart = np.concatenate(([0], np.cumsum(deg)[:-1]))
    vend = vstart + deg
    pos = np.arange(flat_len)
    flat_ccw = flat_cw[np.repeat(vstart + vend - 1, deg) - pos]

    xs = np.nonzero(s < 0)[0]
    x_block = 2 * xs + 1
    full = np.concatenate((flat_ccw, x_block))
    all_start = np.concatenate((vstart, [flat_len]))
    all_len = np.concatenate((deg, [xs.shape[0]]))
    all_end = all_start + all_len

    total = 4 * n
    p = np.arange(total)
    nxt_pos = p + 1
    ends = np.repeat(all_end, all_len)
    starts = np.repeat(all_start, all_len)
    wrap = nxt_pos == ends
    nxt_pos[wrap] = starts[wrap]

    sigma = np.empty(total, dtype=np.int64)
    sigma[full] = full[nxt_pos]
    opposite = np.arange(total, dtype=np.int64) ^ 1
    root = int(2 * xs[0] + 1)

    m = CombinatorialMap(opposite, sigma, root)
    return Quadrangulation(m, validate=validate)


def vertex_correspondence(wlt, q):
    """Map tree vertex ids to q vertex ids; also return the pointed vertex.

    Valid when q = forward(wlt): the arc out of a vertex's first corner is
    based at that vertex.
    """
    n = wlt.n
    steps = wlt.tree.steps
    first_time = np.empty(n + 1, dtype=np.int64)
    first_time[0] = 0
    first_time[1:] = np.nonzero(steps == 1)[0] + 1
    tv_to_qv = q.map.vertex_of[2 * first_time].astype(np.int64)
    return tv_to_qv, q.pointed_vertex


def _face_chords(q):
    """Tree chord selected inside each face, as a pair of gap keys.

    The gap key of the corner after half-edge h is opposite(h): the corner
    sits at head(h) between opposite(h) and next_at_vertex(opposite(h)).
    """
    m = q.map
    indptr, heads, _ = q.adjacency
    labels_q = _kernels.bfs_distances(indptr, heads, q.pointed_vertex)
    fm = q.faces_matrix()
    gap_key = m.opposite[fm]
    cl = labels_q[m.vertex_of[gap_key]].astype(np.int64)
    lmin = cl.min(axis=1)
    rel = cl - lmin[:, None]

    nf = fm.shape[0]
    rows = np.arange(nf)
    confluent = rel.max(axis=1) == 2
    # argmax finds the unique l+2 corner (confluent) or the first l+1 corner
    # (simple); the partner is the next corner, resp. the opposite one
    p_hi = np.argmax(rel, axis=1)
    shift = np.where(confluent, 1, 2)
    chord_a = gap_key[rows, p_hi]
    chord_b = gap_key[rows, (p_hi + shift) % 4]

    # sanity of the two admissible label patterns
    srt = np.sort(rel, axis=1)
    ok_conf = np.array_equal(np.unique(srt[confluent], axis=0),
                             np.array([[0, 1, 1, 2]])) if confluent.any() else True
    simple = ~confluent
    ok_simp = np.array_equal(np.unique(srt[simple], axis=0),
                             np.array([[0, 0, 1, 1]])) if simple.any() else True
    alt_ok = np.all(rel[simple][:, [0, 1]] == rel[simple][:, [2, 3]])
    if not (ok_conf and ok_simp and alt_ok):
        raise NotQuadrangulation("face labels are not distances from a point")
    return labels_q, chord_a.astype(np.int64), chord_b.astype(np.int64)


def _rotation_tables(m):
    """Cycle position of each half-edge and per-vertex rotation lists."""
    sigma = m.next_at_vertex
    vof = m.vertex_of
    h_count = m.half_edge_count
    pos = np.empty(h_count, dtype=np.int64)
    rot = [None] * (int(vof.max()) + 1)
    seen = np.zeros(h_count, dtype=bool)
    for h0 in range(h_count):
        if seen[h0]:
            continue
        cyc = []
        cur = h0
        while not seen[cur]:
            seen[cur] = True
            pos[cur] = len(cyc)
            cyc.append(cur)
            cur = int(sigma[cur])
        rot[vof[h0]] = np.array(cyc, dtype=np.int64)
    return pos, rot


def reverse(q):
    """Preimage tree of a pointed rooted quadrangulation.

    Labels are recomputed as BFS distances from the pointed vertex; the
    chord rule recovers the edges, and corner positions recover the plane
    structure and the children order (clockwise scan from the parent chord,
    or from the root edge end at the tree root).
    """
    m = q.map
    n = q.n
    labels_q, chord_a, chord_b = _face_chords(q)
    h_count = m.half_edge_count
    vof = m.vertex_of

    chord_in_gap = np.full(h_count, -1, dtype=np.int64)
    for arr in (chord_a, chord_b):
        if np.any(chord_in_gap[arr] >= 0):
            raise InvariantViolation("two tree chords in one corner")
        chord_in_gap[arr] = np.arange(n)

    pos, rot = _rotation_tables(m)
    root_vertex = int(vof[m.opposite[m.root]])
    if labels_q[root_vertex] != 1:
        raise NotQuadrangulation("root edge tip is not at distance 1")

    visited = np.zeros(q.vertex_count, dtype=bool)
    visited[q.pointed_vertex] = True

    def children_of(v, ref_pos, skip_chord):
        rotv = rot[v]
        d = rotv.shape[0]
        out = []
        for t in range(1, d + 1):
            g = int(rotv[(ref_pos - t) % d])
            c = int(chord_in_gap[g])
            if c >= 0 and c != skip_chord:
                out.append(c)
        return out

    def child_end(c, v):
        a, b = int(chord_a[c]), int(chord_b[c])
        return b if vof[a] == v else a

    steps = np.empty(2 * n, dtype=np.int8)
    labels_out = [int(labels_q[root_vertex])]
    visited[root_vertex] = True
    step_i = 0
    stack = [[root_vertex,
              children_of(root_vertex, int(pos[m.opposite[m.root]]), -1), 0]]
    while stack:
        v, kids, i = stack[-1]
        if i == len(kids):
            stack.pop()
            if stack:
                steps[step_i] = -1
                step_i += 1
                stack[-1][2] += 1
            continue
        c = kids[i]
        g_child = child_end(c, v)
        w = int(vof[g_child])
        if visited[w]:
            raise InvariantViolation("tree chords contain a cycle")
        visited[w] = True
        steps[step_i] = 1
        step_i += 1
        labels_out.append(int(labels_q[w]))
        stack.append([w, children_of(w, int(pos[g_child]), c), 0])

    if step_i != 2 * n or not visited.all():
        raise InvariantViolation("tree chords do not span the vertices")
    return WellLabeledTree(PlaneTree(steps),
                           np.array(labels_out, dtype=np.int32))


def overlay_euler_characteristic(q):
    """Euler characteristic of the map formed by q's edges plus tree chords.

    Value 2 certifies that tree and quadrangulation edges together form a
    planar overlay (they meet only at vertices).
    """
    m = q.map
    n = q.n
    _, chord_a, chord_b = _face_chords(q)
    h_count = m.half_edge_count
    total = h_count + 2 * n

    sigma_p = np.empty(total, dtype=np.int64)
    sigma_p[:h_count] = m.next_at_vertex
    alpha_p = np.empty(total, dtype=np.int64)
    alpha_p[:h_count] = m.opposite
    for c in range(n):
        a, b = int(chord_a[c]), int(chord_b[c])
        ha, hb = h_count + 2 * c, h_count + 2 * c + 1
        sigma_p[ha] = sigma_p[a]
        sigma_p[a] = ha
        sigma_p[hb] = sigma_p[b]
        sigma_p[b] = hb
        alpha_p[ha] = hb
        alpha_p[hb] = ha

    face_next = sigma_p[alpha_p]
    seen = np.zeros(total, dtype=bool)
    faces = 0
    for h0 in range(total):
        if seen[h0]:
            continue
        faces += 1
        cur = h0
        while not seen[cur]:
            seen[cur] = True
            cur = int(face_next[cur])
    vertices = q.vertex_count
    edges = total // 2
    return vertices - edges + faces
