"""Pure NumPy implementations of the hot kernels.

Same contracts as the compiled core (`quadlab._kernels._core`); loops are
replaced by vectorized passes (level-indexed searchsorted for contour
decoding and successor chains, frontier expansion for BFS).
"""

import numpy as np

from ..errors import BudgetExceeded, InvariantViolation

NAME = "pure"


def tree_decode(steps):
    """Decode a Dyck step word (+1/-1, length 2n) into tree arrays.

    Returns (parent, vertex_at_time): vertices are numbered 0..n in order
    of first visit along the contour, root is 0, parent[0] = -1.
    """
    steps = np.asarray(steps)
    two_n = steps.shape[0]
    n = two_n // 2
    depth = np.empty(two_n + 1, dtype=np.int64)
    depth[0] = 0
    np.cumsum(steps, out=depth[1:])

    ups = np.nonzero(steps == 1)[0]            # step i opens vertex (rank+1)
    up_level = depth[ups + 1]
    vertex_at_time = np.zeros(two_n + 1, dtype=np.int32)
    up_ids = np.arange(1, n + 1, dtype=np.int32)

    # vertex at time j sits at depth d = depth[j]; it was opened by the last
    # up-step at level d strictly before j (alternation of ups/downs per level)
    max_d = int(depth.max(initial=0))
    for d in range(1, max_d + 1):
        level_ups = ups[up_level == d]
        times = np.nonzero(depth == d)[0]
        if times.size == 0:
            continue
        pos = np.searchsorted(level_ups, times, side="left") - 1
        vertex_at_time[times] = up_ids[up_level == d][pos]

    parent = np.empty(n + 1, dtype=np.int32)
    parent[0] = -1
    parent[1:] = vertex_at_time[ups]
    return parent, vertex_at_time


def successors(corner_labels):
    """Successor corner of each contour corner.

    For corner i with label l >= 2, the successor is the first corner j after
    i in cyclic order with label l - 1; corners with label 1 map to -1 (the
    pointed vertex).
    """
    lab = np.asarray(corner_labels)
    two_n = lab.shape[0]
    succ = np.full(two_n, -1, dtype=np.int64)
    values = np.unique(lab)
    by_label = {int(v): np.nonzero(lab == v)[0] for v in values}
    for v in values:
        v = int(v)
        if v <= 1:
            continue
        below = by_label.get(v - 1)
        if below is None or below.size == 0:
            raise InvariantViolation(
                f"no corner with label {v - 1} below label {v}")
        cur = by_label[v]
        idx = np.searchsorted(below, cur, side="right")
        succ[cur] = below[idx % below.size]
    return succ


def _gather_neighbors(indptr, indices, frontier):
    starts = indptr[frontier]
    counts = indptr[frontier + 1] - starts
    total = int(counts.sum())
    if total == 0:
        return indices[:0]
    shifts = np.cumsum(counts) - counts
    pos = np.repeat(starts - shifts, counts) + np.arange(total)
    return indices[pos]


def bfs_distances(indptr, indices, source):
    """Exact single-source distances over a CSR graph; -1 = unreachable."""
    n_vertices = indptr.shape[0] - 1
    dist = np.full(n_vertices, -1, dtype=np.int32)
    dist[source] = 0
    frontier = np.array([source], dtype=np.int64)
    d = 0
    while frontier.size:
        nbr = _gather_neighbors(indptr, indices, frontier)
        nbr = nbr[dist[nbr] < 0]
        if nbr.size == 0:
            break
        frontier = np.unique(nbr).astype(np.int64)
        d += 1
        dist[frontier] = d
    return dist


def bfs_limited(indptr, indices, source, limit):
    """BFS truncated at distance `limit`; unexplored vertices get -1."""
    n_vertices = indptr.shape[0] - 1
    dist = np.full(n_vertices, -1, dtype=np.int32)
    dist[source] = 0
    frontier = np.array([source], dtype=np.int64)
    d = 0
    while frontier.size and d < limit:
        nbr = _gather_neighbors(indptr, indices, frontier)
        nbr = nbr[dist[nbr] < 0]
        if nbr.size == 0:
            break
        frontier = np.unique(nbr).astype(np.int64)
        d += 1
        dist[frontier] = d
    return dist


def dual_split(face_nbr, face_eid, blocked, start):
    """Label dual components after removing dual edges crossing `blocked`.

    face_nbr[f, k] is the face across edge face_eid[f, k].  Returns an int8
    array: 0 for the component of `start`, 1 for the next component found,
    2+ for any further ones, -1 never (all faces get labeled).
    """
    n_faces = face_nbr.shape[0]
    comp = np.full(n_faces, -1, dtype=np.int8)
    label = 0
    seed = start
    while True:
        comp[seed] = label
        frontier = np.array([seed], dtype=np.int64)
        while frontier.size:
            nbr = face_nbr[frontier].ravel()
            eid = face_eid[frontier].ravel()
            keep = (~blocked[eid]) & (comp[nbr] < 0)
            nbr = nbr[keep]
            if nbr.size == 0:
                break
            frontier = np.unique(nbr).astype(np.int64)
            comp[frontier] = label
        rest = np.nonzero(comp < 0)[0]
        if rest.size == 0:
            return comp
        if label >= 126:
            raise InvariantViolation("dual split produced too many components")
        label += 1
        seed = int(rest[0])


def simple_cycles(indptr, heads, eids, max_len, diam_limit, budget):
    """Enumerate simple edge-cycles of length <= max_len, each once.

    Canonical form: the smallest vertex id on the cycle is the DFS start, and
    of the two traversal directions the one with smaller second vertex (for
    2-cycles: smaller opening edge id) is emitted.  When diam_limit >= 0 the
    DFS from start v is confined to the ball of that radius around v, which
    is complete for cycles of ambient diameter <= diam_limit.  Self-loops
    are not supported (quadrangulations are loopless).

    Returns (flat, offsets): cycle k has edge ids flat[offsets[k]:offsets[k+1]].
    """
    n_vertices = indptr.shape[0] - 1
    out_flat = []
    out_off = [0]
    steps = 0
    on_path = np.zeros(n_vertices, dtype=bool)
    in_ball = None

    for v in range(n_vertices):
        if indptr[v + 1] - indptr[v] < 2:
            continue
        if diam_limit >= 0:
            dist_v = bfs_limited(indptr, heads, v, diam_limit)
            in_ball = dist_v >= 0
        path_v = [v]
        path_e = []
        stack = [int(indptr[v])]
        on_path[v] = True
        while stack:
            u = path_v[-1]
            slot = stack[-1]
            if slot >= indptr[u + 1]:
                stack.pop()
                on_path[u] = False
                path_v.pop()
                if path_e:
                    path_e.pop()
                continue
            stack[-1] += 1
            steps += 1
            if steps > budget:
                raise BudgetExceeded(
                    f"cycle enumeration exceeded budget {budget}")
            w = int(heads[slot])
            e = int(eids[slot])
            depth = len(path_e)
            if w == v:
                if depth == 1:
                    if e != path_e[0] and path_e[0] < e:
                        out_flat.extend(path_e)
                        out_flat.append(e)
                        out_off.append(len(out_flat))
                elif depth >= 2 and path_v[1] < path_v[-1]:
                    out_flat.extend(path_e)
                    out_flat.append(e)
                    out_off.append(len(out_flat))
            elif (w > v and not on_path[w] and depth + 2 <= max_len
                    and (in_ball is None or in_ball[w])):
                path_v.append(w)
                path_e.append(e)
                on_path[w] = True
                stack.append(int(indptr[w]))
        on_path[v] = False
    return (np.array(out_flat, dtype=np.int32),
            np.array(out_off, dtype=np.int64))
