"""Combinatorial maps as half-edge rotation systems.

A map on an orientable surface is a pair of permutations of the half-edge
ids 0..H-1: `opposite` (a fixed-point-free involution pairing the two sides
of each edge) and `next_at_vertex` (counterclockwise rotation around the
tail vertex).  Faces are the cycles of the fixed traversal convention

    face_next(h) = next_at_vertex[opposite[h]]

used everywhere in this package.  Vertex ids are not stored; they are the
cycle indices of `next_at_vertex`, ordered by smallest half-edge id.
"""

import json

import numpy as np

from .errors import (Disconnected, InvariantViolation, MalformedInput,
                     NotInvolution, NotPermutation, NotPointed,
                     NotQuadrangulation, RootOutOfRange)

JSON_SCHEMA_VERSION = 1


def _as_perm_array(table, size, name):
    arr = np.asarray(table, dtype=np.int64)
    if arr.ndim != 1 or arr.shape[0] != size:
        raise NotPermutation(f"{name} must be a flat table of length {size}")
    if size == 0:
        return arr
    if arr.min() < 0 or arr.max() >= size:
        raise NotPermutation(f"{name} has ids outside [0, {size})")
    if np.bincount(arr, minlength=size).max() > 1:
        raise NotPermutation(f"{name} has duplicate entries")
    return arr


def _cycle_min(perm):
    """Minimum half-edge id on each orbit, via pointer doubling."""
    m = np.arange(perm.shape[0], dtype=np.int64)
    f = perm.astype(np.int64)
    rounds = max(1, int(np.ceil(np.log2(perm.shape[0] + 1))) + 1)
    for _ in range(rounds):
        m = np.minimum(m, m[f])
        f = f[f]
    return m


class CombinatorialMap:
    """Validated, immutable half-edge map."""

    def __init__(self, opposite, next_at_vertex, root):
        opp = np.asarray(opposite, dtype=np.int64)
        if opp.ndim != 1:
            raise NotPermutation("opposite must be a flat table")
        h = opp.shape[0]
        if h == 0 or h % 2:
            raise NotPermutation("half-edge count must be positive and even")
        opp = _as_perm_array(opp, h, "opposite")
        nxt = _as_perm_array(next_at_vertex, h, "next_at_vertex")
        if np.any(opp[opp] != np.arange(h)) or np.any(opp == np.arange(h)):
            raise NotInvolution("opposite must be a fixed-point-free involution")
        if not (0 <= int(root) < h):
            raise RootOutOfRange(f"root {root} outside [0, {h})")

        self.opposite = opp
        self.next_at_vertex = nxt
        self.root = int(root)
        self._check_connected()
        for a in (self.opposite, self.next_at_vertex):
            a.setflags(write=False)
        self._cache = {}

    # -- basic counts ------------------------------------------------------

    @property
    def half_edge_count(self):
        return self.opposite.shape[0]

    @property
    def edge_count(self):
        return self.half_edge_count // 2

    def _check_connected(self):
        h = self.half_edge_count
        seen = np.zeros(h, dtype=bool)
        seen[0] = True
        frontier = np.array([0], dtype=np.int64)
        while frontier.size:
            nbr = np.concatenate((self.opposite[frontier],
                                  self.next_at_vertex[frontier]))
            nbr = nbr[~seen[nbr]]
            if nbr.size == 0:
                break
            frontier = np.unique(nbr)
            seen[frontier] = True
        if not seen.all():
            raise Disconnected("permutations do not act transitively")

    # -- derived structure ---------------------------------------------------

    @property
    def face_next(self):
        """The face traversal permutation next_at_vertex o opposite."""
        key = "face_next"
        if key not in self._cache:
            self._cache[key] = self.next_at_vertex[self.opposite]
        return self._cache[key]

    @property
    def vertex_of(self):
        """Vertex id (cycle of next_at_vertex) at the tail of each half-edge."""
        key = "vertex_of"
        if key not in self._cache:
            mins = _cycle_min(self.next_at_vertex)
            reps = np.unique(mins)
            self._cache[key] = np.searchsorted(reps, mins).astype(np.int32)
        return self._cache[key]

    @property
    def vertex_count(self):
        return int(self.vertex_of.max()) + 1

    def head_of(self, h=None):
        """Vertex at the tip of each half-edge (or of one half-edge)."""
        heads = self.vertex_of[self.opposite]
        return heads if h is None else int(heads[h])

    def faces(self):
        """Half-edge cycles of the face traversal, as a list of arrays."""
        nxt = self.face_next
        h = self.half_edge_count
        seen = np.zeros(h, dtype=bool)
        out = []
        for start in range(h):
            if seen[start]:
                continue
            cyc = [start]
            seen[start] = True
            cur = int(nxt[start])
            while cur != start:
                seen[cur] = True
                cyc.append(cur)
                cur = int(nxt[cur])
            out.append(np.array(cyc, dtype=np.int64))
        return out

    @property
    def face_count(self):
        key = "face_count"
        if key not in self._cache:
            mins = _cycle_min(self.face_next)
            self._cache[key] = int(np.count_nonzero(
                mins == np.arange(self.half_edge_count)))
        return self._cache[key]

    def euler_characteristic(self):
        return self.vertex_count - self.edge_count + self.face_count

    def genus(self):
        chi = self.euler_characteristic()
        if chi % 2:
            raise InvariantViolation("odd Euler characteristic")
        return (2 - chi) // 2

    # -- vertex graph ----------------------------------------------------------

    @property
    def adjacency(self):
        """CSR view of the vertex multigraph: (indptr, heads, edge_ids)."""
        key = "adjacency"
        if key not in self._cache:
            tails = self.vertex_of
            order = np.argsort(tails, kind="stable").astype(np.int64)
            counts = np.bincount(tails, minlength=self.vertex_count)
            indptr = np.concatenate(([0], np.cumsum(counts))).astype(np.int64)
            heads = self.vertex_of[self.opposite[order]].astype(np.int32)
            eids = (order // 2).astype(np.int32)
            self._cache[key] = (indptr, heads, eids)
        return self._cache[key]

    def is_bipartite(self):
        from . import _kernels
        indptr, heads, _ = self.adjacency
        dist = _kernels.bfs_distances(indptr, heads, 0)
        parity = dist & 1
        tails = self.vertex_of
        return bool(np.all(parity[tails] != parity[self.vertex_of[self.opposite]]))

    # -- equality up to rooted isomorphism ------------------------------------

    def canonical_form(self):
        """Root-preserving canonical relabeling, as bytes.

        Two maps are isomorphic as rooted maps iff their canonical forms are
        equal (rooted maps have no nontrivial automorphisms).
        """
        h = self.half_edge_count
        new_id = np.full(h, -1, dtype=np.int64)
        order = np.empty(h, dtype=np.int64)
        new_id[self.root] = 0
        order[0] = self.root
        count = 1
        head = 0
        while head < count:
            cur = order[head]
            head += 1
            for nb in (int(self.opposite[cur]), int(self.next_at_vertex[cur])):
                if new_id[nb] < 0:
                    new_id[nb] = count
                    order[count] = nb
                    count += 1
        if count != h:
            raise Disconnected("canonical traversal did not reach all half-edges")
        opp = np.empty(h, dtype=np.int32)
        nxt = np.empty(h, dtype=np.int32)
        opp[new_id] = new_id[self.opposite]
        nxt[new_id] = new_id[self.next_at_vertex]
        return h.to_bytes(8, "little") + opp.tobytes() + nxt.tobytes()

    def __eq__(self, other):
        if not isinstance(other, CombinatorialMap):
            return NotImplemented
        return (self.root == other.root
                and np.array_equal(self.opposite, other.opposite)
                and np.array_equal(self.next_at_vertex, other.next_at_vertex))

    def __hash__(self):
        return hash((self.root, self.opposite.tobytes(),
                     self.next_at_vertex.tobytes()))

    def __repr__(self):
        return (f"CombinatorialMap(half_edges={self.half_edge_count}, "
                f"V={self.vertex_count}, F={self.face_count}, root={self.root})")


def build_map(opposite, next_at_vertex, root):
    """Validate tables and build a map; see CombinatorialMap for conventions."""
    return CombinatorialMap(opposite, next_at_vertex, root)


def from_face_list(faces, root=0):
    """Build a map from consistently oriented face boundaries.

    Each face is a sequence of vertex labels; every directed side (u, v) must
    occur exactly once over all faces, and is glued to its reverse (v, u).
    """
    sides = []
    for f_idx, face in enumerate(faces):
        k = len(face)
        if k < 2:
            raise ValueError("faces need at least two sides")
        for p in range(k):
            sides.append((face[p], face[(p + 1) % k]))
    h = len(sides)
    lookup = {}
    for i, s in enumerate(sides):
        if s in lookup:
            raise ValueError(f"directed side {s} occurs twice; gluing ambiguous")
        lookup[s] = i
    opp = np.empty(h, dtype=np.int64)
    for i, (u, v) in enumerate(sides):
        j = lookup.get((v, u))
        if j is None:
            raise ValueError(f"side {(u, v)} has no reverse; surface has boundary")
        opp[i] = j
    face_next = np.empty(h, dtype=np.int64)
    pos = 0
    for face in faces:
        k = len(face)
        for p in range(k):
            face_next[pos + p] = pos + (p + 1) % k
        pos += k
    nxt = face_next[opp]
    return CombinatorialMap(opp, nxt, root)


class Quadrangulation:
    """Rooted pointed quadrangulation of the sphere with n faces.

    The pointed vertex is the origin of the root edge (so it is determined
    by the map; passing it explicitly just asserts consistency).
    """

    def __init__(self, map_, pointed_vertex=None, validate=True):
        self.map = map_
        origin = int(map_.vertex_of[map_.root])
        if pointed_vertex is None:
            pointed_vertex = origin
        elif int(pointed_vertex) != origin:
            raise NotPointed(
                f"pointed vertex {pointed_vertex} is not the root origin {origin}")
        self.pointed_vertex = int(pointed_vertex)
        if map_.half_edge_count % 4:
            raise NotQuadrangulation("half-edge count not divisible by 4")
        if validate:
            self._validate()

    def _validate(self):
        m = self.map
        fn = m.face_next
        idx = np.arange(m.half_edge_count)
        fn2 = fn[fn]
        if np.any(fn == idx) or np.any(fn2 == idx) or np.any(fn2[fn2] != idx):
            raise NotQuadrangulation("a face has degree other than 4")
        if m.euler_characteristic() != 2:
            raise NotQuadrangulation("Euler characteristic is not 2")
        if m.vertex_count != self.n + 2:
            raise NotQuadrangulation("vertex count is not n + 2")
        if not m.is_bipartite():
            raise NotQuadrangulation("underlying graph is not bipartite")

    @property
    def n(self):
        """Number of faces."""
        return self.map.half_edge_count // 4

    @property
    def vertex_count(self):
        return self.n + 2

    @property
    def adjacency(self):
        return self.map.adjacency

    def faces_matrix(self):
        """All face cycles as an (n, 4) array, rows keyed by their least half-edge."""
        key = "faces_matrix"
        if key not in self.map._cache:
            fn = self.map.face_next
            mins = _cycle_min(fn)
            reps = np.nonzero(mins == np.arange(self.map.half_edge_count))[0]
            mat = np.empty((reps.shape[0], 4), dtype=np.int64)
            mat[:, 0] = reps
            mat[:, 1] = fn[reps]
            mat[:, 2] = fn[mat[:, 1]]
            mat[:, 3] = fn[mat[:, 2]]
            self.map._cache[key] = mat
        return self.map._cache[key]

    def face_of(self):
        """Face index (row of faces_matrix) containing each half-edge."""
        key = "face_of"
        if key not in self.map._cache:
            mat = self.faces_matrix()
            out = np.empty(self.map.half_edge_count, dtype=np.int32)
            rows = np.arange(mat.shape[0], dtype=np.int32)
            for c in range(4):
                out[mat[:, c]] = rows
            self.map._cache[key] = out
        return self.map._cache[key]

    def __repr__(self):
        return f"Quadrangulation(n={self.n}, pointed={self.pointed_vertex})"


# -- serialization -------------------------------------------------------------

def serialize(obj):
    """Canonical JSON bytes for a map or quadrangulation."""
    m = obj.map if isinstance(obj, Quadrangulation) else obj
    doc = {
        "half_edges": m.half_edge_count,
        "opposite": m.opposite.tolist(),
        "next_at_vertex": m.next_at_vertex.tolist(),
        "root": m.root,
    }
    if isinstance(obj, Quadrangulation):
        doc["pointed_vertex"] = obj.pointed_vertex
    return json.dumps(doc, separators=(",", ":"), sort_keys=False).encode()


def deserialize(data):
    """Parse serialize() output; returns a Quadrangulation when pointed."""
    if isinstance(data, bytes):
        data = data.decode("utf-8", errors="replace")
    try:
        doc = json.loads(data)
    except json.JSONDecodeError as exc:
        raise MalformedInput(f"bad JSON: {exc.msg}", position=exc.pos) from None
    if not isinstance(doc, dict):
        raise MalformedInput("top-level value must be an object", position=0)
    for field in ("half_edges", "opposite", "next_at_vertex", "root"):
        if field not in doc:
            raise MalformedInput(f"missing field {field!r}", position=0)
    h = doc["half_edges"]
    opp = doc["opposite"]
    nxt = doc["next_at_vertex"]
    if not isinstance(h, int) or not isinstance(opp, list) or not isinstance(nxt, list):
        raise MalformedInput("field of wrong type", position=0)
    if len(opp) != h or len(nxt) != h:
        raise MalformedInput("table length disagrees with half_edges", position=0)
    m = CombinatorialMap(opp, nxt, doc["root"])
    if "pointed_vertex" in doc and doc["pointed_vertex"] is not None:
        return Quadrangulation(m, pointed_vertex=doc["pointed_vertex"])
    return m
