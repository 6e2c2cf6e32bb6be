"""Plane trees, well-labeled trees, and their contour encodings.

A plane tree with n edges is stored as its Dyck step word (+1 descend into a
new child, -1 return to the parent; length 2n).  Vertices are numbered 0..n
in contour-first-visit (preorder) order, so the root is 0 and children of a
vertex have increasing ids in contour order.

A well-labeled tree carries integer labels, one per vertex, with labels >= 1,
min label exactly 1, and |label(x) - label(y)| <= 1 across every edge.  The
uniform combinatorial family fixes the root label to 1; the fast "free-shift"
sampler instead shifts an unconstrained labeling so that its minimum is 1
(a pointed variant, not uniform on the root-1 family).
"""

import numpy as np

from . import _kernels
from .errors import (EmptyTree, InvariantViolation, MalformedInput,
                     SizeTooLarge)

ENUMERATION_LIMIT = 8


def _rng(seed):
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def count_well_labeled(n):
    """Number of well-labeled trees with n edges: 2 * 3^n (2n)! / (n! (n+2)!).

    Equals the number of rooted quadrangulations with n faces.
    """
    import math
    return 2 * 3 ** n * math.factorial(2 * n) // (
        math.factorial(n) * math.factorial(n + 2))


class PlaneTree:
    """Rooted plane tree given by a Dyck step word."""

    def __init__(self, steps):
        steps = np.asarray(steps, dtype=np.int8)
        if steps.ndim != 1 or steps.size == 0:
            raise EmptyTree("tree needs at least one edge")
        if steps.size % 2:
            raise MalformedInput("step word has odd length")
        if not np.all(np.abs(steps) == 1):
            raise MalformedInput("steps must be +1/-1")
        walk = np.cumsum(steps)
        if walk[-1] != 0 or walk.min() < 0:
            raise MalformedInput("step word is not a Dyck word")
        self.steps = steps
        self.steps.setflags(write=False)
        self._decoded = None

    @property
    def n(self):
        """Edge count."""
        return self.steps.shape[0] // 2

    def _decode(self):
        if self._decoded is None:
            self._decoded = _kernels.tree_decode(self.steps)
        return self._decoded

    @property
    def parent(self):
        """parent[v] for v = 0..n; parent[0] = -1."""
        return self._decode()[0]

    @property
    def vertex_at_time(self):
        """Vertex visited at contour time i = 0..2n."""
        return self._decode()[1]

    def children(self):
        """Ordered children lists; order = contour order = increasing id."""
        out = [[] for _ in range(self.n + 1)]
        for v, p in enumerate(self.parent):
            if p >= 0:
                out[p].append(v)
        return out

    def __eq__(self, other):
        if not isinstance(other, PlaneTree):
            return NotImplemented
        return np.array_equal(self.steps, other.steps)

    def __hash__(self):
        return hash(self.steps.tobytes())

    def __repr__(self):
        return f"PlaneTree(n={self.n})"


class WellLabeledTree:
    """Plane tree plus positive 1-Lipschitz labels with minimum 1."""

    def __init__(self, tree, labels):
        labels = np.asarray(labels, dtype=np.int32)
        if labels.shape != (tree.n + 1,):
            raise MalformedInput("need one label per vertex")
        if labels.min() < 1:
            raise MalformedInput("labels must be >= 1")
        if labels.min() != 1:
            raise MalformedInput("minimum label must be exactly 1")
        par = tree.parent
        v = np.arange(1, tree.n + 1)
        if np.abs(labels[v] - labels[par[v]]).max(initial=0) > 1:
            raise MalformedInput("adjacent labels must differ by at most 1")
        self.tree = tree
        self.labels = labels
        self.labels.setflags(write=False)

    @property
    def n(self):
        return self.tree.n

    @property
    def root_label(self):
        return int(self.labels[0])

    def __eq__(self, other):
        if not isinstance(other, WellLabeledTree):
            return NotImplemented
        return (self.tree == other.tree
                and np.array_equal(self.labels, other.labels))

    def __hash__(self):
        return hash((self.tree.steps.tobytes(), self.labels.tobytes()))

    def __repr__(self):
        return f"WellLabeledTree(n={self.n}, root_label={self.root_label})"


class ContourPair:
    """The processes (C_i, L_i), i = 0..2n, read along the contour."""

    def __init__(self, C, L):
        C = np.asarray(C, dtype=np.int32)
        L = np.asarray(L, dtype=np.int32)
        if C.ndim != 1 or C.shape != L.shape or C.shape[0] % 2 == 0:
            raise MalformedInput("C and L must both have length 2n + 1")
        if C[0] != 0 or C[-1] != 0:
            raise MalformedInput("contour process must start and end at 0")
        dC = np.diff(C)
        if np.any(np.abs(dC) != 1) or C.min() < 0:
            raise MalformedInput("contour increments must be +1/-1")
        if np.abs(np.diff(L)).max(initial=0) > 1 or L.min() < 1:
            raise MalformedInput("label process must be 1-Lipschitz and >= 1")
        self.C = C
        self.L = L
        self.C.setflags(write=False)
        self.L.setflags(write=False)

    @property
    def n(self):
        return (self.C.shape[0] - 1) // 2

    @classmethod
    def from_tree(cls, wlt):
        steps = wlt.tree.steps
        C = np.empty(2 * wlt.n + 1, dtype=np.int32)
        C[0] = 0
        np.cumsum(steps, out=C[1:], dtype=np.int32)
        L = wlt.labels[wlt.tree.vertex_at_time]
        return cls(C, L)

    def reconstruct(self):
        """Invert the encoding: the unique (tree, labels) with these processes."""
        steps = np.diff(self.C).astype(np.int8)
        tree = PlaneTree(steps)
        vat = tree.vertex_at_time
        labels = np.empty(tree.n + 1, dtype=np.int32)
        labels[vat] = self.L
        if not np.array_equal(labels[vat], self.L):
            raise InvariantViolation("label process inconsistent across revisits")
        return WellLabeledTree(tree, labels)

    def to_csv(self):
        lines = ["i,C,L"]
        lines.extend(f"{i},{int(c)},{int(l)}"
                     for i, (c, l) in enumerate(zip(self.C, self.L)))
        return "\n".join(lines) + "\n"

    def __eq__(self, other):
        if not isinstance(other, ContourPair):
            return NotImplemented
        return np.array_equal(self.C, other.C) and np.array_equal(self.L, other.L)

    def __hash__(self):
        return hash((self.C.tobytes(), self.L.tobytes()))


def contour_processes(wlt):
    """Contour and label process of a well-labeled tree."""
    return ContourPair.from_tree(wlt)


# -- samplers ---------------------------------------------------------------

def _dyck_batch(rng, n, batch):
    """Uniform Dyck words via the cycle lemma, one per row.

    Shuffle n up-steps among 2n+1 slots (sum -1) and rotate each row to start
    just after the first minimum of its prefix walk; the last step of the
    rotated row is the closing -1 and is dropped.
    """
    length = 2 * n + 1
    seq = np.full((batch, length), -1, dtype=np.int8)
    seq[:, :n] = 1
    seq = rng.permuted(seq, axis=1)
    walk = np.cumsum(seq, axis=1, dtype=np.int32)
    first_min = np.argmin(walk, axis=1)
    idx = (np.arange(length, dtype=np.int64)[None, :]
           + (first_min + 1)[:, None]) % length
    rotated = np.take_along_axis(seq, idx, axis=1)
    return rotated[:, : 2 * n]


def sample_plane_tree(n, seed):
    """Exactly uniform plane tree with n edges; deterministic given seed."""
    if n < 1:
        raise EmptyTree("n must be >= 1")
    rng = _rng(seed)
    return PlaneTree(_dyck_batch(rng, n, 1)[0])


def _label_processes(steps, inc):
    """Label walk along the contour for per-vertex increments.

    steps: (B, 2n) Dyck rows; inc: (B, n) increments of vertex v = column v-1.
    Returns (walk, pre) where walk[b, i] = label after contour step i relative
    to a root label of 0, and pre[b, i] = vertex opened at an up-step i.
    """
    b, two_n = steps.shape
    depth = np.zeros((b, two_n + 1), dtype=np.int32)
    np.cumsum(steps, axis=1, dtype=np.int32, out=depth[:, 1:])
    level = np.where(steps == 1, depth[:, 1:], depth[:, :-1])
    order = np.argsort(level, axis=1, kind="stable")
    up_pos = order[:, 0::2]
    dn_pos = order[:, 1::2]
    pre = np.cumsum(steps == 1, axis=1, dtype=np.int32)
    rows = np.arange(b)[:, None]
    v_up = pre[rows, up_pos] - 1
    contrib = np.zeros((b, two_n), dtype=np.int32)
    contrib[rows, up_pos] = inc[rows, v_up]
    contrib[rows, dn_pos] = -inc[rows, v_up]
    walk = np.cumsum(contrib, axis=1, dtype=np.int32)
    return walk, pre


def _labels_from_walk(steps_row, walk_row, root_label, n):
    labels = np.empty(n + 1, dtype=np.int32)
    labels[0] = root_label
    ups = np.nonzero(steps_row == 1)[0]
    labels[1:] = root_label + walk_row[ups]
    return labels


def sample_well_labeled_many(n, count, seed, mode="exact-rejection"):
    """Draw `count` independent well-labeled trees; deterministic given seed.

    exact-rejection: uniform on the root-label-1 family, by rejection
    (acceptance probability is exactly 2/(n+2)).  free-shift: no rejection;
    an unconstrained labeling shifted so its minimum is 1.
    """
    if n < 1:
        raise EmptyTree("n must be >= 1")
    if mode not in ("exact-rejection", "free-shift"):
        raise ValueError(f"unknown mode {mode!r}")
    rng = _rng(seed)
    out = []
    if mode == "free-shift":
        for _ in range(count):
            steps = _dyck_batch(rng, n, 1)
            inc = rng.integers(-1, 2, size=(1, n), dtype=np.int32)
            walk, _ = _label_processes(steps, inc)
            shift = 1 - min(0, int(walk[0].min()))
            labels = _labels_from_walk(steps[0], walk[0], shift, n)
            out.append(WellLabeledTree(PlaneTree(steps[0]), labels))
        return out

    batch = int(max(4, min(512, (1 << 21) // (2 * n + 1))))
    while len(out) < count:
        steps = _dyck_batch(rng, n, batch)
        inc = rng.integers(-1, 2, size=(batch, n), dtype=np.int32)
        walk, _ = _label_processes(steps, inc)
        good = np.nonzero(1 + walk.min(axis=1) >= 1)[0]
        for row in good:
            labels = _labels_from_walk(steps[row], walk[row], 1, n)
            out.append(WellLabeledTree(PlaneTree(steps[row]), labels))
            if len(out) == count:
                break
    return out


def sample_well_labeled(n, seed, mode="exact-rejection"):
    """First element of sample_well_labeled_many(n, 1, seed, mode)."""
    return sample_well_labeled_many(n, 1, seed, mode)[0]


# -- exhaustive enumeration ------------------------------------------------------

def enumerate_plane_trees(n):
    """All Catalan(n) plane trees, in up-before-down lexicographic order."""
    if n < 1:
        raise EmptyTree("n must be >= 1")
    word = np.empty(2 * n, dtype=np.int8)

    def rec(pos, opened, closed):
        if pos == 2 * n:
            yield PlaneTree(word.copy())
            return
        if opened < n:
            word[pos] = 1
            yield from rec(pos + 1, opened + 1, closed)
        if closed < opened:
            word[pos] = -1
            yield from rec(pos + 1, opened, closed + 1)

    yield from rec(0, 0, 0)


def enumerate_well_labeled(n):
    """All well-labeled trees with n edges and root label 1, each once."""
    if n < 1:
        raise EmptyTree("n must be >= 1")
    if n > ENUMERATION_LIMIT:
        raise SizeTooLarge(f"enumeration guarded at n <= {ENUMERATION_LIMIT}")
    for tree in enumerate_plane_trees(n):
        parent = tree.parent
        labels = np.empty(n + 1, dtype=np.int32)
        labels[0] = 1

        def rec(v):
            if v == n + 1:
                yield WellLabeledTree(tree, labels.copy())
                return
            base = labels[parent[v]]
            for d in (-1, 0, 1):
                if base + d >= 1:
                    labels[v] = base + d
                    yield from rec(v + 1)

        yield from rec(1)


# -- text format --------------------------------------------------------------

def tree_to_text(wlt):
    """Balanced-parentheses word plus labels in contour-first-visit order."""
    word = "".join("(" if s == 1 else ")" for s in wlt.tree.steps)
    labels = " ".join(str(int(x)) for x in wlt.labels)
    return f"{word}\n{labels}\n"


def tree_from_text(text):
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if len(lines) != 2:
        raise MalformedInput("expected a parentheses line and a label line")
    word = lines[0].strip()
    if set(word) - set("()"):
        raise MalformedInput("first line must be parentheses only",
                             position=text.find(word))
    steps = np.array([1 if c == "(" else -1 for c in word], dtype=np.int8)
    try:
        labels = [int(tok) for tok in lines[1].split()]
    except ValueError as exc:
        raise MalformedInput(f"bad label: {exc}") from None
    return WellLabeledTree(PlaneTree(steps), np.array(labels, dtype=np.int32))
