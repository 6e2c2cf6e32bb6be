"""Hot-kernel backend selection.

Two interchangeable implementations exist: a compiled Cython core
(`_core`, built by setup.py) and a NumPy fallback (`_pure`).  The compiled
one is preferred when importable.  Force a choice with the environment
variable QUADLAB_BACKEND=pure or QUADLAB_BACKEND=cython.
"""

import os

from . import _pure

_forced = os.environ.get("QUADLAB_BACKEND", "").strip().lower()
if _forced not in ("", "pure", "cython"):
    raise ValueError(f"QUADLAB_BACKEND must be 'pure' or 'cython', got {_forced!r}")

_impl = None
if _forced != "pure":
    try:
        from . import _core as _impl
    except ImportError:
        if _forced == "cython":
            raise ImportError(
                "QUADLAB_BACKEND=cython but quadlab._kernels._core is not built; "
                "run `pip install -e . --no-build-isolation` with a C compiler")
        _impl = None

if _impl is None:
    _impl = _pure

BACKEND = _impl.NAME

tree_decode = _impl.tree_decode
successors = _impl.successors
bfs_distances = _impl.bfs_distances
bfs_limited = _impl.bfs_limited
dual_split = _impl.dual_split
simple_cycles = _impl.simple_cycles


def backends():
    """All importable backends, name -> module (for tests and benchmarks)."""
    out = {"pure": _pure}
    try:
        from . import _core
        out["cython"] = _core
    except ImportError:
        pass
    return out
