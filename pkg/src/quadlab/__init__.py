"""quadlab: a laboratory for uniform random planar quadrangulations.

Sampling and exhaustive enumeration of labeled plane trees, the corner
bijection onto rooted quadrangulations and its inverse, exact graph
metrics, a glued-cube surface realization with certified vertex isometry,
Gromov-Hausdorff machinery, small-cycle bottleneck scans, and scaling
experiments, all behind one CLI.
"""

from ._kernels import BACKEND
from .map_core import (CombinatorialMap, Quadrangulation, build_map,
                       deserialize, from_face_list, serialize)
from .trees import (ContourPair, PlaneTree, WellLabeledTree,
                    contour_processes, count_well_labeled,
                    enumerate_plane_trees, enumerate_well_labeled,
                    sample_plane_tree, sample_well_labeled,
                    sample_well_labeled_many)
from .schaeffer import forward, reverse, vertex_correspondence

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "CombinatorialMap",
    "ContourPair",
    "PlaneTree",
    "Quadrangulation",
    "WellLabeledTree",
    "build_map",
    "contour_processes",
    "count_well_labeled",
    "deserialize",
    "enumerate_plane_trees",
    "enumerate_well_labeled",
    "forward",
    "from_face_list",
    "reverse",
    "sample_plane_tree",
    "sample_well_labeled",
    "sample_well_labeled_many",
    "serialize",
    "vertex_correspondence",
    "__version__",
]
