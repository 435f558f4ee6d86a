"""Exact hitting and mixing times of random walks on trees, double brooms,
and the surgery argument that the balanced double broom maximises the mixing
time among trees of fixed order and diameter."""

from .brooms import (
    BroomParams,
    LabeledBroom,
    balanced_broom,
    balanced_mixing_closed_form,
    build_double_broom,
)
from .mixing import (
    MixingReport,
    hitting_matrix,
    hitting_time,
    mix_from_vertex,
    mixing_time,
    stationary,
)
from .tree import Tree, canonical_code, diameter, from_edge_list

__all__ = [
    "BroomParams",
    "LabeledBroom",
    "MixingReport",
    "Tree",
    "balanced_broom",
    "balanced_mixing_closed_form",
    "build_double_broom",
    "canonical_code",
    "diameter",
    "from_edge_list",
    "hitting_matrix",
    "hitting_time",
    "mix_from_vertex",
    "mixing_time",
    "stationary",
]

__version__ = "0.1.0"
