"""Degree-preserving flips on loop-free multigraphs under nested
connectivity constraints."""

from .connected import TransformReport, improve_step, transform_connected
from .distance import (
    SymmetricCircuitPartition, enumerate_members, exact_distance, psi,
)
from .errors import *  # noqa: F401,F403
from .formats import (
    FlipDocument, Instance, ValenceTable, parse_flips, parse_formula, parse_graph,
    parse_instance, parse_tree_term, serialize_flips, serialize_graph, serialize_instance,
)
from .fragments import (
    ContractedView, FragmentTree, NestedCollection, WellStructuredSubtree,
    build_fragment_tree, check_membership, contract, extend, inherited,
    is_correct_flip, is_special_flip, lift_flip, tree_from_sets, validate_and_normalize,
)
from .multigraph import (
    Flip, FlipSequence, Multigraph, apply_flip, canonical_key, delta, intersect,
    is_connected, minus, symmetric_difference, union,
)
from .nested import equalize_degrees, align_on_extension, plan_nested, transform_nested
from .realize import is_realizable, realize, realize_max_deficit, realize_with_deficit

__version__ = "0.1.0"
