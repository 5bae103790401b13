"""Exact combinatorics of Berkovich curve skeletons and graphs of finite groups."""
from .errors import DomainError, InputError, Report, SkeletonKitError
from .exact import INF, MINUS_INF
from .ultrametric import CenterSpace, DiscPoint, metric_d, point_eq, validate_center_space
from .semigraph import Branch, Edge, SemiGraph, betti, edge, truncate, validate
from .harmonic import (HarmonicCochain, cover_from_class, h1_rank, harm_basis, prescribed_cochain)
from .skeleton import (DecoratedVertex, EmptySkeleton, Skeleton, SkeletonEdge, classify_compact,
                       classify_curve, generalized_valence, is_hyperbolic_node, is_node, is_superfluous,
                       mark_points, minimize_triangulation, node_set)
from .wild import (fiber_count, fiber_count_oracle, kummer_cover, pushforward_step, roots_of_unity_gap,
                   split_annulus_layout)
from .groups import FiniteGroup, cyclic, dihedral, direct_product
from .gog import (GraphOfGroups, PermutationAction, cover_from_action, screen_mochizuki, tempered_tower,
                  validate_action)
from .bass_serre import bass_serre_ball, reconstruct_quotient
from .drinfeld import BTVertex, LocalFieldParams, bt_ball, embed_vertex, recover_invariants

__version__ = "0.1.0"

__all__ = [
    "DomainError",
    "InputError",
    "Report",
    "SkeletonKitError",
    "INF",
    "MINUS_INF",
    "CenterSpace",
    "DiscPoint",
    "metric_d",
    "point_eq",
    "validate_center_space",
    "Branch",
    "Edge",
    "SemiGraph",
    "betti",
    "edge",
    "truncate",
    "validate",
    "HarmonicCochain",
    "cover_from_class",
    "h1_rank",
    "harm_basis",
    "prescribed_cochain",
    "DecoratedVertex",
    "EmptySkeleton",
    "Skeleton",
    "SkeletonEdge",
    "classify_compact",
    "classify_curve",
    "generalized_valence",
    "is_hyperbolic_node",
    "is_node",
    "is_superfluous",
    "mark_points",
    "minimize_triangulation",
    "node_set",
    "fiber_count",
    "fiber_count_oracle",
    "kummer_cover",
    "pushforward_step",
    "roots_of_unity_gap",
    "split_annulus_layout",
    "FiniteGroup",
    "cyclic",
    "dihedral",
    "direct_product",
    "GraphOfGroups",
    "PermutationAction",
    "cover_from_action",
    "screen_mochizuki",
    "tempered_tower",
    "validate_action",
    "bass_serre_ball",
    "reconstruct_quotient",
    "BTVertex",
    "LocalFieldParams",
    "bt_ball",
    "embed_vertex",
    "recover_invariants",
]
