"""Exact computations for a strictly monotone Cantor-type curve in the free
Carnot group of rank 2 and step 3, and its Engel counterpart."""

from .automorphisms import Automorphism, apply_automorphism, free_automorphism, orthogonal_frame
from .cantor import (
    CantorLevel,
    CantorPoint,
    CurveIterate,
    NotInCantorSet,
    build_curve,
    build_levels,
    contraction_constant,
    gamma4_exact,
    gamma_k,
    gamma_limit,
    measure_K,
    omega,
    truncation_error,
    verify_iterate,
)
from .cones import (
    ConeSpec,
    in_euclidean_cone,
    in_metric_cone,
    in_semigroup_closure,
    in_translated_constraint,
    is_intrinsic_lipschitz,
)
from .dynamics import (
    ControlCurve,
    Polyline,
    flow_constant,
    integrate,
    pansu_quotient,
    sample_cone_curve,
    vf_matrix,
)
from .experiments import (
    engel_experiment,
    intersection_certificate,
    monte_carlo_intersections,
    reachability_experiment,
    transport_experiment,
)
from .groups import (
    ENGEL,
    F23,
    AlgebraVector,
    GroupDescriptor,
    GroupPoint,
    bch,
    dilate,
    exp_c2,
    get_group,
    identity,
    inverse,
    log_c2,
    multiply,
)
from .metric import MetricParams, box_norm, dist_to_subgroup, distance
from .report import ExperimentReport

__version__ = "0.1.0"

__all__ = [
    "Automorphism",
    "apply_automorphism",
    "free_automorphism",
    "orthogonal_frame",
    "CantorLevel",
    "CantorPoint",
    "CurveIterate",
    "NotInCantorSet",
    "build_curve",
    "build_levels",
    "contraction_constant",
    "gamma4_exact",
    "gamma_k",
    "gamma_limit",
    "measure_K",
    "omega",
    "truncation_error",
    "verify_iterate",
    "ConeSpec",
    "in_euclidean_cone",
    "in_metric_cone",
    "in_semigroup_closure",
    "in_translated_constraint",
    "is_intrinsic_lipschitz",
    "ControlCurve",
    "Polyline",
    "flow_constant",
    "integrate",
    "pansu_quotient",
    "sample_cone_curve",
    "vf_matrix",
    "engel_experiment",
    "intersection_certificate",
    "monte_carlo_intersections",
    "reachability_experiment",
    "transport_experiment",
    "ENGEL",
    "F23",
    "AlgebraVector",
    "GroupDescriptor",
    "GroupPoint",
    "bch",
    "dilate",
    "exp_c2",
    "get_group",
    "identity",
    "inverse",
    "log_c2",
    "multiply",
    "MetricParams",
    "box_norm",
    "dist_to_subgroup",
    "distance",
    "ExperimentReport",
    "__version__",
]
