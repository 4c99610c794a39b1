"""Exact rational kernel for real trees: orders, boundaries, similarities, audits."""

from .errors import (
    CanonicalFormError,
    DomainError,
    DomainRangeError,
    EscapeError,
    FourPointError,
    InputError,
    ModelMismatchError,
    TopologyError,
)
from .groups import INTEGERS, Z2, GroupSpec, parse_group
from .rationals import INFINITE, format_rational, parse_rational
from .universal import (
    UP_END,
    ComponentLabel,
    StepFunction,
    UniversalModel,
    UPoint,
    classify_component,
    dist,
    join,
    median,
    model_leq,
    segment_point,
    upoint,
)
from .raytree import Location, RayTree, validate
from .orders import (
    OrderHandle,
    PointOrEnd,
    Violation,
    at_end,
    audit_rooted_order,
    check_convergence,
    compare,
    hausdorff_distance,
    hausdorff_oracle,
    in_neighborhood,
    phi,
    phi_inverse,
    rooted,
    sup,
)
from .audit import (
    FiniteMetric,
    FinitePoset,
    FourPointWitness,
    RealizedTree,
    TableViolation,
    check_four_point,
    check_metric_semilattice,
    check_upper_semilinear,
    l1_plane_sample,
    realize_tree,
)
from .symmetry import (
    FiberNearest,
    Similarity,
    apply,
    ball_limit,
    compose,
    coefficient,
    completeness_radius,
    extension,
    fiber_map,
    fiber_nearest,
    homothety,
    identity,
    inverse,
    map_point_to_point,
    point_shift,
    shift,
    submetry_height,
    valency,
)

__all__ = [name for name in dir() if not name.startswith("_")]
