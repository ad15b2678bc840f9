from .growth import (
    CSV_HEADER,
    MIN_ORDER_RECORDS,
    GrowthCurve,
    GrowthRecord,
    OrderEstimate,
    characteristic,
    local_slopes,
    nudge_radius,
    order_estimate,
)
from .poles import (
    AnyEnumerator,
    ExplicitList,
    LatticeDoublePoles,
    NoPoles,
    PoleEnumerator,
    PreimageOfLattice,
    clearance,
    counting,
    eq5_pole_list,
    h_variant,
    pole_enumerator_for,
    pole_enumerator_for_expr,
    winding_multiplicity,
    wp_zero_list,
)
from .quadrature import QuadratureConfig, proximity

__all__ = [
    "CSV_HEADER",
    "MIN_ORDER_RECORDS",
    "GrowthCurve",
    "GrowthRecord",
    "OrderEstimate",
    "characteristic",
    "local_slopes",
    "nudge_radius",
    "order_estimate",
    "AnyEnumerator",
    "ExplicitList",
    "LatticeDoublePoles",
    "NoPoles",
    "PoleEnumerator",
    "PreimageOfLattice",
    "clearance",
    "counting",
    "eq5_pole_list",
    "h_variant",
    "pole_enumerator_for",
    "pole_enumerator_for_expr",
    "winding_multiplicity",
    "wp_zero_list",
    "QuadratureConfig",
    "proximity",
]
