from .generators import (
    FAMILY_DESCRIPTIONS,
    SQRT3_OVER_3,
    affine,
    check_anti_periodic,
    eq5_forms,
    exp_affine,
    generate,
    prop1_unit_pair,
    tan_half,
)
from .scales import ScaleSolutions, admissible_scale_diff, admissible_scale_ode, nth_roots
from .types import EquationMode, FamilyKind, FamilySpec, GeneratedFamily

__all__ = [
    "FAMILY_DESCRIPTIONS",
    "SQRT3_OVER_3",
    "affine",
    "check_anti_periodic",
    "eq5_forms",
    "exp_affine",
    "generate",
    "prop1_unit_pair",
    "tan_half",
    "ScaleSolutions",
    "admissible_scale_diff",
    "admissible_scale_ode",
    "nth_roots",
    "EquationMode",
    "FamilyKind",
    "FamilySpec",
    "GeneratedFamily",
]
