from .lattice import (
    CellReduction,
    Lattice,
    equianharmonic_lattice,
    lattice_points_in_disc,
    reduce,
    reduce_many,
)
from .weierstrass import (
    COEFFICIENT_TABLE_SIZE,
    DEFAULT_POLE_GUARD,
    HALVING_FRACTION,
    laurent_coefficients,
    series_terms,
    wp,
    wp_pair_array,
    wp_prime,
)
from .zeros import find_wp_zeros, wp_zeros

__all__ = [
    "CellReduction",
    "Lattice",
    "equianharmonic_lattice",
    "lattice_points_in_disc",
    "reduce",
    "reduce_many",
    "COEFFICIENT_TABLE_SIZE",
    "DEFAULT_POLE_GUARD",
    "HALVING_FRACTION",
    "laurent_coefficients",
    "series_terms",
    "wp",
    "wp_pair_array",
    "wp_prime",
    "find_wp_zeros",
    "wp_zeros",
]
