from __future__ import annotations

import cmath
import math

import mpmath
import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from fermatfe.elliptic import (
    find_wp_zeros,
    laurent_coefficients,
    lattice_points_in_disc,
    reduce,
    wp,
    wp_pair_array,
    wp_prime,
    wp_zeros,
)
from fermatfe.errors import PoleOverflowError

SIXTH_ROOT = cmath.exp(1j * math.pi / 3.0)

coordinates = st.floats(min_value=-4.0, max_value=4.0, allow_nan=False)


def _relative(a: complex, b: complex) -> float:
    return abs(a - b) / max(abs(a), abs(b), 1.0)


def test_half_period_matches_gamma_closed_form(lattice):
    expected = math.gamma(1.0 / 3.0) ** 3 / (4.0 * math.pi)
    assert lattice.half_period == pytest.approx(expected, rel=1e-12)
    assert lattice.half_period == pytest.approx(1.52995, abs=1e-5)


def test_half_period_matches_high_precision_quadrature(lattice):
    with mpmath.workdps(30):
        e1 = mpmath.mpf(4) ** (-mpmath.mpf(1) / 3)
        integral = mpmath.quad(lambda t: 1 / mpmath.sqrt(4 * t**3 - 1), [e1, 2, mpmath.inf])
    assert abs(lattice.half_period - float(integral)) < 1e-12


def test_lattice_geometry(lattice):
    assert lattice.omega1.imag == 0.0 and lattice.omega1.real > 0
    assert lattice.omega1 == pytest.approx(2.0 * lattice.half_period, rel=1e-15)
    assert lattice.omega2 == pytest.approx(lattice.omega1 * SIXTH_ROOT, rel=1e-15)
    assert lattice.area == pytest.approx(abs(lattice.omega1) ** 2 * math.sqrt(3.0) / 2.0)
    assert lattice.e1 == pytest.approx(4.0 ** (-1.0 / 3.0), rel=1e-15)
    assert lattice.circumradius == pytest.approx(abs(lattice.omega1) / math.sqrt(3.0))


def test_laurent_coefficients():
    c = laurent_coefficients()
    assert c[2] == 0.0
    assert c[3] == pytest.approx(1.0 / 28.0, rel=1e-15)
    assert c[4] == 0.0 and c[5] == 0.0
    assert c[6] == pytest.approx(1.0 / 10192.0, rel=1e-14)
    nonzero = np.flatnonzero(c)
    assert np.all(nonzero % 3 == 0)


def test_half_periods_are_the_roots_of_the_cubic(lattice):
    assert wp(lattice.half_period) == pytest.approx(lattice.e1, rel=1e-12)
    assert abs(wp_prime(lattice.half_period)) < 1e-10
    other = wp(lattice.omega2 / 2.0)
    assert abs(4.0 * other**3 - 1.0) < 1e-11
    assert abs(other - lattice.e1) > 0.5
    assert abs(wp_prime(lattice.omega2 / 2.0)) < 1e-10


def test_behaves_like_inverse_square_near_origin():
    for z in (1e-3, 1e-3j, 2e-4 * SIXTH_ROOT):
        assert _relative(wp(z), 1.0 / z**2) < 1e-12
        assert _relative(wp_prime(z), -2.0 / z**3) < 1e-12


def test_differential_equation_holds_on_a_thousand_points(rng):
    z = (rng.random(1000) - 0.5) * 12.0 + 1j * (rng.random(1000) - 0.5) * 12.0
    value, slope = wp_pair_array(z)
    finite = np.isfinite(value)
    assert finite.sum() >= 999
    value, slope = value[finite], slope[finite]
    magnitudes = [np.abs(slope) ** 2, 4.0 * np.abs(value) ** 3, np.ones(value.size)]
    scale = np.maximum.reduce(magnitudes)
    residual = np.abs(slope**2 - 4.0 * value**3 + 1.0) / scale
    assert residual.max() < 1e-9


def test_poles_raise_in_scalar_evaluation(lattice):
    for point in (0j, lattice.omega1, lattice.omega1 + lattice.omega2, -2.0 * lattice.omega2):
        with pytest.raises(PoleOverflowError):
            wp(point)
        with pytest.raises(PoleOverflowError):
            wp_prime(point)


def test_pole_guard_masks_only_points_inside_it(lattice):
    z = np.array([1e-7, lattice.omega1 + 1e-7j, 1e-5, 1.0])
    value, slope = wp_pair_array(z, pole_guard=1e-6)
    assert np.isnan(value[:2]).all() and np.isnan(slope[:2]).all()
    assert np.isfinite(value[2:]).all()
    assert value[2] == pytest.approx(1e10, rel=1e-9)


def test_zeros_are_the_honeycomb_points(lattice):
    zeros = wp_zeros()
    assert len(zeros) == 2
    centre = (lattice.omega1 + lattice.omega2) / 3.0
    expected = [centre, 2.0 * centre]
    for zero, target in zip(zeros, expected):
        assert abs(wp(zero)) < 1e-10
        assert abs(reduce(zero - target, lattice).reduced) < 1e-9
        assert abs(wp_prime(zero) ** 2 + 1.0) < 1e-9


def test_zero_search_is_stable_across_grids(lattice):
    coarse = find_wp_zeros(lattice, grid=4)
    assert len(coarse) == 2
    for a, b in zip(coarse, wp_zeros()):
        assert abs(reduce(a - b, lattice).reduced) < 1e-9


def test_lattice_points_in_disc_matches_brute_force(lattice):
    centre = 1.0 + 2.0j
    radius = 10.0
    found = lattice_points_in_disc(lattice, radius, center=centre)
    brute = [
        m * lattice.omega1 + n * lattice.omega2
        for m in range(-12, 13)
        for n in range(-12, 13)
        if abs(m * lattice.omega1 + n * lattice.omega2 - centre) <= radius
    ]
    assert len(found) == len(brute)
    for point in brute:
        assert np.min(np.abs(found - point)) < 1e-12


def test_reduce_a_period_lands_on_the_origin(lattice):
    cell = reduce(lattice.omega1, lattice)
    assert abs(cell.reduced) < 1e-12
    assert cell.lattice_point == pytest.approx(lattice.omega1, abs=1e-12)
    assert (cell.m, cell.n) == (1, 0)


def test_reduce_picks_the_nearest_lattice_point(lattice):
    z = 0.49 * lattice.omega1
    candidates = [
        (abs(z - m * lattice.omega1 - n * lattice.omega2), m, n)
        for m in range(-3, 4)
        for n in range(-3, 4)
    ]
    _, m, n = min(candidates)
    cell = reduce(z, lattice)
    assert (cell.m, cell.n) == (m, n) == (0, 0)
    assert cell.reduced == pytest.approx(z, abs=1e-12)


def test_reduce_breaks_ties_by_lattice_index(lattice):
    centre = (lattice.omega1 + lattice.omega2) / 3.0
    first = reduce(centre, lattice)
    assert (first.m, first.n) == (0, 0)
    assert first.lattice_point == 0
    # 2·centre is equidistant from ω₂, ω₁ and ω₁ + ω₂
    second = reduce(2.0 * centre, lattice)
    assert (second.m, second.n) == (0, 1)


def test_lattice_points_in_disc_rejects_negative_radius(lattice):
    with pytest.raises(ValueError):
        lattice_points_in_disc(lattice, -1.0)


@settings(max_examples=150, deadline=None)
@given(coordinates, coordinates)
def test_reduction_lands_in_the_hexagonal_cell(lattice, x, y):
    z = complex(x, y)
    cell = reduce(z, lattice)
    assert abs(cell.reduced) <= lattice.circumradius * (1.0 + 1e-11)
    assert abs(cell.reduced + cell.lattice_point - z) < 1e-12
    assert abs(cell.m * lattice.omega1 + cell.n * lattice.omega2 - cell.lattice_point) < 1e-12


@settings(max_examples=150, deadline=None)
@given(coordinates, coordinates)
def test_parity_periodicity_and_rotation(lattice, x, y):
    z = complex(x, y)
    assume(abs(reduce(z, lattice).reduced) > 0.05)
    value, slope = wp(z), wp_prime(z)
    assert _relative(wp(-z), value) < 1e-10
    assert _relative(wp_prime(-z), -slope) < 1e-10
    assert _relative(wp(z + lattice.omega1), value) < 1e-9
    assert _relative(wp(z - lattice.omega2), value) < 1e-9
    # rotating by a sixth root of unity maps the lattice to itself
    assert _relative(wp(SIXTH_ROOT * z), value / SIXTH_ROOT**2) < 1e-9
