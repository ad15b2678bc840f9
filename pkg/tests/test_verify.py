from __future__ import annotations

import cmath
import math

import numpy as np
import pytest

from fermatfe.errors import ConstraintViolationError, TooManyRejectionsError
from fermatfe.expr import WP, Constant, Exp, Pow, Z
from fermatfe.families import (
    FamilyKind,
    FamilySpec,
    admissible_scale_diff,
    admissible_scale_ode,
    eq5_forms,
    generate,
    prop1_unit_pair,
)
from fermatfe.verify import (
    ResidualProblem,
    SamplePlan,
    check_eq6,
    check_eq7,
    draw_points,
    relative_residuals,
    residual_difference,
    residual_ode,
    residual_unit,
    run_problem,
    shift_factor,
    verify_family,
)

OMEGA3 = cmath.exp(2j * math.pi / 3.0)
DISC_2 = SamplePlan(r_min=0.0, r_max=2.0)
DISC_3 = SamplePlan(r_min=0.0, r_max=3.0)
DISC_1 = SamplePlan(r_min=0.0, r_max=1.0)
STRICT = 1e-10


def _verify(spec: FamilySpec, plan: SamplePlan | None = None, tolerance: float = STRICT):
    return verify_family(generate(spec), plan or SamplePlan(), tolerance=tolerance)


@pytest.mark.parametrize("eta", [1, OMEGA3, OMEGA3.conjugate()])
def test_cubic_unit_pair_over_a_thousand_points(eta):
    f, g = prop1_unit_pair(3, Z, eta)
    report = residual_unit(f, g, 3, SamplePlan(count=1000), tolerance=1e-9)
    assert report.samples == 1000
    assert report.passed, report.to_dict()


def test_square_unit_pair_through_mobius():
    report = _verify(FamilySpec(FamilyKind.PROP1A, n=2, h=Exp(Z) * 0.3), DISC_1)
    assert report.passed, report.to_dict()


@pytest.mark.parametrize("alpha", [0, 1, 2j])
def test_linear_ode_family(alpha):
    report = _verify(FamilySpec(FamilyKind.THM2A, n=1, alpha=alpha, beta=0.25, a=5))
    assert report.passed, report.to_dict()
    assert report.parameters["family"] == "Thm2A"


def test_linear_ode_resonant_branch():
    report = _verify(FamilySpec(FamilyKind.THM2A_DEGENERATE, n=1, alpha=-1, beta=0.5, a=-2))
    assert report.passed, report.to_dict()


def test_square_ode_both_branches():
    trig = _verify(FamilySpec(FamilyKind.THM2B_TRIG, n=2, beta=0.5, b=0.3))
    assert trig.passed, trig.to_dict()
    for d in admissible_scale_ode(2, 1):
        scaled = _verify(FamilySpec(FamilyKind.THM2_SCALED_EXP, n=2, alpha=1, d=d))
        assert scaled.passed, scaled.to_dict()


@pytest.mark.parametrize("n", [3, 4, 5])
def test_scaled_exponential_for_every_admissible_scale(n):
    roots = admissible_scale_ode(n, 1)
    assert len(roots) == n
    for d in roots:
        report = _verify(FamilySpec(FamilyKind.THM2_SCALED_EXP, n=n, alpha=1, beta=0.2, d=d))
        assert report.passed, report.to_dict()


def test_cubic_scaled_exponential_with_alpha_three():
    report = _verify(FamilySpec(FamilyKind.THM2_SCALED_EXP, n=3, alpha=3))
    assert report.passed
    assert report.mean_rel <= report.max_rel


@pytest.mark.parametrize("n", [3, 5])
def test_trivial_difference_family(n):
    for d in admissible_scale_diff(n, 2, math.pi * 1j):
        spec = FamilySpec(FamilyKind.DIFF_TRIVIAL, n=n, alpha=2, c=math.pi * 1j, d=d)
        report = _verify(spec)
        assert report.passed, report.to_dict()


def test_example_four_on_the_disc_of_radius_two():
    spec = FamilySpec(FamilyKind.EXAMPLE4, n=3, alpha=2, eta=OMEGA3)
    report = _verify(spec, DISC_2, tolerance=1e-8)
    assert report.passed, report.to_dict()


def test_cubic_pair_family():
    spec = FamilySpec(FamilyKind.EQ5_PAIR, n=3, alpha=1 + 1j, beta=0.3, h=Z, eta=OMEGA3)
    report = _verify(spec, tolerance=1e-9)
    assert report.passed, report.to_dict()


def test_example_five_first_form():
    report = _verify(FamilySpec(FamilyKind.EXAMPLE5A, n=2, alpha=4j), DISC_3)
    assert report.passed, report.to_dict()


def test_example_six_first_form():
    report = _verify(FamilySpec(FamilyKind.EXAMPLE6A, n=1, alpha=2), DISC_3)
    assert report.passed, report.to_dict()


@pytest.mark.parametrize(
    "spec",
    [
        FamilySpec(FamilyKind.EXAMPLE5B, n=2, alpha=4j),
        FamilySpec(FamilyKind.EXAMPLE6B, n=1, alpha=2),
    ],
    ids=["sine-of-exponential", "exponential-of-exponential"],
)
def test_infinite_order_examples_on_the_unit_disc(spec):
    report = _verify(spec, DISC_1)
    assert report.passed, report.to_dict()


@pytest.mark.parametrize("alpha", [0, math.pi * 1j])
def test_anti_periodic_family_both_branches(alpha):
    delta = Exp(Z * (math.pi * 1j))
    spec = FamilySpec(FamilyKind.ANTI_PERIODIC_N1, n=1, alpha=alpha, beta=0.1, c=1, delta=delta)
    report = _verify(spec, DISC_2)
    assert report.passed, report.to_dict()


def test_shift_identity_for_example_four():
    report = check_eq6(Exp(Z), math.pi * 1j, OMEGA3, 2, DISC_2, root_index=1, tolerance=1e-8)
    assert report.passed, report.to_dict()
    assert report.parameters["shift_factor"] == pytest.approx(OMEGA3)


def test_shift_factor_branches():
    assert shift_factor(2, math.pi * 1j, 0) == pytest.approx(1.0)
    assert shift_factor(2, math.pi * 1j, 1) == pytest.approx(OMEGA3)
    assert shift_factor(3, 1, 0) == pytest.approx(math.e)


def test_cubic_rearrangement_identity():
    f, _ = eq5_forms(Exp(Z), 1, 2, 0)
    report = check_eq7(f, Exp(Z), 2, 0, DISC_2, tolerance=1e-8)
    assert report.passed, report.to_dict()
    f, _ = eq5_forms(Z, 1, 0, 0)
    report = check_eq7(f, Z, 0, 0, tolerance=1e-9)
    assert report.passed, report.to_dict()


def test_wrong_shift_identity_fails_by_a_wide_margin(lattice):
    report = check_eq6(Z, lattice.omega1, 1, 0, tolerance=1e-8)
    assert not report.passed
    assert report.margin >= 1e6


def test_wrong_rearrangement_fails_by_a_wide_margin():
    report = check_eq7(Exp(Z), Z, 0, 0, tolerance=1e-8)
    assert not report.passed
    assert report.margin >= 1e6


def test_wrong_scale_fails_by_a_wide_margin():
    f = Exp(Z) * 0.9
    report = residual_ode(f, 3, 3, 0, tolerance=1e-8)
    assert not report.passed
    assert report.margin >= 1e6


def test_wrong_shift_fails_by_a_wide_margin():
    family = generate(FamilySpec(FamilyKind.EXAMPLE6A, n=1, alpha=2))
    report = residual_difference(family.f, 1, 2, 0, 1.0, DISC_3, tolerance=1e-8)
    assert report.margin >= 1e6


def test_shift_identity_flags_samples_near_zeros_of_the_shifted_form():
    plan = SamplePlan(r_min=0.0, r_max=2.0, pole_guard=1e-2)
    report = check_eq6(Exp(Z), math.pi * 1j, OMEGA3, 2, plan, root_index=1, tolerance=1e-8)
    assert report.flagged > 0
    assert report.flagged <= report.samples


def test_zero_shift_is_rejected():
    with pytest.raises(ConstraintViolationError):
        check_eq6(Exp(Z), 0, 1, 2)
    with pytest.raises(ConstraintViolationError):
        residual_difference(Exp(Z), 1, 1, 0, 0)


def test_shift_identity_rejects_eta_off_the_unit_cube_roots():
    with pytest.raises(ConstraintViolationError):
        check_eq6(Exp(Z), math.pi * 1j, 2, 2)


def test_same_seed_gives_identical_reports():
    spec = FamilySpec(FamilyKind.PROP1B, n=3, h=Z)
    first = _verify(spec, SamplePlan(seed=7), tolerance=1e-9)
    second = _verify(spec, SamplePlan(seed=7), tolerance=1e-9)
    assert first.to_dict() == second.to_dict()
    other = _verify(spec, SamplePlan(seed=8), tolerance=1e-9)
    assert other.worst_point != first.worst_point


def test_negative_seed_is_accepted():
    report = _verify(FamilySpec(FamilyKind.THM2_SCALED_EXP, n=3, alpha=3), SamplePlan(seed=-5))
    assert report.config["seed"] == -5


def test_larger_pole_guard_never_raises_the_maximum():
    f, g = prop1_unit_pair(3, Z)
    problem = ResidualProblem("unit n=3", (Pow(f, 3), Pow(g, 3)), Constant(1))
    plan = SamplePlan(count=2000)
    points = draw_points(plan.generator(), plan, plan.count)
    loose, _ = relative_residuals(problem, points, pole_guard=1e-6)
    tight, _ = relative_residuals(problem, points, pole_guard=1e-1)
    kept_tight = ~np.isnan(tight)
    kept_loose = ~np.isnan(loose)
    assert np.all(kept_loose[kept_tight])
    assert kept_tight.sum() <= kept_loose.sum()
    assert np.nanmax(tight) <= np.nanmax(loose)


def test_sampler_covers_the_requested_annulus():
    plan = SamplePlan(r_min=0.5, r_max=3.0, count=4000, seed=3)
    points = draw_points(plan.generator(), plan, plan.count)
    radius = np.abs(points)
    assert radius.min() >= 0.5 and radius.max() <= 3.0
    # uniform in area: a quarter of the area lies below sqrt(0.25 + 0.25 * 8.75)
    inner = np.sqrt(0.25 + 0.25 * (9.0 - 0.25))
    assert abs(np.mean(radius <= inner) - 0.25) < 0.03


def test_every_sample_rejected_raises():
    problem = ResidualProblem("hopeless", (Pow(Constant(0), -1),), Constant(1))
    with pytest.raises(TooManyRejectionsError):
        run_problem(problem, SamplePlan(count=10))


def test_guarded_samples_are_resampled_and_counted():
    problem = ResidualProblem("wp", (WP(Z),), WP(Z))
    report = run_problem(problem, SamplePlan(r_min=0.0, r_max=0.5, count=200, pole_guard=0.2))
    assert report.samples == 200
    assert report.rejected > 0
    assert report.max_rel == 0.0


@pytest.mark.parametrize(
    "kwargs",
    [
        {"r_min": 2.0, "r_max": 1.0},
        {"r_min": -1.0},
        {"count": 0},
        {"pole_guard": 0.0},
        {"seed": 1.5},
    ],
)
def test_sample_plan_validation(kwargs):
    with pytest.raises(ConstraintViolationError):
        SamplePlan(**kwargs)


def test_report_serializes_pass_flag():
    report = _verify(FamilySpec(FamilyKind.THM2_SCALED_EXP, n=3, alpha=3))
    payload = report.to_dict()
    assert payload["pass"] is True
    assert payload["config"]["count"] == 500
    assert payload["samples"] == 500
