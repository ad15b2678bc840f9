from __future__ import annotations

import pytest
from sqlalchemy import inspect, select

from fermatfe.nevanlinna import GrowthCurve, GrowthRecord, OrderEstimate
from fermatfe.store.db import create_db, get_engine, get_session
from fermatfe.store.models import GrowthPoint
from fermatfe.store.repo import StoreRepository
from fermatfe.verify import ResidualReport


@pytest.fixture
def engine(tmp_path):
    db_path = tmp_path / "store.db"
    engine = get_engine(db_path)
    create_db(engine)
    return engine


@pytest.fixture
def repo(engine):
    with get_session(engine) as session:
        yield StoreRepository(session)


def _report(equation: str, passed: bool, max_rel: float) -> ResidualReport:
    return ResidualReport(
        equation=equation,
        samples=500,
        max_rel=max_rel,
        mean_rel=max_rel / 10.0,
        worst_point=0.5 + 0.25j,
        tolerance=1e-10,
        passed=passed,
        parameters={"alpha": 3 + 0j},
        config={"seed": 20240611},
    )


def _curve() -> GrowthCurve:
    records = tuple(GrowthRecord(r=r, m=r / 3.0, N=0.0, T=r / 3.0) for r in (5.0, 10.0, 20.0))
    return GrowthCurve(records, label="exp")


def test_schema_created(engine):
    inspector = inspect(engine)
    table_names = set(inspector.get_table_names())
    assert {"verification_runs", "growth_runs", "growth_points"}.issubset(table_names)


def test_verification_runs_round_trip(repo):
    stored = repo.add_verification_run(_report("ode n=3", True, 1e-14))
    assert stored.id is not None
    assert stored.created_at is not None
    assert stored.report["pass"] is True
    assert stored.report["worst_point"] == [0.5, 0.25]
    assert stored.report["parameters"]["alpha"] == [3.0, 0.0]


def test_verification_runs_filter_by_outcome(repo):
    repo.add_verification_run(_report("ode n=3", True, 1e-14))
    repo.add_verification_run(_report("shift identity", False, 0.4))
    repo.add_verification_run(_report("unit n=2", True, 1e-13))
    assert len(repo.list_verification_runs()) == 3
    failed = repo.list_verification_runs(passed=False)
    assert [run.equation for run in failed] == ["shift identity"]
    assert len(repo.list_verification_runs(passed=True)) == 2


def test_growth_run_keeps_points_in_radius_order(repo):
    fit = OrderEstimate(rho=1.0, sse=1e-6, intercept=-1.14, fit_radii=[10.0, 20.0])
    run = repo.add_growth_run(_curve(), fit)
    fetched = repo.get_growth_run(run.id)
    assert fetched is not None
    assert fetched.label == "exp"
    assert [point.r for point in fetched.points] == [5.0, 10.0, 20.0]
    assert fetched.points[1].T == pytest.approx(10.0 / 3.0)
    assert fetched.order_fit["rho"] == 1.0
    assert fetched.order_fit["superpolynomial"] is False


def test_growth_run_without_order_fit(repo):
    run = repo.add_growth_run(_curve())
    assert run.order_fit is None
    assert len(repo.list_growth_runs()) == 1


def test_deleting_growth_run_removes_its_points(repo):
    run = repo.add_growth_run(_curve())
    assert len(repo.session.scalars(select(GrowthPoint)).all()) == 3
    assert repo.delete_growth_run(run.id)
    assert repo.get_growth_run(run.id) is None
    assert repo.session.scalars(select(GrowthPoint)).all() == []
    assert not repo.delete_growth_run(run.id)
