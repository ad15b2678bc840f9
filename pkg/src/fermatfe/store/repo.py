from __future__ import annotations

from typing import Iterable, Optional

from sqlalchemy import select
from sqlalchemy.orm import Session

from fermatfe.jsonio import to_jsonable
from fermatfe.nevanlinna import GrowthCurve, OrderEstimate
from fermatfe.verify import ResidualReport

from .models import GrowthPoint, GrowthRun, VerificationRun


class StoreRepository:
    """Minimal repository for recorded verification and growth runs."""

    def __init__(self, session: Session):
        self.session = session

    # VerificationRun
    def add_verification_run(self, report: ResidualReport) -> VerificationRun:
        run = VerificationRun(
            equation=report.equation,
            passed=report.passed,
            max_rel=report.max_rel,
            mean_rel=report.mean_rel,
            tolerance=report.tolerance,
            samples=report.samples,
            report=to_jsonable(report.to_dict()),
        )
        self.session.add(run)
        return self._commit_and_refresh(run)

    def list_verification_runs(
        self, *, passed: Optional[bool] = None
    ) -> Iterable[VerificationRun]:
        stmt = select(VerificationRun).order_by(VerificationRun.id)
        if passed is not None:
            stmt = stmt.where(VerificationRun.passed == passed)
        return self.session.scalars(stmt).all()

    # GrowthRun
    def add_growth_run(
        self, curve: GrowthCurve, order_fit: Optional[OrderEstimate] = None
    ) -> GrowthRun:
        run = GrowthRun(
            label=curve.label,
            order_fit=to_jsonable(order_fit.to_dict()) if order_fit else None,
        )
        run.points = [
            GrowthPoint(r=record.r, m=record.m, N=record.N, T=record.T)
            for record in curve.records
        ]
        self.session.add(run)
        return self._commit_and_refresh(run)

    def get_growth_run(self, run_id: int) -> Optional[GrowthRun]:
        return self.session.get(GrowthRun, run_id)

    def list_growth_runs(self) -> Iterable[GrowthRun]:
        return self.session.scalars(select(GrowthRun).order_by(GrowthRun.id)).all()

    def delete_growth_run(self, run_id: int) -> bool:
        run = self.get_growth_run(run_id)
        if not run:
            return False
        self.session.delete(run)
        self._commit()
        return True

    # Helpers
    def _commit(self) -> None:
        self.session.commit()

    def _commit_and_refresh(self, obj):
        self.session.commit()
        self.session.refresh(obj)
        return obj
