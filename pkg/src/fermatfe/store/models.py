from __future__ import annotations

from datetime import datetime, timezone
from typing import Optional

from sqlalchemy import JSON, Boolean, DateTime, Float, ForeignKey, Integer, String
from sqlalchemy.orm import DeclarativeBase, Mapped, mapped_column, relationship


class Base(DeclarativeBase):
    """Declarative base for the run store."""

    created_at: Mapped[datetime] = mapped_column(
        DateTime(timezone=True), default=lambda: datetime.now(timezone.utc)
    )
    updated_at: Mapped[datetime] = mapped_column(
        DateTime(timezone=True),
        default=lambda: datetime.now(timezone.utc),
        onupdate=lambda: datetime.now(timezone.utc),
    )


class VerificationRun(Base):
    __tablename__ = "verification_runs"

    id: Mapped[int] = mapped_column(Integer, primary_key=True, autoincrement=True)
    equation: Mapped[str] = mapped_column(String, nullable=False)
    passed: Mapped[bool] = mapped_column(Boolean, nullable=False)
    max_rel: Mapped[float] = mapped_column(Float, nullable=False)
    mean_rel: Mapped[float] = mapped_column(Float, nullable=False)
    tolerance: Mapped[float] = mapped_column(Float, nullable=False)
    samples: Mapped[int] = mapped_column(Integer, nullable=False)
    report: Mapped[dict] = mapped_column(JSON, nullable=False, default=dict)


class GrowthRun(Base):
    __tablename__ = "growth_runs"

    id: Mapped[int] = mapped_column(Integer, primary_key=True, autoincrement=True)
    label: Mapped[str] = mapped_column(String, nullable=False)
    order_fit: Mapped[Optional[dict]] = mapped_column(JSON, nullable=True, default=None)

    points: Mapped[list["GrowthPoint"]] = relationship(
        back_populates="run",
        cascade="all, delete-orphan",
        order_by="GrowthPoint.r",
    )


class GrowthPoint(Base):
    __tablename__ = "growth_points"

    id: Mapped[int] = mapped_column(Integer, primary_key=True, autoincrement=True)
    run_id: Mapped[int] = mapped_column(
        ForeignKey("growth_runs.id", ondelete="CASCADE"), nullable=False
    )
    r: Mapped[float] = mapped_column(Float, nullable=False)
    m: Mapped[float] = mapped_column(Float, nullable=False)
    N: Mapped[float] = mapped_column(Float, nullable=False)
    T: Mapped[float] = mapped_column(Float, nullable=False)

    run: Mapped["GrowthRun"] = relationship(back_populates="points")
