from .db import create_db, get_engine, get_session
from .models import Base, GrowthPoint, GrowthRun, VerificationRun
from .repo import StoreRepository

__all__ = [
    "create_db",
    "get_engine",
    "get_session",
    "Base",
    "GrowthPoint",
    "GrowthRun",
    "VerificationRun",
    "StoreRepository",
]
