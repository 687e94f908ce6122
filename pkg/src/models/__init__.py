"""Serializable export and report models."""

from .exports import (
    AbacusExport,
    ClassificationExport,
    HistogramExport,
    LengthRow,
    PeriodicityExport,
    SeriesExport,
    StatRow,
    StatsExport,
)
from .reports import CheckResult, CheckStatus, VerificationReport

__all__ = [
    "AbacusExport",
    "ClassificationExport",
    "HistogramExport",
    "LengthRow",
    "PeriodicityExport",
    "SeriesExport",
    "StatRow",
    "StatsExport",
    "CheckResult",
    "CheckStatus",
    "VerificationReport",
]
