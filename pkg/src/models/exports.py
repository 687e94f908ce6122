"""
Export models

Every count is a decimal string so consumers limited to 53-bit numbers
cannot corrupt it.
"""

from typing import List, Optional

from pydantic import BaseModel, ConfigDict, Field


class SeriesExport(BaseModel):
    """Coefficients of f_n(q)."""
    n: int
    q_cap: int
    source: str = "formula"
    coefficients: List[str] = Field(default_factory=list)

    model_config = ConfigDict(json_schema_extra={
        "example": {"n": 3, "q_cap": 4, "source": "formula",
                    "coefficients": ["1", "3", "6", "6", "6"]}
    })


class LengthRow(BaseModel):
    l: int
    total: Optional[str] = None
    fc: str


class HistogramExport(BaseModel):
    """Breadth-first search counts; total is null when only FC elements were expanded."""
    n: int
    lengths: List[LengthRow] = Field(default_factory=list)

    @classmethod
    def from_histogram(cls, histogram) -> "HistogramExport":
        return cls(
            n=histogram.n,
            lengths=[
                LengthRow(l=length, total=None if total is None else str(total), fc=str(fc))
                for length, (total, fc) in enumerate(histogram.counts)
            ],
        )


class PeriodicityExport(BaseModel):
    n: int
    period: int
    onset: int
    tail: List[str]
    conjectured_onset: int
    guaranteed_onset: int
    matches_conjecture: bool

    @classmethod
    def from_report(cls, report) -> "PeriodicityExport":
        return cls(
            n=report.n,
            period=report.period,
            onset=report.onset,
            tail=[str(c) for c in report.tail],
            conjectured_onset=report.conjectured_onset,
            guaranteed_onset=report.guaranteed_onset,
            matches_conjecture=report.matches_conjecture,
        )


class AbacusExport(BaseModel):
    n: int
    balanced: List[int]
    normalized: List[int]
    length: int
    classification: str
    fully_commutative: bool
    profile: Optional[str] = None


class ClassificationExport(BaseModel):
    n: int
    window: List[int]
    length: int
    fully_commutative: bool
    coset_representative: List[int]
    finite_factor: List[int]
    right_descents: List[int]
    left_descents: List[int]
    abacus_class: str
    profile: Optional[str] = None


class StatRow(BaseModel):
    size: int
    inversions: int
    left_run: int
    right_run: int
    descents: int
    count: str


class StatsExport(BaseModel):
    max_size: int
    rows: List[StatRow] = Field(default_factory=list)
