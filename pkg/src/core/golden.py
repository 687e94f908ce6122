"""
Golden Tables

Published coefficient lists of f_3 .. f_12, stored in
``config/golden_series.yaml`` together with a sha256 checksum.
"""

import hashlib
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Union

import yaml

from .errors import GoldenChecksumError, PreconditionError


DEFAULT_GOLDEN_FILE = Path(__file__).parent.parent.parent / "config" / "golden_series.yaml"


@dataclass(frozen=True)
class GoldenSeries:
    n: int
    max_degree: int
    periodic_onset: int
    coefficients: tuple

    def canonical_line(self) -> str:
        coeffs = ",".join(str(c) for c in self.coefficients)
        return f"{self.n}|{self.max_degree}|{self.periodic_onset}|{coeffs}\n"


@dataclass(frozen=True)
class Mismatch:
    """First disagreement between a computed series and a golden table."""

    n: int
    degree: int
    expected: Optional[int]
    got: Optional[int]

    def __str__(self) -> str:
        return f"f_{self.n} mismatch: n={self.n}, degree={self.degree}, expected={self.expected}, got={self.got}"


@dataclass
class GoldenTable:
    series: Dict[int, GoldenSeries] = field(default_factory=dict)
    checksum: Optional[str] = None

    def compute_checksum(self) -> str:
        text = "".join(self.series[n].canonical_line() for n in sorted(self.series))
        return hashlib.sha256(text.encode("utf-8")).hexdigest()

    def checksum_ok(self) -> bool:
        return self.checksum is not None and self.checksum == self.compute_checksum()

    def ranks(self) -> List[int]:
        return sorted(self.series)

    def compare_with(self, n: int, coefficients: Sequence[int]) -> Optional[Mismatch]:
        """
        Compare coefficients of q^0 .. q^max_degree.

        Args:
            n: Rank of the golden series
            coefficients: Computed coefficients, index = q-degree

        Returns:
            The first mismatch, or None if every printed coefficient agrees
        """
        golden = self.series.get(n)
        if golden is None:
            raise PreconditionError(f"no golden series for n={n}")
        for degree, expected in enumerate(golden.coefficients):
            got = coefficients[degree] if degree < len(coefficients) else None
            if got != expected:
                return Mismatch(n=n, degree=degree, expected=expected, got=got)
        return None


def load_golden_table(path: Optional[Union[str, Path]] = None,
                      verify_checksum: bool = True) -> GoldenTable:
    """
    Load golden series from YAML.

    Raises:
        FileNotFoundError: if the file does not exist
        GoldenChecksumError: if ``verify_checksum`` is set and the data
            does not hash to the recorded checksum
    """
    path = Path(path) if path else DEFAULT_GOLDEN_FILE
    if not path.exists():
        raise FileNotFoundError(f"Golden table not found: {path}")
    with open(path, "r") as f:
        data = yaml.safe_load(f) or {}

    table = GoldenTable(checksum=data.get("checksum"))
    for entry in data.get("series", []):
        coefficients = tuple(int(c) for c in entry["coefficients"])
        golden = GoldenSeries(
            n=int(entry["n"]),
            max_degree=int(entry.get("max_degree", len(coefficients) - 1)),
            periodic_onset=int(entry["periodic_onset"]),
            coefficients=coefficients,
        )
        if golden.max_degree != len(coefficients) - 1:
            raise PreconditionError(
                f"golden f_{golden.n} lists {len(coefficients)} coefficients "
                f"but max_degree {golden.max_degree}")
        table.series[golden.n] = golden

    if verify_checksum and not table.checksum_ok():
        raise GoldenChecksumError(
            f"checksum mismatch in {path}: recorded {table.checksum}, computed {table.compute_checksum()}")
    return table
