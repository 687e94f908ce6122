"""
Abacus Module

Abacus diagrams of minimal length coset representatives. Position p sits on
runner ((p - 1) mod n) + 1; an abacus is stored by the position of the
lowest bead on each runner.
"""

from dataclasses import dataclass
from enum import Enum
from itertools import combinations
from typing import Iterator, List, Optional, Sequence, Tuple

from .affine import AffinePermutation
from .errors import PreconditionError


class AbacusClass(str, Enum):
    LONG = "long"
    SHORT = "short"


@dataclass(frozen=True)
class LMRProfile:
    """Counts of left, middle and right entries of a short abacus."""

    L: int
    M: int
    R: int

    def __str__(self) -> str:
        return f"({self.L})({self.M})({self.R})"


@dataclass(frozen=True)
class Abacus:
    """Lowest-bead positions, one per runner, kept sorted."""

    n: int
    lowest_beads: Tuple[int, ...]

    def __post_init__(self):
        beads = tuple(sorted(int(p) for p in self.lowest_beads))
        if len(beads) != self.n or len({p % self.n for p in beads}) != self.n:
            raise PreconditionError(f"{list(beads)} is not one lowest bead per runner for n={self.n}")
        object.__setattr__(self, "lowest_beads", beads)

    @classmethod
    def from_positions(cls, n: int, positions: Sequence[int]) -> "Abacus":
        return cls(n, tuple(positions))

    @property
    def normalized(self) -> bool:
        """Positions 1..n are beads and n+1 is the first gap."""
        return self.lowest_beads[0] == 1

    @property
    def last_bead(self) -> int:
        return self.lowest_beads[-1]

    def runner_of(self, position: int) -> int:
        return (position - 1) % self.n + 1

    def lowest_on_runner(self, runner: int) -> int:
        for p in self.lowest_beads:
            if self.runner_of(p) == runner:
                return p
        raise PreconditionError(f"runner {runner} outside 1..{self.n}")

    def is_bead(self, position: int) -> bool:
        return position <= self.lowest_on_runner(self.runner_of(position))

    def balance(self) -> "Abacus":
        """Shift so the lowest beads sum to n(n+1)/2."""
        return Abacus(self.n, to_coset_rep(self).window)


def abacus_from_coset_rep(w0: AffinePermutation) -> Abacus:
    """Balanced abacus whose lowest beads are the entries of a sorted window."""
    if list(w0.window) != sorted(w0.window):
        raise PreconditionError(f"window {list(w0.window)} is not sorted increasingly")
    return Abacus(w0.n, w0.window)


def to_coset_rep(a: Abacus) -> AffinePermutation:
    return AffinePermutation.from_shifted_window(a.n, a.lowest_beads)


def normalize(a: Abacus) -> Abacus:
    return Abacus(a.n, tuple(p + 1 - a.lowest_beads[0] for p in a.lowest_beads))


def abacus_length(a: Abacus) -> int:
    """Sum over runners of the gaps preceding the runner's lowest bead in reading order."""
    n = a.n
    total = 0
    for bead in a.lowest_beads:
        for other in a.lowest_beads:
            # gaps of the other runner sit at other + n, other + 2n, ...
            total += max(0, (bead - 1 - other) // n)
    return total


def _require_normalized(a: Abacus) -> None:
    if not a.normalized:
        raise PreconditionError("abacus is not normalized")


def classify(a: Abacus) -> AbacusClass:
    _require_normalized(a)
    return AbacusClass.LONG if a.last_bead > 2 * a.n else AbacusClass.SHORT


def is_fc_coset_rep(a: Abacus) -> bool:
    _require_normalized(a)
    last = a.last_bead
    return all(p <= a.n or p >= last - a.n + 1 for p in a.lowest_beads)


def lmr_profile(a: Abacus) -> LMRProfile:
    _require_normalized(a)
    if classify(a) is not AbacusClass.SHORT or not is_fc_coset_rep(a):
        raise PreconditionError("(L)(M)(R) typing needs a short fully commutative abacus")
    n = a.n
    right = [p for p in a.lowest_beads if p > n]
    j = right[-1] - n if right else n
    middle = sum(1 for p in a.lowest_beads if j + 1 <= p <= n)
    return LMRProfile(L=n - middle - len(right), M=middle, R=len(right))


def entry_statuses(a: Abacus) -> List[str]:
    """'L', 'M' or 'R' for each lowest bead in increasing order."""
    profile = lmr_profile(a)
    return ["L"] * profile.L + ["M"] * profile.M + ["R"] * profile.R


def _abacus_with_right_beads(n: int, right_beads: Sequence[int]) -> Abacus:
    replaced = {p - n for p in right_beads}
    beads = [p for p in range(1, n + 1) if p not in replaced] + list(right_beads)
    return Abacus(n, tuple(beads))


def lmr_abaci(L: int, M: int, R: int) -> Iterator[Abacus]:
    """
    All normalized (L)(M)(R) abaci with R > 0.

    The last bead sits at 2n - M; the other R - 1 right beads range over
    n+2 .. 2n-M-1 in lexicographic order.
    """
    if L < 1 or M < 0 or R < 1:
        raise PreconditionError(f"invalid profile ({L})({M})({R})")
    n = L + M + R
    last = 2 * n - M
    for free in combinations(range(n + 2, last), R - 1):
        yield _abacus_with_right_beads(n, free + (last,))


def all_short_abaci(n: int) -> Iterator[Abacus]:
    """Every normalized short abacus, the right beads being any subset of n+2..2n."""
    candidates = range(n + 2, 2 * n + 1)
    for size in range(len(candidates) + 1):
        for right in combinations(candidates, size):
            yield _abacus_with_right_beads(n, right)


def render(a: Abacus, labels: bool = False, margin: Optional[int] = None) -> str:
    """
    ASCII strip, one line per level, runners left to right.

    'O' marks a bead and '.' a gap; the strip spans from one level below the
    lowest bead to one level above the last bead.
    """
    n = a.n
    margin = n if margin is None else margin
    low = a.lowest_beads[0] - margin
    high = a.last_bead + margin
    first_level = (low - 1) // n
    last_level = (high - 1) // n
    width = max(len(str(low)), len(str(high)))
    lines = []
    for level in range(first_level, last_level + 1):
        cells = []
        for runner in range(1, n + 1):
            position = level * n + runner
            mark = "O" if a.is_bead(position) else "."
            cells.append(f"{position:>{width}}{mark}" if labels else mark)
        lines.append(" ".join(cells))
    return "\n".join(lines)
