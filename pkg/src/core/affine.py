"""
Affine Permutation Module

Elements of the affine symmetric group in window notation, with complete
notation w(i + n) = w(i) + n.
"""

from dataclasses import dataclass
from enum import Enum
from typing import FrozenSet, Iterable, List, Sequence, Tuple

from .errors import PreconditionError


class Side(str, Enum):
    """Which side a generator acts on."""
    LEFT = "left"
    RIGHT = "right"


@dataclass(frozen=True)
class FinitePermutation:
    """Permutation of 1..n in one-line notation."""

    one_line: Tuple[int, ...]

    def __post_init__(self):
        one_line = tuple(int(v) for v in self.one_line)
        if sorted(one_line) != list(range(1, len(one_line) + 1)):
            raise PreconditionError(f"{list(one_line)} is not a permutation of 1..{len(one_line)}")
        object.__setattr__(self, "one_line", one_line)

    @classmethod
    def identity(cls, n: int) -> "FinitePermutation":
        return cls(tuple(range(1, n + 1)))

    @property
    def size(self) -> int:
        return len(self.one_line)

    def inversions(self) -> int:
        values = self.one_line
        return sum(1 for i in range(len(values)) for j in range(i + 1, len(values))
                   if values[i] > values[j])

    def contains_321(self) -> bool:
        """True if some i < j < k has values decreasing."""
        values = self.one_line
        size = len(values)
        for j in range(1, size - 1):
            middle = values[j]
            if max(values[:j]) > middle and min(values[j + 1:]) < middle:
                return True
        return False

    def descents(self) -> List[int]:
        """Positions d (1-based) with w(d) > w(d+1)."""
        values = self.one_line
        return [d + 1 for d in range(len(values) - 1) if values[d] > values[d + 1]]

    def embed(self) -> "AffinePermutation":
        return AffinePermutation(self.size, self.one_line)

    def __str__(self) -> str:
        return render_window(self.one_line)


@dataclass(frozen=True)
class AffinePermutation:
    """
    Affine permutation of rank n given by its base window [w(1), ..., w(n)].

    The window has pairwise distinct residues mod n and sums to n(n+1)/2.
    """

    n: int
    window: Tuple[int, ...]

    def __post_init__(self):
        window = tuple(int(v) for v in self.window)
        if self.n < 2:
            raise PreconditionError(f"rank must be at least 2, got {self.n}")
        if len(window) != self.n:
            raise PreconditionError(f"window {list(window)} does not have {self.n} entries")
        if len({v % self.n for v in window}) != self.n:
            raise PreconditionError(f"window {list(window)} repeats a residue mod {self.n}")
        if sum(window) != self.n * (self.n + 1) // 2:
            raise PreconditionError(
                f"window {list(window)} sums to {sum(window)}, expected {self.n * (self.n + 1) // 2}")
        object.__setattr__(self, "window", window)

    @classmethod
    def identity(cls, n: int) -> "AffinePermutation":
        return cls(n, tuple(range(1, n + 1)))

    @classmethod
    def from_shifted_window(cls, n: int, values: Sequence[int]) -> "AffinePermutation":
        """Shift a distinct-residue window by a constant so it sums to n(n+1)/2."""
        excess = sum(values) - n * (n + 1) // 2
        if excess % n:
            raise PreconditionError(f"window {list(values)} cannot be balanced for n={n}")
        shift = excess // n
        return cls(n, tuple(v - shift for v in values))

    def __call__(self, i: int) -> int:
        return value_at(self, i)

    def __mul__(self, other: "AffinePermutation") -> "AffinePermutation":
        return compose(self, other)

    def __str__(self) -> str:
        return render_window(self.window)


def value_at(w: AffinePermutation, i: int) -> int:
    """w(i) for any integer i, by periodicity."""
    k, r = divmod(i - 1, w.n)
    return w.window[r] + k * w.n


def compose(w: AffinePermutation, u: AffinePermutation) -> AffinePermutation:
    """(w u)(i) = w(u(i))."""
    if w.n != u.n:
        raise PreconditionError(f"ranks differ: {w.n} vs {u.n}")
    return AffinePermutation(w.n, tuple(value_at(w, v) for v in u.window))


def inverse(w: AffinePermutation) -> AffinePermutation:
    n = w.n
    window = [0] * n
    for i, v in enumerate(w.window, start=1):
        k, r = divmod(v - 1, n)
        window[r] = i - k * n
    return AffinePermutation(n, tuple(window))


def coxeter_length(w: AffinePermutation) -> int:
    """
    Number of pairs (i, j), 1 <= i <= n, j > i, with w(i) > w(j).

    Each window pair contributes |floor((w(j) - w(i)) / n)| inversions
    across all translates.
    """
    n = w.n
    window = w.window
    return sum(abs((window[j] - window[i]) // n)
               for i in range(n) for j in range(i + 1, n))


def apply_generator(w: AffinePermutation, i: int, side: Side = Side.RIGHT) -> AffinePermutation:
    """
    Multiply by the simple reflection s_i.

    Right action swaps positions i and i+1; left action swaps values
    i and i+1, both periodically mod n.
    """
    n = w.n
    if not 0 <= i < n:
        raise PreconditionError(f"generator index {i} outside 0..{n - 1}")
    side = Side(side)
    window = list(w.window)
    if side is Side.RIGHT:
        if i == 0:
            window[0], window[-1] = w.window[-1] - n, w.window[0] + n
        else:
            window[i - 1], window[i] = window[i], window[i - 1]
        return AffinePermutation(n, tuple(window))

    low, high = i % n, (i + 1) % n
    for idx, v in enumerate(window):
        if v % n == low:
            window[idx] = v + 1
        elif v % n == high:
            window[idx] = v - 1
    return AffinePermutation(n, tuple(window))


def displacement_spread(w: AffinePermutation) -> int:
    shifts = [v - i for i, v in enumerate(w.window, start=1)]
    return max(shifts) - min(shifts)


def is_fully_commutative(w: AffinePermutation) -> bool:
    """
    No i < j < k with w(i) > w(j) > w(k) in complete notation.

    Translating an instance puts j in 1..n, and any inverted pair has index
    gap below the displacement spread, so i and k stay within that distance.
    """
    n = w.n
    spread = displacement_spread(w)
    if spread == 0:
        return True
    for j in range(1, n + 1):
        middle = value_at(w, j)
        has_left = any(value_at(w, i) > middle for i in range(j - spread, j))
        if has_left and any(value_at(w, k) < middle for k in range(j + 1, j + spread + 1)):
            return False
    return True


def parabolic_decompose(w: AffinePermutation) -> Tuple[AffinePermutation, FinitePermutation]:
    """
    Split w = w0 * u with w0 the sorted-window coset representative.

    Lengths add: coxeter_length(w) == coxeter_length(w0) + u.inversions().
    """
    sorted_window = tuple(sorted(w.window))
    rank = {v: idx for idx, v in enumerate(sorted_window, start=1)}
    u = FinitePermutation(tuple(rank[v] for v in w.window))
    return AffinePermutation(w.n, sorted_window), u


def descent_set(w: AffinePermutation, side: Side = Side.RIGHT) -> FrozenSet[int]:
    """Residues i in 0..n-1 with w(i) > w(i+1); left descents use the inverse."""
    side = Side(side)
    target = w if side is Side.RIGHT else inverse(w)
    return frozenset(i for i in range(target.n) if value_at(target, i) > value_at(target, i + 1))


def render_window(values: Iterable[int]) -> str:
    return "[" + ",".join(str(v) for v in values) + "]"


def parse_window(text: str) -> Tuple[int, ...]:
    """Parse "a,b,c" or "[a,b,c]" into integers."""
    stripped = text.strip().strip("[]")
    if not stripped:
        raise PreconditionError("empty window")
    try:
        return tuple(int(part) for part in stripped.split(","))
    except ValueError:
        raise PreconditionError(f"window {text!r} is not a comma-separated list of integers") from None
