"""
Oracle Module

Brute-force ground truth: length-graded search of the affine symmetric
group, the commutation-class definition of full commutativity, statistics
of 321-avoiding permutations, and the periodicity diagnostics.
"""

from collections import deque
from dataclasses import dataclass, field
from itertools import permutations
from typing import Dict, Iterator, List, Optional, Sequence, Set, Tuple

import sympy
from tqdm import tqdm

from .abacus import Abacus, all_short_abaci, lmr_profile, to_coset_rep
from .affine import (
    AffinePermutation,
    FinitePermutation,
    Side,
    apply_generator,
    coxeter_length,
    descent_set,
    is_fully_commutative,
)
from .errors import ClosureLimitError, HistogramTooShortError, PeriodicityViolation
from .formulas import (
    max_finite_inversions,
    max_short_length_bound,
    periodicity_onset_bound,
    stable_prime_value,
)
from .qseries import MultiSeries, QPoly, SeriesCaps, qpoly_from_counts
from ..utils.config_loader import ConfigLoader
from ..utils.logger import get_logger


logger = get_logger(__name__)

DEFAULT_CLOSURE_LIMIT = 10 ** 6

Window = Tuple[int, ...]


@dataclass
class LengthHistogram:
    """Per-length (total, FC) counts; totals are None when only FC elements were expanded."""

    n: int
    counts: List[Tuple[Optional[int], int]] = field(default_factory=list)

    @property
    def max_len(self) -> int:
        return len(self.counts) - 1

    @property
    def fc_counts(self) -> List[int]:
        return [fc for _total, fc in self.counts]

    @property
    def totals(self) -> List[Optional[int]]:
        return [total for total, _fc in self.counts]


def iterate_layers(n: int, max_len: int, fc_only: bool = False,
                   show_progress: bool = False) -> Iterator[Tuple[int, Set[Window]]]:
    """
    Yield (length, windows) for lengths 0..max_len.

    Each layer is reached from the previous one through right ascents, so
    the depth equals the Coxeter length. With ``fc_only`` only FC elements
    are kept, which loses nothing because right prefixes of FC elements
    are FC.
    """
    layer: Set[Window] = {AffinePermutation.identity(n).window}
    yield 0, layer
    for depth in tqdm(range(1, max_len + 1), desc=f"BFS n={n}", disable=not show_progress):
        following: Set[Window] = set()
        for window in layer:
            w = AffinePermutation(n, window)
            descents = descent_set(w, Side.RIGHT)
            for i in range(n):
                if i in descents:
                    continue
                v = apply_generator(w, i, Side.RIGHT)
                if fc_only and not is_fully_commutative(v):
                    continue
                following.add(v.window)
        layer = following
        logger.debug(f"n={n} length {depth}: {len(layer)} elements")
        yield depth, layer


def bfs_enumerate(n: int, max_len: int, fc_only: bool = False,
                  show_progress: bool = False) -> LengthHistogram:
    """Count elements and FC elements of each length up to max_len."""
    histogram = LengthHistogram(n=n)
    for _depth, layer in iterate_layers(n, max_len, fc_only=fc_only, show_progress=show_progress):
        if fc_only:
            fc = len(layer)
        else:
            fc = sum(1 for window in layer if is_fully_commutative(AffinePermutation(n, window)))
        histogram.counts.append((None if fc_only else len(layer), fc))
    logger.info(f"BFS n={n} up to length {max_len}: {sum(histogram.fc_counts)} FC elements")
    return histogram


def shortcut_series(n: int, q_cap: int, show_progress: bool = False) -> QPoly:
    """
    f_n from FC counts up to n + 2*floor(n/2)*ceil(n/2), continued with period n.

    Short elements stop at 2*floor(n/2)*ceil(n/2) and the long series has
    period n past that point.
    """
    known = min(q_cap, periodicity_onset_bound(n))
    coefficients = bfs_enumerate(n, known, fc_only=True, show_progress=show_progress).fc_counts
    for i in range(len(coefficients), q_cap + 1):
        coefficients.append(coefficients[i - n])
    return QPoly(tuple(coefficients))


def commutes(a: int, b: int, n: int) -> bool:
    """s_a and s_b commute iff they differ and are not adjacent mod n."""
    if n == 2:
        return False
    return a != b and (a - b) % n not in (1, n - 1)


def reduced_word(w: AffinePermutation) -> List[int]:
    """Reduced word obtained by stripping the smallest right descent repeatedly."""
    letters = []
    current = w
    while True:
        descents = descent_set(current, Side.RIGHT)
        if not descents:
            break
        i = min(descents)
        letters.append(i)
        current = apply_generator(current, i, Side.RIGHT)
    return letters[::-1]


def _has_short_braid(word: Sequence[int], n: int) -> bool:
    return any(word[p] == word[p + 2] and not commutes(word[p], word[p + 1], n)
               and word[p] != word[p + 1]
               for p in range(len(word) - 2))


def iter_commutation_class(word: Sequence[int], n: int,
                           limit: int = DEFAULT_CLOSURE_LIMIT) -> Iterator[Tuple[int, ...]]:
    """
    Yield the words reachable from ``word`` by swapping adjacent commuting
    letters, breadth first.

    Raises:
        ClosureLimitError: more than ``limit`` distinct words are reached.
    """
    start = tuple(word)
    seen = {start}
    queue = deque([start])
    while queue:
        current = queue.popleft()
        yield current
        for p in range(len(current) - 1):
            a, b = current[p], current[p + 1]
            if not commutes(a, b, n):
                continue
            swapped = current[:p] + (b, a) + current[p + 2:]
            if swapped not in seen:
                seen.add(swapped)
                if len(seen) > limit:
                    raise ClosureLimitError(limit)
                queue.append(swapped)


def commutation_class(word: Sequence[int], n: int,
                      limit: int = DEFAULT_CLOSURE_LIMIT) -> Set[Tuple[int, ...]]:
    return set(iter_commutation_class(word, n, limit))


def fc_by_definition(w: AffinePermutation, closure_limit: int = DEFAULT_CLOSURE_LIMIT) -> bool:
    """
    Full commutativity straight from the definition: no word in the
    commutation class of a reduced word contains s_i s_j s_i with j adjacent to i.

    For n = 2 the two generators satisfy no braid relation, so every element is FC.
    """
    if w.n == 2:
        return True
    for word in iter_commutation_class(reduced_word(w), w.n, closure_limit):
        if _has_short_braid(word, w.n):
            return False
    return True


def avoiding_321(size: int) -> Iterator[Tuple[int, ...]]:
    """
    321-avoiding permutations of 1..size via the generating tree: the
    largest entry is inserted anywhere right of the rightmost descent.
    """
    level: List[Tuple[int, ...]] = [()]
    for m in range(size):
        following = []
        for perm in level:
            last_descent = 0
            for d in range(len(perm) - 1):
                if perm[d] > perm[d + 1]:
                    last_descent = d + 1
            for p in range(last_descent, m + 1):
                following.append(perm[:p] + (m + 1,) + perm[p:])
        level = following
    return iter(level)


@dataclass(frozen=True)
class DescentStat:
    size: int
    inversions: int
    left_run: int
    right_run: int
    descents: int


def descent_stat(one_line: Sequence[int]) -> DescentStat:
    """Statistics of a finite permutation; runs are 0 when there is no descent."""
    perm = FinitePermutation(tuple(one_line))
    descents = perm.descents()
    size = perm.size
    if descents:
        left, right = descents[0], size - descents[-1]
    else:
        left = right = 0
    return DescentStat(size, perm.inversions(), left, right, len(descents))


@dataclass
class DescentStatTable:
    records: Dict[DescentStat, int] = field(default_factory=dict)

    def total(self, size: int) -> int:
        return sum(c for stat, c in self.records.items() if stat.size == size)

    def with_descents_at_least(self, d: int) -> Dict[DescentStat, int]:
        return {stat: c for stat, c in self.records.items() if stat.descents >= d}

    def multi_descent_series(self, caps: SeriesCaps) -> MultiSeries:
        """The rows with at least two descents as a series in x, q, z, s."""
        terms: Dict[tuple, int] = {}
        for stat, c in self.with_descents_at_least(2).items():
            key = (stat.size, stat.inversions, stat.left_run, stat.right_run)
            terms[key] = terms.get(key, 0) + c
        return MultiSeries(caps, terms)

    def inversion_polynomial(self, size: int, descents: Optional[int] = None) -> QPoly:
        dense: Dict[int, int] = {}
        for stat, c in self.records.items():
            if stat.size == size and (descents is None or stat.descents == descents):
                dense[stat.inversions] = dense.get(stat.inversions, 0) + c
        return qpoly_from_counts(dense)


def finite_321_stats(max_size: int) -> DescentStatTable:
    """Statistics of every 321-avoiding permutation of size 0..max_size."""
    table = DescentStatTable()
    for size in range(max_size + 1):
        for perm in avoiding_321(size):
            stat = descent_stat(perm)
            table.records[stat] = table.records.get(stat, 0) + 1
    return table


@dataclass
class PeriodicityReport:
    n: int
    period: int
    onset: int
    tail: List[int]
    conjectured_onset: int
    guaranteed_onset: int

    @property
    def matches_conjecture(self) -> bool:
        return self.onset == self.conjectured_onset


def analyze_periodicity(n: int, coefficients: Sequence[int]) -> PeriodicityReport:
    """
    Minimal period and empirical onset of an eventually periodic tail.

    Raises:
        HistogramTooShortError: fewer than two periods past the guaranteed onset.
        PeriodicityViolation: the period does not divide n, or a prime rank
            has a tail other than (C(2n, n) - 2)/n.
    """
    guaranteed = periodicity_onset_bound(n)
    last = len(coefficients) - 1
    if last < guaranteed + 2 * n:
        raise HistogramTooShortError(
            f"need coefficients up to q^{guaranteed + 2 * n} for n={n}, have up to q^{last}")

    def repeats(m: int, start: int) -> bool:
        return all(coefficients[i + m] == coefficients[i] for i in range(start, last - m + 1))

    period = next((m for m in range(1, n + 1) if repeats(m, guaranteed)), None)
    if period is None or n % period:
        raise PeriodicityViolation(f"f_{n} tail has period {period}, which does not divide {n}")

    onset = guaranteed
    while onset > 0 and coefficients[onset - 1 + period] == coefficients[onset - 1]:
        onset -= 1
    tail = list(coefficients[onset:onset + period])

    if sympy.isprime(n):
        expected = stable_prime_value(n)
        if period != 1 or tail != [expected]:
            raise PeriodicityViolation(f"f_{n} tail {tail} should be constant {expected}")

    return PeriodicityReport(
        n=n,
        period=period,
        onset=onset,
        tail=tail,
        conjectured_onset=1 + max_finite_inversions(n - 1),
        guaranteed_onset=guaranteed,
    )


def periodicity_report(h: LengthHistogram) -> PeriodicityReport:
    return analyze_periodicity(h.n, h.fc_counts)


def short_fc_elements(n: int) -> Iterator[Tuple[Abacus, FinitePermutation, AffinePermutation]]:
    """Every FC element whose normalized abacus is short, with its factors."""
    for abacus in all_short_abaci(n):
        w0 = to_coset_rep(abacus)
        for one_line in permutations(range(1, n + 1)):
            w = AffinePermutation(n, tuple(w0.window[v - 1] for v in one_line))
            if is_fully_commutative(w):
                yield abacus, FinitePermutation(one_line), w


def classify_short_element(abacus: Abacus, u: FinitePermutation) -> str:
    """
    Case of a short FC element: 'finite' for (n)(0)(0) abaci, else
    'intertwined', 'no_middle_descent', 'one_middle_descent' or
    'multi_middle_descent'.
    """
    profile = lmr_profile(abacus)
    if profile.R == 0:
        return "finite"
    statuses = ["L" if v <= profile.L else "M" if v <= profile.L + profile.M else "R"
                for v in u.one_line]
    if "R" in statuses and "L" in statuses:
        if statuses.index("R") < len(statuses) - 1 - statuses[::-1].index("L"):
            return "intertwined"
    middle = [v for v, status in zip(u.one_line, statuses) if status == "M"]
    descents = sum(1 for a, b in zip(middle, middle[1:]) if a > b)
    if descents == 0:
        return "no_middle_descent"
    if descents == 1:
        return "one_middle_descent"
    return "multi_middle_descent"


def short_case_polynomials(n: int) -> Dict[str, QPoly]:
    """Length generating functions of the short FC elements, split by case."""
    counts: Dict[str, Dict[int, int]] = {}
    for abacus, u, w in short_fc_elements(n):
        case = classify_short_element(abacus, u)
        by_length = counts.setdefault(case, {})
        length = coxeter_length(w)
        by_length[length] = by_length.get(length, 0) + 1
    return {case: qpoly_from_counts(by_length) for case, by_length in counts.items()}


def max_short_length(n: int) -> int:
    """Largest length of a short FC element, by exhaustive enumeration."""
    best = max(coxeter_length(w) for _abacus, _u, w in short_fc_elements(n))
    logger.info(f"n={n}: longest short FC element has length {best} "
                f"(bound {max_short_length_bound(n)})")
    return best


def max_short_witness(n: int) -> AffinePermutation:
    """[n + floor(n/2) + 1, ..., 2n, 1, ..., floor(n/2)], re-centred."""
    half = n // 2
    values = list(range(n + half + 1, 2 * n + 1)) + list(range(1, half + 1))
    return AffinePermutation.from_shifted_window(n, values)


class Oracle:
    """Brute-force enumeration driven by the ``oracle`` configuration section."""

    def __init__(self, config: Optional[ConfigLoader] = None):
        self.config = config or ConfigLoader()
        self.closure_limit = self.config.get("oracle.closure_limit", DEFAULT_CLOSURE_LIMIT)
        self.show_progress = bool(self.config.get("oracle.show_progress", False))
        self.fc_only_above_n = self.config.get("oracle.fc_only_above_n", 4)

    def histogram(self, n: int, max_len: int, fc_only: Optional[bool] = None) -> LengthHistogram:
        """BFS counts; without an explicit mode, ranks above fc_only_above_n expand only FC elements."""
        if fc_only is None:
            fc_only = n > self.fc_only_above_n
        return bfs_enumerate(n, max_len, fc_only=fc_only, show_progress=self.show_progress)

    def shortcut(self, n: int, q_cap: int) -> QPoly:
        return shortcut_series(n, q_cap, show_progress=self.show_progress)

    def is_fc(self, w: AffinePermutation) -> bool:
        """Definition-based FC test under the configured closure limit."""
        return fc_by_definition(w, self.closure_limit)

    def periodicity(self, n: int, coefficients: Sequence[int]) -> PeriodicityReport:
        return analyze_periodicity(n, coefficients)
