"""
Verification Module

Runs the golden, oracle and property suites and collects the outcome of
every check into a VerificationReport.
"""

import random
from itertools import combinations, permutations
from math import comb
from typing import Callable, Dict, Iterable, List, Optional

from .abacus import (
    abacus_from_coset_rep,
    abacus_length,
    all_short_abaci,
    classify,
    is_fc_coset_rep,
    lmr_abaci,
    lmr_profile,
    normalize,
    to_coset_rep,
    AbacusClass,
)
from .affine import (
    AffinePermutation,
    FinitePermutation,
    apply_generator,
    coxeter_length,
    is_fully_commutative,
    parabolic_decompose,
)
from .errors import EnumerationError
from .formulas import (
    SeriesAssembler,
    finite_fc_gf,
    functional_equation_residual,
    auxiliary_series,
    max_finite_inversions,
    max_short_length_bound,
    middle_descent_series,
    periodicity_onset_bound,
    prefactor,
)
from .golden import GoldenTable, load_golden_table
from .oracle import (
    Oracle,
    finite_321_stats,
    iterate_layers,
    max_short_length,
    short_case_polynomials,
)
from .qseries import QPoly, SeriesCaps, default_caps, extract, q_binomial, qpoly_from_counts
from ..models.reports import VerificationReport
from ..utils.config_loader import ConfigLoader
from ..utils.logger import get_logger


SCOPES = ("golden", "oracle", "properties", "all")


def multiset_inversion_gf(n: int, k: int) -> QPoly:
    """Sum of q^inv over words with k ones and n-k twos."""
    counts: Dict[int, int] = {}
    for ones in combinations(range(n), k):
        word = [1 if i in ones else 2 for i in range(n)]
        inv = sum(1 for i in range(n) for j in range(i + 1, n) if word[i] > word[j])
        counts[inv] = counts.get(inv, 0) + 1
    return qpoly_from_counts(counts)


def box_partition_gf(n: int, k: int) -> QPoly:
    """Sum of q^|lambda| over partitions with at most k parts, each at most n-k."""
    counts: Dict[int, int] = {}

    def extend(parts_left: int, largest: int, size: int) -> None:
        counts[size] = counts.get(size, 0) + 1
        if parts_left == 0:
            return
        for part in range(1, largest + 1):
            extend(parts_left - 1, part, size + part)

    extend(k, n - k, 0)
    return qpoly_from_counts(counts)


def subset_gf(n: int, k: int) -> QPoly:
    """Sum of q^(sum of r_j - j) over k-subsets r_1 < ... < r_k of 1..n."""
    counts: Dict[int, int] = {}
    for subset in combinations(range(1, n + 1), k):
        weight = sum(r - j for j, r in enumerate(subset, start=1))
        counts[weight] = counts.get(weight, 0) + 1
    return qpoly_from_counts(counts)


def random_sorted_window(n: int, rng: random.Random, steps: int = 40) -> AffinePermutation:
    """Coset representative of a random walk of right generators from the identity."""
    w = AffinePermutation.identity(n)
    for _ in range(rng.randint(0, steps)):
        w = apply_generator(w, rng.randrange(n))
    return parabolic_decompose(w)[0]


class Verifier:
    """Runs verification suites against the formula stack."""

    def __init__(self, config: Optional[ConfigLoader] = None,
                 golden_table: Optional[GoldenTable] = None):
        """
        Initialize the verifier.

        Args:
            config: Loaded configuration; the default file is used if None
            golden_table: Preloaded golden data; loaded from config if None
        """
        self.config = config or ConfigLoader()
        self.logger = get_logger(__name__)
        self.assembler = SeriesAssembler(self.config)
        self.oracle = Oracle(self.config)
        self._golden = golden_table

    @property
    def golden(self) -> GoldenTable:
        if self._golden is None:
            self._golden = load_golden_table(self.config.get_path("verify.golden_file"),
                                             verify_checksum=False)
        return self._golden

    def run(self, scope: str = "all", n: Optional[int] = None,
            max_len: Optional[int] = None) -> VerificationReport:
        """
        Run the checks of ``scope``.

        Args:
            scope: golden, oracle, properties or all
            n: Restrict golden/oracle checks to one rank
            max_len: Length bound for the oracle comparison

        Returns:
            VerificationReport with one entry per check
        """
        if scope not in SCOPES:
            raise ValueError(f"unknown scope {scope!r}; expected one of {', '.join(SCOPES)}")
        report = VerificationReport(scope=scope)
        if scope in ("golden", "all"):
            self.check_golden(report, n)
        if scope in ("oracle", "all"):
            self.check_oracle(report, n, max_len)
        if scope in ("properties", "all"):
            self.check_properties(report)
        self.logger.info(f"Verification '{scope}': {len(report.checks) - len(report.failures)}"
                         f"/{len(report.checks)} checks passed")
        return report

    # Golden tables

    def check_golden(self, report: VerificationReport, n: Optional[int] = None) -> None:
        table = self.golden
        report.add("golden checksum", table.checksum_ok(),
                   detail=f"recorded {table.checksum}")
        ranks = [n] if n is not None else self.config.get("verify.golden_ranks", table.ranks())
        for rank in ranks:
            if rank not in table.series:
                report.add(f"golden f_{rank}", False, detail="no golden series for this rank")
                continue
            golden = table.series[rank]
            computed = self.assembler.coefficients(rank, golden.max_degree)
            mismatch = table.compare_with(rank, computed)
            report.add(f"golden f_{rank}", mismatch is None,
                       detail=f"{golden.max_degree + 1} coefficients",
                       first_mismatch=None if mismatch is None else str(mismatch))

    # Dual path

    def check_oracle(self, report: VerificationReport, n: Optional[int] = None,
                     max_len: Optional[int] = None) -> None:
        ranks = [n] if n is not None else self.config.get("verify.oracle_ranks", [3, 4, 5, 6])
        for rank in ranks:
            length = max_len if max_len is not None else periodicity_onset_bound(rank) + rank
            histogram = self.oracle.histogram(rank, length)
            formula = self.assembler.coefficients(rank, max(length, 1))
            mismatch = next(
                (f"n={rank}, degree={l}, expected={fc}, got={formula[l]}"
                 for l, fc in enumerate(histogram.fc_counts) if fc != formula[l]),
                None,
            )
            report.add(f"oracle f_{rank} up to length {length}", mismatch is None,
                       detail=f"{sum(histogram.fc_counts)} FC elements", first_mismatch=mismatch)

    # Module invariants

    def check_properties(self, report: VerificationReport) -> None:
        checks: List[Callable[[VerificationReport], None]] = [
            self._check_q_binomial,
            self._check_finite_restriction,
            self._check_bfs_depth,
            self._check_fc_definition,
            self._check_catalan,
            self._check_abacus_length,
            self._check_fixed_lmr,
            self._check_lmr_compatibility,
            self._check_long_short,
            self._check_short_cases,
            self._check_middle_descents,
            self._check_periodicity,
        ]
        for check in checks:
            try:
                check(report)
            except EnumerationError as e:
                report.add(check.__name__.lstrip("_"), False, detail=str(e))

    def _check_q_binomial(self, report: VerificationReport) -> None:
        max_n = self.config.get("verify.qbinomial_max_n", 12)
        bad = [(n, k) for n in range(min(max_n, 8) + 1) for k in range(n + 1)
               if not (q_binomial(n, k) == multiset_inversion_gf(n, k)
                       == box_partition_gf(n, k) == subset_gf(n, k))]
        report.add("q-binomial interpretations", not bad, detail=f"failures at {bad}" if bad else "")

        one = QPoly.one()
        bad = [(n, k) for n in range(max_n + 1) for k in range(n + 1)
               if q_binomial(n, k) != q_binomial(n, n - k)]
        bad += [(n, k) for n in range(1, max_n + 1) for k in range(n)
                if (one - QPoly.monomial(n - k)) * q_binomial(n, k)
                != (one - QPoly.monomial(n)) * q_binomial(n - 1, k)]
        report.add("q-binomial identities", not bad, detail=f"failures at {bad}" if bad else "")

    def _check_finite_restriction(self, report: VerificationReport) -> None:
        bad = []
        for n in range(2, 8):
            bound = max_finite_inversions(n)
            for one_line in permutations(range(1, n + 1)):
                u = FinitePermutation(one_line)
                fc = is_fully_commutative(u.embed())
                if fc == u.contains_321() or (fc and u.inversions() > bound):
                    bad.append(one_line)
        report.add("finite FC elements avoid 321 and respect the inversion bound", not bad,
                   first_mismatch=str(bad[0]) if bad else None)

    def _check_bfs_depth(self, report: VerificationReport) -> None:
        ranks = self.config.get("verify.fc_crosscheck_ranks", [3, 4, 5])
        max_len = self.config.get("verify.fc_crosscheck_max_length", 10)
        for n in ranks:
            bad = next(((depth, window) for depth, layer in iterate_layers(n, max_len)
                        for window in layer if coxeter_length(AffinePermutation(n, window)) != depth),
                       None)
            report.add(f"search depth equals Coxeter length, n={n}", bad is None,
                       detail=f"lengths 0..{max_len}",
                       first_mismatch=None if bad is None else f"depth {bad[0]}: {list(bad[1])}")

    def _check_fc_definition(self, report: VerificationReport) -> None:
        ranks = self.config.get("verify.fc_crosscheck_ranks", [3, 4, 5])
        max_len = self.config.get("verify.fc_crosscheck_max_length", 10)
        for n in ranks:
            disagreement = None
            checked = 0
            for _depth, layer in iterate_layers(n, max_len):
                for window in layer:
                    w = AffinePermutation(n, window)
                    checked += 1
                    if is_fully_commutative(w) != self.oracle.is_fc(w):
                        disagreement = window
                        break
                if disagreement:
                    break
            report.add(f"321 test matches commutation classes, n={n}", disagreement is None,
                       detail=f"{checked} elements",
                       first_mismatch=str(list(disagreement)) if disagreement else None)

    def _check_catalan(self, report: VerificationReport) -> None:
        series = finite_fc_gf(8, max_finite_inversions(8))
        bad = [n for n in range(9)
               if extract(series, "x", n).to_qpoly().evaluate_at_one() != comb(2 * n, n) // (n + 1)]
        report.add("finite FC counts are Catalan numbers", not bad, detail=f"sizes {bad}" if bad else "")

    def _check_abacus_length(self, report: VerificationReport) -> None:
        rng = random.Random(self.config.get("verify.seed", 0))
        per_n = self.config.get("verify.random_windows_per_n", 500)
        bad = []
        for n in range(2, self.config.get("verify.abacus_max_n", 8) + 1):
            for _ in range(per_n):
                w0 = random_sorted_window(n, rng)
                a = abacus_from_coset_rep(w0)
                if abacus_length(a) != coxeter_length(w0) or abacus_length(normalize(a)) != abacus_length(a):
                    bad.append(w0.window)
        report.add("abacus length equals Coxeter length", not bad,
                   first_mismatch=str(list(bad[0])) if bad else None)

    def _check_fixed_lmr(self, report: VerificationReport) -> None:
        bad = []
        for n in range(2, self.config.get("verify.abacus_max_n", 8) + 1):
            by_profile: Dict[tuple, Dict[int, int]] = {}
            for a in all_short_abaci(n):
                profile = lmr_profile(a)
                if profile.R == 0:
                    continue
                key = (profile.L, profile.M, profile.R)
                counts = by_profile.setdefault(key, {})
                length = abacus_length(a)
                counts[length] = counts.get(length, 0) + 1
            for L in range(1, n):
                for R in range(1, n - L + 1):
                    M = n - L - R
                    exhaustive = qpoly_from_counts(by_profile.get((L, M, R), {}))
                    enumerated = qpoly_from_counts(_length_counts(lmr_abaci(L, M, R)))
                    if not exhaustive == enumerated == prefactor(L, R):
                        bad.append((L, M, R))
        report.add("(L)(M)(R) abacus lengths sum to the prefactor", not bad,
                   first_mismatch=str(bad[0]) if bad else None)

    def _check_lmr_compatibility(self, report: VerificationReport) -> None:
        bad = []
        for n in range(2, 7):
            compatible: Dict[tuple, frozenset] = {}
            for a in all_short_abaci(n):
                profile = lmr_profile(a)
                if profile.R == 0:
                    continue
                w0 = to_coset_rep(a)
                allowed = frozenset(
                    one_line for one_line in permutations(range(1, n + 1))
                    if is_fully_commutative(AffinePermutation(n, tuple(w0.window[v - 1] for v in one_line)))
                )
                key = (profile.L, profile.M, profile.R)
                if compatible.setdefault(key, allowed) != allowed:
                    bad.append((n, key))
        report.add("FC finite factors depend only on the (L)(M)(R) profile", not bad,
                   first_mismatch=str(bad[0]) if bad else None)

    def _check_long_short(self, report: VerificationReport) -> None:
        for n in range(2, 7):
            got = max_short_length(n)
            expected = max_short_length_bound(n)
            report.add(f"longest short FC element, n={n}", got == expected,
                       first_mismatch=None if got == expected else f"n={n}, expected={expected}, got={got}")
        bad = [a.lowest_beads for n in range(2, 7) for a in all_short_abaci(n)
               if classify(a) is not AbacusClass.SHORT or not is_fc_coset_rep(a)]
        report.add("short abaci are FC coset representatives", not bad,
                   first_mismatch=str(bad[0]) if bad else None)

    def _check_short_cases(self, report: VerificationReport) -> None:
        for n in range(3, self.config.get("verify.short_case_max_n", 5) + 1):
            formula = self.assembler.cases(n, max_short_length_bound(n))
            enumerated = short_case_polynomials(n)
            bad = [case for case, poly in formula.items()
                   if case != "long" and enumerated.get(case, QPoly.zero()) != poly]
            report.add(f"short-element cases match exhaustive enumeration, n={n}", not bad,
                       first_mismatch=f"cases {bad}" if bad else None)

    def _check_middle_descents(self, report: VerificationReport) -> None:
        size = self.config.get("verify.middle_descent_max_size", 9)
        caps = SeriesCaps(x=size, q=max_finite_inversions(size), z=size, s=size)
        d = middle_descent_series(*caps)
        oracle = finite_321_stats(size).multi_descent_series(caps)
        report.add("middle-descent series matches 321-avoiding statistics", d == oracle,
                   detail=f"{len(d)} terms")
        residual = functional_equation_residual(d, auxiliary_series(caps))
        report.add("middle-descent series solves its functional equation", residual.is_zero(),
                   detail=f"{len(residual)} nonzero residual terms")
        smaller = SeriesCaps(x=size - 1, q=max_finite_inversions(size - 1), z=size - 1, s=size - 1)
        report.add("middle-descent series is exact under truncation",
                   d.with_caps(smaller) == middle_descent_series(*smaller),
                   detail=f"caps {tuple(caps)} -> {tuple(smaller)}")

    def _check_periodicity(self, report: VerificationReport) -> None:
        for n in self.config.get("verify.golden_ranks", list(range(3, 13))):
            q_cap = default_caps(n).q
            try:
                result = self.oracle.periodicity(n, self.assembler.coefficients(n, q_cap))
            except EnumerationError as e:
                report.add(f"periodicity f_{n}", False, detail=str(e))
                continue
            report.add(f"periodicity f_{n}", True,
                       detail=f"period {result.period} from q^{result.onset}, tail {result.tail}")


def _length_counts(abaci: Iterable) -> Dict[int, int]:
    counts: Dict[int, int] = {}
    for a in abaci:
        length = abacus_length(a)
        counts[length] = counts.get(length, 0) + 1
    return counts


def generate_report(report: VerificationReport) -> str:
    """Plain-text listing of every check."""
    lines = ["=" * 60, f"Verification scope: {report.scope}", "=" * 60]
    for check in report.checks:
        mark = "PASS" if check.passed else "FAIL"
        line = f"[{mark}] {check.name}"
        if check.detail:
            line += f" ({check.detail})"
        lines.append(line)
        if check.first_mismatch:
            lines.append(f"       first mismatch: {check.first_mismatch}")
    lines.append("-" * 60)
    passed = len(report.checks) - len(report.failures)
    lines.append(f"{passed}/{len(report.checks)} checks passed")
    return "\n".join(lines)
