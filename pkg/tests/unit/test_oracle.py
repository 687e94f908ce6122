"""Unit tests for the brute-force oracles."""

import pytest
from pathlib import Path
import sys

# Add src to path for imports
sys.path.insert(0, str(Path(__file__).parent.parent.parent))

from src.core.abacus import to_coset_rep
from src.core.affine import (
    AffinePermutation,
    apply_generator,
    coxeter_length,
    is_fully_commutative,
    parabolic_decompose,
)
from src.core.errors import ClosureLimitError, HistogramTooShortError, PeriodicityViolation
from src.core.formulas import assemble_f, case_polynomials, max_short_length_bound
from src.core.oracle import (
    DescentStat,
    Oracle,
    analyze_periodicity,
    avoiding_321,
    bfs_enumerate,
    classify_short_element,
    commutation_class,
    commutes,
    descent_stat,
    fc_by_definition,
    finite_321_stats,
    iter_commutation_class,
    iterate_layers,
    max_short_length,
    max_short_witness,
    periodicity_report,
    reduced_word,
    short_case_polynomials,
    short_fc_elements,
)
from src.core.qseries import QPoly
from src.models import HistogramExport, PeriodicityExport
from src.utils.config_loader import ConfigLoader


class TestBreadthFirstSearch:
    """Test cases for length-graded enumeration."""

    def test_rank_three_totals(self):
        """The affine group of rank 3 has 3l elements of length l >= 1."""
        h = bfs_enumerate(3, 6)
        assert h.totals == [1, 3, 6, 9, 12, 15, 18]
        assert h.fc_counts == [1, 3, 6, 6, 6, 6, 6]
        assert h.max_len == 6

    def test_fc_only_matches_full_search(self):
        """Expanding only FC elements loses no FC element."""
        full = bfs_enumerate(4, 8)
        pruned = bfs_enumerate(4, 8, fc_only=True)
        assert pruned.fc_counts == full.fc_counts
        assert all(total is None for total in pruned.totals)

    def test_rank_two(self):
        """Two elements of each positive length, all FC."""
        h = bfs_enumerate(2, 6)
        assert h.totals == h.fc_counts == [1, 2, 2, 2, 2, 2, 2]

    @pytest.mark.parametrize("n,max_len", [(3, 8), (4, 7), (5, 5)])
    def test_depth_is_coxeter_length(self, n, max_len):
        """Every window in layer l has Coxeter length l."""
        for depth, layer in iterate_layers(n, max_len):
            assert all(coxeter_length(AffinePermutation(n, window)) == depth for window in layer)

    def test_histogram_export(self):
        """Counts are exported as decimal strings and missing totals as null."""
        export = HistogramExport.from_histogram(bfs_enumerate(3, 2, fc_only=True))
        data = export.model_dump()
        assert data["lengths"][2] == {"l": 2, "total": None, "fc": "6"}


class TestCommutationClasses:
    """Test cases for the definition-based FC test."""

    def test_commutes(self):
        """Generators commute when distinct and not adjacent mod n."""
        assert commutes(0, 2, 4)
        assert not commutes(0, 1, 4)
        assert not commutes(0, 3, 4)
        assert not commutes(1, 1, 4)
        assert not commutes(0, 1, 2)

    def test_reduced_word_length(self):
        """Reduced words have length equal to the Coxeter length."""
        w = AffinePermutation(4, (-1, -4, 14, 1))
        assert len(reduced_word(w)) == coxeter_length(w) == 13
        assert reduced_word(AffinePermutation.identity(3)) == []

    def test_commutation_class(self):
        """s_0 s_2 in rank 4 has two commutation-equivalent words."""
        assert commutation_class((0, 2), 4) == {(0, 2), (2, 0)}

    def test_closure_limit(self):
        """Classes larger than the limit raise."""
        with pytest.raises(ClosureLimitError):
            list(iter_commutation_class((0, 2), 4, limit=1))

    def test_braid_element(self):
        """s_1 s_2 s_1 is not FC by either test."""
        w = AffinePermutation(3, (3, 2, 1))
        assert not fc_by_definition(w)
        assert not is_fully_commutative(w)

    def test_rank_two_always_fc(self):
        """No braid relation holds between the two generators of rank 2."""
        assert fc_by_definition(AffinePermutation(2, (4, -1)))

    def test_agrees_with_321_test(self):
        """Both tests agree on every element of rank 3 up to length 6."""
        for _depth, layer in iterate_layers(3, 6):
            for window in layer:
                w = AffinePermutation(3, window)
                assert fc_by_definition(w) == is_fully_commutative(w)


class TestFiniteStatistics:
    """Test cases for 321-avoiding permutation statistics."""

    def test_catalan_counts(self):
        """The generating tree produces Catalan many permutations."""
        assert [len(list(avoiding_321(m))) for m in range(7)] == [1, 1, 2, 5, 14, 42, 132]

    def test_tree_produces_avoiders(self):
        """No generated permutation contains 321."""
        from src.core.affine import FinitePermutation
        assert not any(FinitePermutation(p).contains_321() for p in avoiding_321(6))

    def test_descent_stat(self):
        """Runs are measured from the first and to the last descent."""
        assert descent_stat((2, 1, 4, 3)) == DescentStat(4, 2, 1, 1, 2)
        assert descent_stat((2, 1, 3)) == DescentStat(3, 1, 1, 2, 1)
        assert descent_stat((1, 2, 3)) == DescentStat(3, 0, 0, 0, 0)
        assert descent_stat(()) == DescentStat(0, 0, 0, 0, 0)

    def test_table(self):
        """Totals and inversion polynomials per size."""
        table = finite_321_stats(4)
        assert table.total(4) == 14
        assert table.inversion_polynomial(3) == QPoly((1, 2, 2))
        assert table.inversion_polynomial(4, descents=2) == QPoly((0, 0, 1, 1))
        assert sum(table.with_descents_at_least(2).values()) == 2


class TestPeriodicity:
    """Test cases for tail analysis."""

    def test_rank_three(self):
        """Constant tail 6 from q^2."""
        report = analyze_periodicity(3, [1, 3] + [6] * 12)
        assert (report.period, report.onset, report.tail) == (1, 2, [6])
        assert report.matches_conjecture
        assert report.guaranteed_onset == 7

    def test_rank_four(self):
        """Alternating tail 16, 18 from q^3."""
        coefficients = [1, 4, 10] + [16, 18] * 9
        report = analyze_periodicity(4, coefficients)
        assert (report.period, report.onset, report.tail) == (2, 3, [16, 18])
        assert report.conjectured_onset == 3

    def test_too_short(self):
        """Fewer than two periods past the guaranteed onset."""
        with pytest.raises(HistogramTooShortError):
            analyze_periodicity(3, [1, 3, 6, 6, 6])

    def test_wrong_prime_tail(self):
        """A prime rank must settle at (C(2p, p) - 2)/p."""
        with pytest.raises(PeriodicityViolation):
            analyze_periodicity(3, [1, 3] + [7] * 12)

    def test_period_must_divide_rank(self):
        """A period of 3 is impossible for rank 4."""
        coefficients = [1, 4] + [10, 11, 12] * 7
        with pytest.raises(PeriodicityViolation):
            analyze_periodicity(4, coefficients)

    def test_report_from_histogram(self):
        """The histogram path and its export agree."""
        report = periodicity_report(bfs_enumerate(3, 13, fc_only=True))
        export = PeriodicityExport.from_report(report)
        assert export.tail == ["6"]
        assert export.onset == 2


class TestShortElements:
    """Test cases for exhaustive short FC elements."""

    @pytest.mark.parametrize("n", [2, 3, 4, 5])
    def test_max_short_length(self, n):
        """The longest short FC element has length 2 floor(n/2) ceil(n/2)."""
        assert max_short_length(n) == max_short_length_bound(n)

    @pytest.mark.parametrize("n", [3, 4, 5, 6])
    def test_witness(self, n):
        """The explicit witness is FC and attains the bound."""
        w = max_short_witness(n)
        assert is_fully_commutative(w)
        assert coxeter_length(w) == max_short_length_bound(n)

    def test_elements_are_fc(self):
        """Every yielded element passes the 321 test and factors correctly."""
        for abacus, u, w in short_fc_elements(4):
            assert is_fully_commutative(w)
            assert parabolic_decompose(w) == (to_coset_rep(abacus), u)

    @pytest.mark.parametrize("n", [3, 4, 5])
    def test_cases_match_formulas(self, n):
        """Per-case counts of short elements equal the formula summands."""
        q_cap = max_short_length_bound(n)
        formula = case_polynomials(n, q_cap)
        oracle = short_case_polynomials(n)
        for case, poly in formula.items():
            if case == "long":
                continue
            assert oracle.get(case, QPoly.zero()) == poly, case

    def test_classification_of_identity(self):
        """The identity lies in the finite case."""
        from src.core.abacus import Abacus
        from src.core.affine import FinitePermutation
        assert classify_short_element(Abacus(3, (1, 2, 3)), FinitePermutation((1, 2, 3))) == "finite"


class TestOracle:
    """Test cases for the configured Oracle."""

    @pytest.fixture
    def config(self):
        loader = ConfigLoader(use_local=False)
        loader.set("oracle.show_progress", False)
        return loader

    def test_histogram_mode_follows_rank(self, config):
        """Small ranks get totals; ranks above fc_only_above_n expand only FC elements."""
        oracle = Oracle(config)
        assert oracle.histogram(3, 4).totals == [1, 3, 6, 9, 12]
        config.set("oracle.fc_only_above_n", 2)
        pruned = Oracle(config).histogram(3, 4)
        assert pruned.totals == [None] * 5
        assert pruned.fc_counts == [1, 3, 6, 6, 6]

    def test_explicit_mode_wins(self, config):
        """An explicit fc_only overrides the rank rule."""
        assert Oracle(config).histogram(3, 3, fc_only=True).totals == [None] * 4

    def test_closure_limit_from_config(self, config):
        """is_fc uses oracle.closure_limit."""
        w = apply_generator(apply_generator(AffinePermutation.identity(4), 0), 2)
        assert Oracle(config).is_fc(w)
        config.set("oracle.closure_limit", 1)
        with pytest.raises(ClosureLimitError):
            Oracle(config).is_fc(w)

    def test_shortcut_and_periodicity(self, config):
        """The shortcut for rank 3 settles at 6 with period 1."""
        oracle = Oracle(config)
        coefficients = oracle.shortcut(3, 13).padded(14)
        assert coefficients == [1, 3] + [6] * 12
        report = oracle.periodicity(3, coefficients)
        assert (report.period, report.onset) == (1, 2)
