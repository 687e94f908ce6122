"""Unit tests for the generating function formulas."""

import pytest
from pathlib import Path
import sys

# Add src to path for imports
sys.path.insert(0, str(Path(__file__).parent.parent.parent))

from src.core.errors import PreconditionError
from src.core.formulas import (
    AssemblyConfig,
    SeriesAssembler,
    assemble_f,
    auxiliary_series,
    case_polynomials,
    finite_fc_gf,
    finite_fc_polynomial,
    functional_equation_residual,
    long_gf,
    long_numerator,
    max_finite_inversions,
    max_short_length_bound,
    middle_coefficients,
    middle_descent_series,
    periodicity_onset_bound,
    prefactor,
    s0_at,
    s1_at,
    s2_at,
    sI_at,
    s_breakdown,
    stable_prime_value,
)
from src.core.oracle import finite_321_stats
from src.core.qseries import QPoly, SeriesCaps, default_caps, extract
from src.models import SeriesExport
from src.utils.cache_manager import SeriesCache
from src.utils.config_loader import ConfigLoader


class TestBounds:
    """Test cases for the closed-form bounds."""

    def test_bounds(self):
        """floor(m/2) ceil(m/2) and derived quantities."""
        assert [max_finite_inversions(m) for m in range(6)] == [0, 0, 1, 2, 4, 6]
        assert max_short_length_bound(5) == 12
        assert periodicity_onset_bound(6) == 24


class TestLongElements:
    """Test cases for the long-element series."""

    def test_long_gf_rank_three(self):
        """q^3/(1-q^3) * 2(1+q+q^2)^2 up to q^6."""
        assert long_gf(3, 6) == QPoly((0, 0, 0, 2, 4, 6, 6))

    def test_long_gf_rank_two(self):
        """q^2 (1+q)^2/(1-q^2) = q^2 + 2q^3 + 2q^4 + ..."""
        assert long_gf(2, 6) == QPoly((0, 0, 1, 2, 2, 2, 2))

    def test_long_gf_rank_five(self):
        """Four long elements of length 5, settling at 50."""
        coefficients = long_gf(5, 40).padded(41)
        assert coefficients[:5] == [0] * 5
        assert coefficients[5] == 4
        assert all(c >= 0 for c in coefficients)
        assert coefficients[14:] == [50] * 27

    def test_long_numerator(self):
        """Dividing out [3]_q leaves 2q^3(1+q+q^2)."""
        assert long_numerator(3) == QPoly((0, 0, 0, 2, 2, 2))

    @pytest.mark.parametrize("p,value", [(3, 6), (5, 50), (7, 490), (11, 64130)])
    def test_stable_prime_value(self, p, value):
        """(C(2p, p) - 2)/p."""
        assert stable_prime_value(p) == value
        assert long_numerator(p).evaluate_at_one() == value

    def test_stable_prime_value_rejects_composites(self):
        """Composite input is a precondition failure."""
        with pytest.raises(PreconditionError):
            stable_prime_value(4)


class TestFiniteElements:
    """Test cases for the 321-avoiding series."""

    def test_constant_term(self):
        """The empty permutation contributes 1."""
        series = finite_fc_gf(4, 4)
        assert extract(series, "x", 0).to_qpoly() == QPoly.one()

    def test_small_sizes(self):
        """Inversion polynomials of 321-avoiders of S_3 and S_4."""
        assert finite_fc_polynomial(3, 10) == QPoly((1, 2, 2))
        assert finite_fc_polynomial(4, 10) == QPoly((1, 3, 5, 4, 1))

    def test_catalan(self):
        """Values at q = 1 are Catalan numbers."""
        series = finite_fc_gf(7, max_finite_inversions(7))
        catalan = [1, 1, 2, 5, 14, 42, 132, 429]
        assert [extract(series, "x", n).to_qpoly().evaluate_at_one() for n in range(8)] == catalan

    def test_matches_enumeration(self):
        """Agrees with the generating tree for sizes up to 7."""
        stats = finite_321_stats(7)
        for n in range(8):
            assert finite_fc_polynomial(n, 20) == stats.inversion_polynomial(n)


class TestMiddleDescents:
    """Test cases for D(x, q, z, s)."""

    @pytest.fixture(scope="class")
    def caps(self):
        return SeriesCaps(x=7, q=max_finite_inversions(7), z=7, s=7)

    def test_size_four(self, caps):
        """2143 and 3142 are the only size-4 terms."""
        d = middle_descent_series(*caps)
        assert middle_coefficients(d, 4) == {(1, 1): QPoly((0, 0, 1, 1))}

    def test_matches_statistics(self, caps):
        """D agrees with direct enumeration of 321-avoiders."""
        d = middle_descent_series(*caps)
        assert d == finite_321_stats(7).multi_descent_series(caps)

    def test_functional_equation(self, caps):
        """D solves the generating-tree equation within caps."""
        d = middle_descent_series(*caps)
        assert functional_equation_residual(d, auxiliary_series(caps)).is_zero()

    def test_s2_needs_series(self):
        """M >= 4 needs D; M < 4 contributes nothing."""
        assert s2_at(1, 1, 3, None, 10) == QPoly.zero()
        with pytest.raises(PreconditionError):
            s2_at(1, 1, 4, None, 10)


class TestAssembly:
    """Test cases for f_n."""

    def test_prefactor(self):
        """q^(L+R-1) [L+R-2, L-1]."""
        assert prefactor(1, 1) == QPoly((0, 1))
        assert prefactor(3, 2) == QPoly((0, 0, 0, 0, 1, 1, 1))

    def test_s0_single_middle(self):
        """With M = 0 there is exactly one arrangement."""
        assert s0_at(1, 1, 0, 5) == QPoly.one()

    def test_s1_small(self):
        """One middle descent with M = 2: q(1+q)^2."""
        assert s1_at(1, 1, 2, 10) == QPoly((0, 1, 2, 1))
        assert s1_at(1, 1, 1, 10) == QPoly.zero()

    def test_sI_small(self):
        """With L = R = 1 and M = 0 the single right entry precedes the left one at q^1."""
        assert sI_at(1, 1, 0, 5) == QPoly((0, 1))

    def test_rank_two(self):
        """Every element of the infinite dihedral group is FC."""
        assert assemble_f(2, 8).padded(9) == [1] + [2] * 8

    def test_rank_three(self):
        """f_3 = 1 + 3q + 6q^2 + 6q^3 + ..."""
        assert assemble_f(3, 6).padded(7) == [1, 3, 6, 6, 6, 6, 6]

    def test_rank_four(self):
        """f_4 alternates 16, 18 from q^3."""
        assert assemble_f(4, 8).padded(9) == [1, 4, 10, 16, 18, 16, 18, 16, 18]

    def test_cases_sum_to_total(self):
        """The case split adds up to f_n."""
        cases = case_polynomials(5, 20)
        total = QPoly.zero()
        for poly in cases.values():
            total = total + poly
        assert total.truncate(20) == assemble_f(5, 20)

    def test_breakdown_profiles(self):
        """One summand per (L, R) with L, R >= 1."""
        breakdown = s_breakdown(4, 10)
        assert sorted((r.L, r.R) for r in breakdown.records) == [
            (1, 1), (1, 2), (1, 3), (2, 1), (2, 2), (3, 1)]
        assert all(r.M == 4 - r.L - r.R for r in breakdown.records)

    def test_config_validation(self):
        """Rank below two or a non-positive cap is rejected."""
        with pytest.raises(PreconditionError):
            AssemblyConfig(1, 5)
        with pytest.raises(PreconditionError):
            AssemblyConfig(3, 0)
        with pytest.raises(PreconditionError):
            assemble_f(1, 5)


class TestSeriesAssembler:
    """Test cases for SeriesAssembler."""

    @pytest.fixture
    def config(self):
        return ConfigLoader(use_local=False)

    @pytest.fixture
    def cache(self, tmp_path):
        return SeriesCache(tmp_path / "cache", version="test")

    def test_resolve_qcap(self, config):
        """Explicit cap, then series.default_qcap, then the default caps."""
        assembler = SeriesAssembler(config)
        assert assembler.resolve_qcap(4) == default_caps(4).q
        assert assembler.resolve_qcap(4, 7) == 7
        config.set("series.default_qcap", 9)
        assert assembler.resolve_qcap(4) == 9

    def test_coefficients_are_cached(self, config, cache):
        """Computed lists are stored and later served from the cache."""
        assembler = SeriesAssembler(config, cache=cache)
        assert assembler.coefficients(3, 6) == [1, 3, 6, 6, 6, 6, 6]
        key = {"kind": "f", "n": 3, "q_cap": 6}
        assert cache.get(key) == [1, 3, 6, 6, 6, 6, 6]
        cache.set(key, [1, 2, 3])
        assert assembler.coefficients(3, 6) == [1, 2, 3]

    def test_without_cache(self, config):
        """No cache means a fresh computation every time."""
        assert SeriesAssembler(config).coefficients(2, 4) == [1, 2, 2, 2, 2]

    def test_cases(self, config):
        """The case split uses the resolved cap."""
        assert SeriesAssembler(config).cases(4, 8) == case_polynomials(4, 8)

    def test_rejects_small_rank(self, config):
        """Rank one is a precondition failure."""
        with pytest.raises(PreconditionError):
            SeriesAssembler(config).coefficients(1, 5)

    def test_export(self, config):
        """Coefficients export as decimal strings; the schema carries the f_3 example."""
        export = SeriesExport(n=3, q_cap=4,
                              coefficients=[str(c) for c in SeriesAssembler(config).coefficients(3, 4)])
        schema = SeriesExport.model_json_schema()
        assert export.coefficients == schema["example"]["coefficients"] == ["1", "3", "6", "6", "6"]
