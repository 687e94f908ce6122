"""
Formulas Module

Generating function f_n(q) of fully commutative affine permutations of
rank n, assembled from:

* the long elements, q^n/(1-q^n) * sum_k [n,k]^2;
* the finite FC permutations ((n)(0)(0) abaci), a ratio of two
  q-Bessel type sums;
* for each (L)(M)(R) profile with L, R >= 1, a prefactor times the four
  cases of the finite factor: intertwined, and 0, 1 or at least 2 descents
  among the middle entries.
"""

from dataclasses import dataclass, field
from functools import lru_cache
from math import comb
from typing import Dict, List, Optional

import sympy

from .errors import PreconditionError
from .qseries import (
    MultiSeries,
    QPoly,
    SeriesCaps,
    extract,
    geometric,
    invert,
    mul,
    q_binomial,
    default_caps,
    q_integer,
    qpoly_from_counts,
    qpoly_sum,
    specialize_s_to_one,
    substitute_s_scale,
)
from ..utils.cache_manager import SeriesCache
from ..utils.config_loader import ConfigLoader
from ..utils.logger import get_logger


logger = get_logger(__name__)


def max_finite_inversions(m: int) -> int:
    """Largest inversion count of a 321-avoiding permutation of size m."""
    return (m // 2) * ((m + 1) // 2)


def max_short_length_bound(n: int) -> int:
    return 2 * max_finite_inversions(n)


def periodicity_onset_bound(n: int) -> int:
    """Index from which a_{i+n} = a_i is guaranteed."""
    return n + max_short_length_bound(n)


@dataclass(frozen=True)
class AssemblyConfig:
    """Caps used to assemble f_n up to q^q_cap."""

    n: int
    q_cap: int

    def __post_init__(self):
        if self.n < 2:
            raise PreconditionError(f"rank must be at least 2, got {self.n}")
        if self.q_cap < 1:
            raise PreconditionError(f"q_cap must be positive, got {self.q_cap}")

    @property
    def finite_caps(self) -> SeriesCaps:
        return SeriesCaps(x=self.n, q=min(self.q_cap, max_finite_inversions(self.n)), z=0, s=0)

    @property
    def middle_caps(self) -> SeriesCaps:
        """Caps for D; middle blocks have at most n - 2 entries."""
        m = max(self.n - 2, 0)
        return SeriesCaps(x=m, q=min(self.q_cap, max_finite_inversions(m)), z=m, s=m)


@dataclass(frozen=True)
class SummandRecord:
    L: int
    R: int
    M: int
    prefactor: QPoly
    s_intertwined: QPoly
    s_no_descent: QPoly
    s_one_descent: QPoly
    s_multi_descent: QPoly

    @property
    def total(self) -> QPoly:
        return self.prefactor * (self.s_intertwined + self.s_no_descent
                                 + self.s_one_descent + self.s_multi_descent)


@dataclass
class SBreakdown:
    n: int
    q_cap: int
    records: List[SummandRecord] = field(default_factory=list)


def long_gf(n: int, q_cap: int) -> QPoly:
    """q^n/(1-q^n) * sum_{k=1}^{n-1} [n,k]^2, truncated at q_cap."""
    if n < 2:
        raise PreconditionError(f"rank must be at least 2, got {n}")
    squares = qpoly_sum(q_binomial(n, k) * q_binomial(n, k) for k in range(1, n))
    numerator = squares.shift(n).truncate(q_cap)
    periodic = (QPoly.one() - QPoly.monomial(n)).inverse_series(q_cap)
    return (numerator * periodic).truncate(q_cap)


def long_numerator(n: int) -> QPoly:
    """
    P(q) with long_gf = P(q)/(1-q), i.e. q^n/[n]_q * sum_k [n,k]^2.

    The division is exact for every prime n; composite n may raise
    PreconditionError.
    """
    squares = qpoly_sum(q_binomial(n, k) * q_binomial(n, k) for k in range(1, n))
    return squares.exact_divide(q_integer(n)).shift(n)


def stable_prime_value(p: int) -> int:
    """(C(2p, p) - 2)/p, the constant tail of f_p for prime p."""
    if not sympy.isprime(p):
        raise PreconditionError(f"{p} is not prime")
    return (comb(2 * p, p) - 2) // p


@lru_cache(maxsize=None)
def finite_fc_gf(x_cap: int, q_cap: int) -> MultiSeries:
    """
    C(x, q) = sum over n of sum over FC permutations of S_n of x^n q^inv.

    Computed as the quotient of
        sum_m (-1)^m x^(m+1) q^(m(m+3)/2) / ((x;q)_(m+1) (q;q)_m)
    by
        sum_m (-1)^m x^m q^(m(m+1)/2) / ((x;q)_m (q;q)_m),
    which omits the empty permutation; the constant 1 is added back.
    """
    caps = SeriesCaps(x=x_cap, q=q_cap, z=0, s=0)
    one = MultiSeries.one(caps)
    numerator = MultiSeries.zero(caps)
    denominator = MultiSeries.zero(caps)

    inv_x_poch = one          # 1/(x;q)_m
    inv_q_poch = one          # 1/(q;q)_m
    for m in range(0, x_cap + 1):
        if m > 0:
            inv_x_poch = mul(inv_x_poch, geometric(MultiSeries.monomial(caps, x=1, q=m - 1)))
            inv_q_poch = mul(inv_q_poch, geometric(MultiSeries.monomial(caps, q=m)))
        sign = -1 if m % 2 else 1

        den_q = m * (m + 1) // 2
        if den_q <= q_cap:
            term = MultiSeries.monomial(caps, x=m, q=den_q, coeff=sign)
            denominator = denominator + mul(mul(term, inv_x_poch), inv_q_poch)

        num_q = m * (m + 3) // 2
        if m + 1 <= x_cap and num_q <= q_cap:
            next_inv_x = mul(inv_x_poch, geometric(MultiSeries.monomial(caps, x=1, q=m)))
            term = MultiSeries.monomial(caps, x=m + 1, q=num_q, coeff=sign)
            numerator = numerator + mul(mul(term, next_inv_x), inv_q_poch)

    return one + mul(numerator, invert(denominator))


def finite_fc_polynomial(n: int, q_cap: int) -> QPoly:
    """[x^n] C(x, q) up to q^q_cap."""
    inner_cap = min(q_cap, max_finite_inversions(n))
    series = finite_fc_gf(n, inner_cap)
    return extract(series, "x", n).to_qpoly().truncate(q_cap)


def prefactor(L: int, R: int) -> QPoly:
    """q^(L+R-1) [L+R-2, L-1]."""
    return q_binomial(L + R - 2, L - 1).shift(L + R - 1)


def _check_profile(L: int, R: int, M: int) -> None:
    if L < 1 or R < 1 or M < 0:
        raise PreconditionError(f"invalid profile L={L}, R={R}, M={M}")


def s0_at(L: int, R: int, M: int, q_cap: int) -> QPoly:
    """No descents among the middle entries."""
    _check_profile(L, R, M)
    total = qpoly_sum(
        (q_binomial(L - 1 + mu, mu) * q_binomial(R + M - mu, M - mu)).shift(mu)
        for mu in range(M + 1)
    )
    return total.truncate(q_cap)


def s1_at(L: int, R: int, M: int, q_cap: int) -> QPoly:
    """Exactly one descent among the middle entries."""
    _check_profile(L, R, M)
    total = qpoly_sum(
        (q_binomial(M, mu) - QPoly.one()) * q_binomial(L + mu, mu) * q_binomial(R + M - mu, M - mu)
        for mu in range(1, M)
    )
    return total.truncate(q_cap)


def sI_at(L: int, R: int, M: int, q_cap: int) -> QPoly:
    """Finite factors in which some right entry precedes some left entry."""
    _check_profile(L, R, M)
    parts = []
    for rho in range(R):
        for lam in range(L):
            for mu in range(M + 1):
                offset = (lam + 1) * (mu + 1) + (rho + 1) * (M - mu + 1) - 1
                if offset > q_cap:
                    continue
                term = (q_binomial(M, mu)
                        * q_binomial(L - lam - 1 + mu, mu)
                        * q_binomial(lam + rho, lam)
                        * q_binomial(M - mu + R - rho - 1, M - mu))
                parts.append(term.shift(offset).truncate(q_cap))
    return qpoly_sum(parts)


def auxiliary_series(caps: SeriesCaps) -> MultiSeries:
    """
    N(x, q, z, s): sum over m, 1 <= i <= m-1, of
    x^(m+1) ([m, i] - 1) z^i sum_{k=1}^{m-i-1} (qs)^k.
    """
    terms: Dict = {}
    for m in range(3, caps.x):
        for i in range(1, min(m - 1, caps.z + 1)):
            one_descent = q_binomial(m, i) - QPoly.one()
            for k in range(1, min(m - i - 1, caps.s) + 1):
                for degree, c in enumerate(one_descent.coeffs):
                    if c and degree + k <= caps.q:
                        key = (m + 1, degree + k, i, k)
                        terms[key] = terms.get(key, 0) + c
    return MultiSeries(caps, terms)


@lru_cache(maxsize=None)
def middle_descent_series(x_cap: int, q_cap: int, z_cap: int, s_cap: int) -> MultiSeries:
    """
    D(x, q, z, s) counting 321-avoiding permutations with at least two
    descents by size, inversions, entries left of the leftmost descent (z)
    and entries right of the rightmost descent (s).

    D = (E(s) + E(1) F(s) - E(s) F(1)) / (1 - F(1)). E(1) and F(1) are
    summed with s = 1 substituted termwise.
    """
    caps = SeriesCaps(x=x_cap, q=q_cap, z=z_cap, s=s_cap)
    logger.info(f"Building middle-descent series with caps {tuple(caps)}")
    one = MultiSeries.one(caps)
    aux = auxiliary_series(caps)
    if aux.is_zero():
        return MultiSeries.zero(caps)
    aux_valuation = aux.valuation("x")

    e_s = MultiSeries.zero(caps)
    e_1 = MultiSeries.zero(caps)
    f_s = MultiSeries.zero(caps)
    f_1 = MultiSeries.zero(caps)

    inv_qs = one       # 1/(qs;q)_m
    inv_xs = one       # 1/(xs;q)_(m+1), built below
    inv_q = one        # 1/(q;q)_m
    inv_x = one        # 1/(x;q)_(m+1)
    for m in range(0, x_cap + 1):
        if m > 0:
            inv_qs = mul(inv_qs, geometric(MultiSeries.monomial(caps, q=m, s=1)))
            inv_q = mul(inv_q, geometric(MultiSeries.monomial(caps, q=m)))
        inv_xs = mul(inv_xs, geometric(MultiSeries.monomial(caps, x=1, q=m, s=1)))
        inv_x = mul(inv_x, geometric(MultiSeries.monomial(caps, x=1, q=m)))
        sign = -1 if m % 2 else 1
        inv_qs_next = mul(inv_qs, geometric(MultiSeries.monomial(caps, q=m + 1, s=1)))
        inv_q_next = mul(inv_q, geometric(MultiSeries.monomial(caps, q=m + 1)))

        e_q = m * (m + 1) // 2
        if m + aux_valuation <= x_cap and e_q <= q_cap:
            scaled = substitute_s_scale(aux, m)
            lead = MultiSeries.monomial(caps, x=m, q=e_q, s=m, coeff=sign)
            e_s = e_s + mul(mul(mul(lead, scaled), inv_qs), inv_xs)
            lead_1 = MultiSeries.monomial(caps, x=m, q=e_q, coeff=sign)
            e_1 = e_1 + mul(mul(mul(lead_1, specialize_s_to_one(scaled)), inv_q), inv_x)

        f_q = (m + 1) * (m + 2) // 2
        if m + 1 <= x_cap and f_q <= q_cap:
            lead = MultiSeries.monomial(caps, x=m + 1, q=f_q, s=m + 1, coeff=sign)
            f_s = f_s + mul(mul(lead, inv_qs_next), inv_xs)
            lead_1 = MultiSeries.monomial(caps, x=m + 1, q=f_q, coeff=sign)
            f_1 = f_1 + mul(mul(lead_1, inv_q_next), inv_x)

    numerator = e_s + mul(e_1, f_s) - mul(e_s, f_1)
    result = mul(numerator, invert(one - f_1))
    logger.debug(f"Middle-descent series has {len(result)} terms")
    return result


def functional_equation_residual(d: MultiSeries, aux: MultiSeries) -> MultiSeries:
    """
    (1-qs)(1-xs) D(s) - (1-qs) N(s) - xqs D(1) + xqs D(qs).

    Vanishes within caps when D solves the generating-tree equation.
    """
    caps = d.caps
    one = MultiSeries.one(caps)
    qs = MultiSeries.monomial(caps, q=1, s=1)
    xs = MultiSeries.monomial(caps, x=1, s=1)
    xqs = MultiSeries.monomial(caps, x=1, q=1, s=1)
    kernel = mul(one - qs, one - xs)
    return (mul(kernel, d) - mul(one - qs, aux)
            - mul(xqs, specialize_s_to_one(d)) + mul(xqs, substitute_s_scale(d, 1)))


def middle_coefficients(d: MultiSeries, M: int) -> Dict[tuple, QPoly]:
    """{(i, j): d_ij(q)} for the x^M coefficient of D."""
    at_size = extract(d, "x", M)
    out: Dict[tuple, Dict[int, int]] = {}
    for (_x, q_deg, i, j), c in at_size.terms.items():
        out.setdefault((i, j), {})[q_deg] = c
    return {key: qpoly_from_counts(coeffs) for key, coeffs in out.items()}


def s2_at(L: int, R: int, M: int, d: Optional[MultiSeries], q_cap: int) -> QPoly:
    """At least two descents among the middle entries."""
    _check_profile(L, R, M)
    if M < 4:
        return QPoly.zero()
    if d is None:
        raise PreconditionError(f"middle-descent series required for M={M}")
    caps = d.caps
    if caps.x < M or caps.z < M or caps.s < M or caps.q < min(q_cap, max_finite_inversions(M)):
        raise PreconditionError(f"caps {tuple(caps)} insufficient for M={M}, q_cap={q_cap}")
    parts = []
    for (i, j), d_ij in middle_coefficients(d, M).items():
        if i < 1 or j < 1:
            continue
        parts.append((q_binomial(L + i, L) * q_binomial(R + j, R) * d_ij).truncate(q_cap))
    return qpoly_sum(parts)


def _middle_series_for(config: AssemblyConfig) -> Optional[MultiSeries]:
    caps = config.middle_caps
    if caps.x < 4:
        return None
    return middle_descent_series(caps.x, caps.q, caps.z, caps.s)


def s_breakdown(n: int, q_cap: int) -> SBreakdown:
    """Per-(L, R) summands of f_n."""
    config = AssemblyConfig(n, q_cap)
    d = _middle_series_for(config)
    breakdown = SBreakdown(n=n, q_cap=q_cap)
    for L in range(1, n):
        for R in range(1, n - L + 1):
            M = n - L - R
            record = SummandRecord(
                L=L, R=R, M=M,
                prefactor=prefactor(L, R),
                s_intertwined=sI_at(L, R, M, q_cap),
                s_no_descent=s0_at(L, R, M, q_cap),
                s_one_descent=s1_at(L, R, M, q_cap),
                s_multi_descent=s2_at(L, R, M, d, q_cap),
            )
            logger.debug(f"n={n} L={L} R={R} M={M}: {record.total.evaluate_at_one()} elements")
            breakdown.records.append(record)
    return breakdown


def case_polynomials(n: int, q_cap: int) -> Dict[str, QPoly]:
    """f_n split by case; the values sum to assemble_f(n, q_cap)."""
    breakdown = s_breakdown(n, q_cap)

    def weighted(attr: str) -> QPoly:
        return qpoly_sum((r.prefactor * getattr(r, attr)).truncate(q_cap) for r in breakdown.records)

    return {
        "long": long_gf(n, q_cap),
        "finite": finite_fc_polynomial(n, q_cap),
        "intertwined": weighted("s_intertwined"),
        "no_middle_descent": weighted("s_no_descent"),
        "one_middle_descent": weighted("s_one_descent"),
        "multi_middle_descent": weighted("s_multi_descent"),
    }


@lru_cache(maxsize=64)
def assemble_f(n: int, q_cap: int) -> QPoly:
    """f_n(q) truncated at q^q_cap."""
    logger.info(f"Assembling f_{n} up to q^{q_cap}")
    total = qpoly_sum(case_polynomials(n, q_cap).values()).truncate(q_cap)
    logger.info(f"f_{n}: {len(total.coeffs)} coefficients")
    return total


class SeriesAssembler:
    """Produces f_n coefficient lists, backed by an optional SeriesCache."""

    def __init__(self, config: Optional[ConfigLoader] = None,
                 cache: Optional[SeriesCache] = None):
        """
        Initialize the assembler.

        Args:
            config: Loaded configuration; the default file is used if None
            cache: Store for computed coefficient lists; nothing is cached if None
        """
        self.config = config or ConfigLoader()
        self.cache = cache
        self.logger = get_logger(__name__)

    def resolve_qcap(self, n: int, q_cap: Optional[int] = None) -> int:
        """Explicit cap, else series.default_qcap, else the default cap policy."""
        if q_cap is not None:
            return q_cap
        return self.config.get("series.default_qcap", default_caps(n).q)

    def coefficients(self, n: int, q_cap: Optional[int] = None) -> List[int]:
        """
        Coefficients of f_n for q^0..q^q_cap.

        Raises:
            PreconditionError: n < 2 or q_cap < 1
        """
        q_cap = self.resolve_qcap(n, q_cap)
        key = {"kind": "f", "n": n, "q_cap": q_cap}
        if self.cache is not None:
            cached = self.cache.get(key)
            if cached is not None:
                self.logger.debug(f"f_{n} up to q^{q_cap} served from cache")
                return cached
        coefficients = assemble_f(n, q_cap).padded(q_cap + 1)
        if self.cache is not None:
            self.cache.set(key, coefficients)
        return coefficients

    def cases(self, n: int, q_cap: Optional[int] = None) -> Dict[str, QPoly]:
        return case_polynomials(n, self.resolve_qcap(n, q_cap))
