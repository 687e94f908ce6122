"""
Q-Series Module

Exact truncated arithmetic over arbitrary-precision integers:

* ``QPoly``: dense polynomials in q (index = q-degree).
* ``MultiSeries``: sparse formal series in the commuting variables
  x, q, z, s, truncated to a per-variable degree box.

Arithmetic inside the box is exact; anything above a cap is discarded.
"""

from dataclasses import dataclass
from functools import lru_cache
from types import MappingProxyType
from typing import Dict, Iterable, Iterator, List, Mapping, NamedTuple, Optional, Tuple, Union

from .errors import CapMismatchError, NonUnitError, PreconditionError


VARIABLES = ("x", "q", "z", "s")

Exponent = Tuple[int, int, int, int]


@dataclass(frozen=True)
class QPoly:
    """Polynomial in q with integer coefficients, stored densely."""

    coeffs: Tuple[int, ...] = ()

    def __post_init__(self):
        coeffs = tuple(int(c) for c in self.coeffs)
        end = len(coeffs)
        while end and coeffs[end - 1] == 0:
            end -= 1
        object.__setattr__(self, "coeffs", coeffs[:end])

    @classmethod
    def zero(cls) -> "QPoly":
        return cls(())

    @classmethod
    def one(cls) -> "QPoly":
        return cls((1,))

    @classmethod
    def monomial(cls, degree: int, coeff: int = 1) -> "QPoly":
        if degree < 0:
            raise PreconditionError(f"negative q-degree {degree}")
        return cls((0,) * degree + (coeff,))

    @property
    def degree(self) -> int:
        """Index of the last nonzero coefficient, -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def coefficient(self, i: int) -> int:
        if 0 <= i < len(self.coeffs):
            return self.coeffs[i]
        return 0

    def padded(self, length: int) -> List[int]:
        """Coefficients of q^0..q^(length-1), zero-filled."""
        return [self.coefficient(i) for i in range(length)]

    def evaluate_at_one(self) -> int:
        return sum(self.coeffs)

    def __add__(self, other: "QPoly") -> "QPoly":
        if not isinstance(other, QPoly):
            return NotImplemented
        size = max(len(self.coeffs), len(other.coeffs))
        return QPoly(tuple(self.coefficient(i) + other.coefficient(i) for i in range(size)))

    def __neg__(self) -> "QPoly":
        return QPoly(tuple(-c for c in self.coeffs))

    def __sub__(self, other: "QPoly") -> "QPoly":
        if not isinstance(other, QPoly):
            return NotImplemented
        return self + (-other)

    def __mul__(self, other: Union["QPoly", int]) -> "QPoly":
        if isinstance(other, int):
            return QPoly(tuple(c * other for c in self.coeffs))
        if not isinstance(other, QPoly):
            return NotImplemented
        if self.is_zero() or other.is_zero():
            return QPoly.zero()
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return QPoly(tuple(out))

    __rmul__ = __mul__

    def shift(self, k: int) -> "QPoly":
        """Multiply by q^k."""
        if self.is_zero():
            return self
        return QPoly((0,) * k + self.coeffs)

    def truncate(self, q_cap: int) -> "QPoly":
        return QPoly(self.coeffs[: q_cap + 1])

    def exact_divide(self, divisor: "QPoly") -> "QPoly":
        """
        Polynomial long division that must leave no remainder.

        Raises:
            PreconditionError: if the divisor is zero, its leading
                coefficient does not divide evenly, or a remainder is left.
        """
        if divisor.is_zero():
            raise PreconditionError("division by the zero polynomial")
        remainder = list(self.coeffs)
        lead = divisor.coeffs[-1]
        quotient = [0] * max(len(remainder) - len(divisor.coeffs) + 1, 0)
        for k in range(len(quotient) - 1, -1, -1):
            top = remainder[k + divisor.degree]
            if top % lead:
                raise PreconditionError("division is not exact over the integers")
            factor = top // lead
            quotient[k] = factor
            if factor:
                for j, d in enumerate(divisor.coeffs):
                    remainder[k + j] -= factor * d
        if any(remainder):
            raise PreconditionError("division leaves a nonzero remainder")
        return QPoly(tuple(quotient))

    def inverse_series(self, q_cap: int) -> "QPoly":
        """Power-series inverse modulo q^(q_cap+1); constant term must be +1 or -1."""
        c0 = self.coefficient(0)
        if c0 not in (1, -1):
            raise NonUnitError(f"constant term {c0} is not a unit")
        inverse = [0] * (q_cap + 1)
        inverse[0] = c0
        for i in range(1, q_cap + 1):
            acc = 0
            for j in range(1, min(i, self.degree) + 1):
                acc += self.coeffs[j] * inverse[i - j]
            inverse[i] = -c0 * acc
        return QPoly(tuple(inverse))

    def __str__(self) -> str:
        if self.is_zero():
            return "0"
        parts = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            if i == 0:
                parts.append(str(c))
            elif i == 1:
                parts.append(f"{c}q" if c != 1 else "q")
            else:
                parts.append(f"{c}q^{i}" if c != 1 else f"q^{i}")
        return " + ".join(parts).replace("+ -", "- ")


@lru_cache(maxsize=None)
def q_binomial(n: int, k: int) -> QPoly:
    """
    Gaussian polynomial [n choose k]_q.

    Built with the q-Pascal rule [n,k] = [n-1,k-1] + q^k [n-1,k].
    Returns zero when k < 0 or k > n.
    """
    if n < 0:
        raise PreconditionError(f"q_binomial needs n >= 0, got {n}")
    if k < 0 or k > n:
        return QPoly.zero()
    if k == 0 or k == n:
        return QPoly.one()
    return q_binomial(n - 1, k - 1) + q_binomial(n - 1, k).shift(k)


def q_integer(n: int) -> QPoly:
    """[n]_q = 1 + q + ... + q^(n-1)."""
    return QPoly((1,) * n)


class SeriesCaps(NamedTuple):
    """Degree cap per variable."""

    x: int
    q: int
    z: int
    s: int

    def admits(self, exponent: Exponent) -> bool:
        return (exponent[0] <= self.x and exponent[1] <= self.q
                and exponent[2] <= self.z and exponent[3] <= self.s)


def default_caps(n_max: int) -> SeriesCaps:
    """Caps covering the short-element bound plus three full periods."""
    half_floor, half_ceil = n_max // 2, (n_max + 1) // 2
    q_cap = n_max + 2 * half_floor * half_ceil + 3 * n_max
    return SeriesCaps(x=n_max, q=q_cap, z=n_max, s=n_max)


class MultiSeries:
    """
    Sparse truncated series in x, q, z, s.

    Terms map exponent 4-tuples to nonzero integers; every stored exponent
    lies inside ``caps``. Instances are not mutated after construction.
    """

    __slots__ = ("caps", "_terms")

    def __init__(self, caps: SeriesCaps, terms: Optional[Mapping[Exponent, int]] = None):
        self.caps = SeriesCaps(*caps)
        clean: Dict[Exponent, int] = {}
        if terms:
            for exponent, coeff in terms.items():
                if coeff and self.caps.admits(exponent):
                    clean[exponent] = coeff
        self._terms = clean

    @classmethod
    def _trusted(cls, caps: SeriesCaps, terms: Dict[Exponent, int]) -> "MultiSeries":
        series = cls.__new__(cls)
        series.caps = caps
        series._terms = terms
        return series

    # Constructors

    @classmethod
    def zero(cls, caps: SeriesCaps) -> "MultiSeries":
        return cls(caps)

    @classmethod
    def one(cls, caps: SeriesCaps) -> "MultiSeries":
        return cls(caps, {(0, 0, 0, 0): 1})

    @classmethod
    def monomial(cls, caps: SeriesCaps, x: int = 0, q: int = 0, z: int = 0, s: int = 0,
                 coeff: int = 1) -> "MultiSeries":
        return cls(caps, {(x, q, z, s): coeff})

    @classmethod
    def variable(cls, caps: SeriesCaps, name: str) -> "MultiSeries":
        exponent = [0, 0, 0, 0]
        exponent[_var_index(name)] = 1
        return cls(caps, {tuple(exponent): 1})

    @classmethod
    def from_qpoly(cls, caps: SeriesCaps, poly: QPoly, x: int = 0, z: int = 0,
                   s: int = 0) -> "MultiSeries":
        """Embed ``poly`` times x^x z^z s^s."""
        return cls(caps, {(x, i, z, s): c for i, c in enumerate(poly.coeffs)})

    # Accessors

    @property
    def terms(self) -> Mapping[Exponent, int]:
        return MappingProxyType(self._terms)

    def coefficient(self, x: int = 0, q: int = 0, z: int = 0, s: int = 0) -> int:
        return self._terms.get((x, q, z, s), 0)

    def is_zero(self) -> bool:
        return not self._terms

    def __len__(self) -> int:
        return len(self._terms)

    def __iter__(self) -> Iterator[Tuple[Exponent, int]]:
        return iter(sorted(self._terms.items()))

    def valuation(self, var: str) -> Optional[int]:
        """Smallest exponent of ``var`` among stored terms, None if zero."""
        if not self._terms:
            return None
        idx = _var_index(var)
        return min(e[idx] for e in self._terms)

    def with_caps(self, caps: SeriesCaps) -> "MultiSeries":
        """Re-cap the series; terms outside the new caps are dropped."""
        return MultiSeries(caps, self._terms)

    def to_qpoly(self) -> QPoly:
        """Convert a series in q alone."""
        dense = [0] * (self.caps.q + 1)
        for (ex, eq, ez, es), c in self._terms.items():
            if ex or ez or es:
                raise PreconditionError("series involves variables other than q")
            dense[eq] = c
        return QPoly(tuple(dense))

    # Arithmetic

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, MultiSeries):
            return NotImplemented
        return self.caps == other.caps and self._terms == other._terms

    def __hash__(self):
        return hash((self.caps, frozenset(self._terms.items())))

    def __add__(self, other: "MultiSeries") -> "MultiSeries":
        if not isinstance(other, MultiSeries):
            return NotImplemented
        _check_caps(self, other)
        out = dict(self._terms)
        for exponent, coeff in other._terms.items():
            total = out.get(exponent, 0) + coeff
            if total:
                out[exponent] = total
            else:
                out.pop(exponent, None)
        return MultiSeries._trusted(self.caps, out)

    def __neg__(self) -> "MultiSeries":
        return MultiSeries._trusted(self.caps, {e: -c for e, c in self._terms.items()})

    def __sub__(self, other: "MultiSeries") -> "MultiSeries":
        if not isinstance(other, MultiSeries):
            return NotImplemented
        return self + (-other)

    def __mul__(self, other: Union["MultiSeries", int]) -> "MultiSeries":
        if isinstance(other, int):
            if other == 0:
                return MultiSeries.zero(self.caps)
            return MultiSeries._trusted(self.caps, {e: c * other for e, c in self._terms.items()})
        if not isinstance(other, MultiSeries):
            return NotImplemented
        return mul(self, other)

    __rmul__ = __mul__

    def __repr__(self) -> str:
        return f"MultiSeries(caps={tuple(self.caps)}, terms={len(self._terms)})"


def _var_index(name: str) -> int:
    try:
        return VARIABLES.index(name)
    except ValueError:
        raise PreconditionError(f"unknown variable {name!r}") from None


def _check_caps(a: MultiSeries, b: MultiSeries) -> None:
    if a.caps != b.caps:
        raise CapMismatchError(f"caps differ: {tuple(a.caps)} vs {tuple(b.caps)}")


def mul(a: MultiSeries, b: MultiSeries) -> MultiSeries:
    """Truncated product; caps of both operands must agree."""
    _check_caps(a, b)
    caps = a.caps
    if len(a) > len(b):
        a, b = b, a

    # b grouped by x-degree, each group sorted by q-degree so the q cap can stop the scan
    groups: Dict[int, List[Tuple[int, int, int, int]]] = {}
    for (bx, bq, bz, bs), bc in b._terms.items():
        groups.setdefault(bx, []).append((bq, bz, bs, bc))
    for group in groups.values():
        group.sort()
    x_degrees = sorted(groups)

    out: Dict[Exponent, int] = {}
    for (ax, aq, az, as_), ac in a._terms.items():
        x_room, q_room = caps.x - ax, caps.q - aq
        z_room, s_room = caps.z - az, caps.s - as_
        for bx in x_degrees:
            if bx > x_room:
                break
            ex = ax + bx
            for bq, bz, bs, bc in groups[bx]:
                if bq > q_room:
                    break
                if bz > z_room or bs > s_room:
                    continue
                key = (ex, aq + bq, az + bz, as_ + bs)
                out[key] = out.get(key, 0) + ac * bc
    return MultiSeries._trusted(caps, {e: c for e, c in out.items() if c})


def invert(a: MultiSeries) -> MultiSeries:
    """
    Multiplicative inverse within caps.

    Raises:
        NonUnitError: if the constant term is not +1 or -1.
    """
    c0 = a.coefficient()
    if c0 not in (1, -1):
        raise NonUnitError(f"constant term {c0} is not a unit")
    # a = c0 (1 - r) with r free of constant term, so a^-1 = c0 (1 + r + r^2 + ...)
    one = MultiSeries.one(a.caps)
    r = one - a * c0
    total = one
    power = one
    while True:
        power = mul(power, r)
        if power.is_zero():
            break
        total = total + power
    return total * c0


def geometric(monomial: MultiSeries) -> MultiSeries:
    """1/(1 - m) for a single-term series m without constant term."""
    if monomial.is_zero():
        return MultiSeries.one(monomial.caps)
    if len(monomial) != 1:
        raise PreconditionError("geometric() expects a single monomial")
    (exponent, coeff), = monomial.terms.items()
    if not any(exponent):
        raise PreconditionError("monomial must not be constant")
    caps = monomial.caps
    out: Dict[Exponent, int] = {}
    k, power = 0, 1
    while True:
        e = tuple(k * v for v in exponent)
        if not caps.admits(e):
            break
        out[e] = power
        k += 1
        power *= coeff
    return MultiSeries._trusted(caps, out)


def q_pochhammer(a: MultiSeries, n: int) -> MultiSeries:
    """(a; q)_n = (1 - a)(1 - aq)...(1 - aq^(n-1)), truncated to a's caps."""
    if n < 0:
        raise PreconditionError(f"negative Pochhammer length {n}")
    caps = a.caps
    result = MultiSeries.one(caps)
    one = MultiSeries.one(caps)
    for i in range(n):
        result = mul(result, one - mul(a, MultiSeries.monomial(caps, q=i)))
    return result


def q_pochhammer_inverse(a: MultiSeries, n: int) -> MultiSeries:
    """1/(a; q)_n; a monomial ``a`` is expanded factor by factor as geometric series."""
    if len(a) != 1:
        return invert(q_pochhammer(a, n))
    caps = a.caps
    result = MultiSeries.one(caps)
    for i in range(n):
        result = mul(result, geometric(mul(a, MultiSeries.monomial(caps, q=i))))
    return result


def substitute_s_scale(a: MultiSeries, power: int) -> MultiSeries:
    """Apply s -> s * q^power."""
    caps = a.caps
    out = {}
    for (ex, eq, ez, es), c in a.terms.items():
        shifted = eq + power * es
        if shifted <= caps.q:
            out[(ex, shifted, ez, es)] = c
    return MultiSeries._trusted(caps, out)


def specialize_s_to_one(a: MultiSeries) -> MultiSeries:
    """
    Apply s -> 1.

    Exact only when every s-degree of the true series lies within the s cap.
    """
    out: Dict[Exponent, int] = {}
    for (ex, eq, ez, _es), c in a.terms.items():
        key = (ex, eq, ez, 0)
        out[key] = out.get(key, 0) + c
    return MultiSeries._trusted(a.caps, {e: c for e, c in out.items() if c})


def extract(a: MultiSeries, var: str, degree: int) -> MultiSeries:
    """Coefficient of var^degree; var's cap is kept but var no longer occurs."""
    idx = _var_index(var)
    if degree < 0 or degree > a.caps[idx]:
        raise PreconditionError(f"degree {degree} outside the {var} cap {a.caps[idx]}")
    out = {}
    for exponent, c in a.terms.items():
        if exponent[idx] == degree:
            reduced = list(exponent)
            reduced[idx] = 0
            out[tuple(reduced)] = c
    return MultiSeries._trusted(a.caps, out)


def qpoly_sum(parts: Iterable[QPoly]) -> QPoly:
    total = QPoly.zero()
    for part in parts:
        total = total + part
    return total


def qpoly_from_counts(counts: Mapping[int, int]) -> QPoly:
    """Dense polynomial from a {degree: coefficient} tally."""
    if not counts:
        return QPoly.zero()
    return QPoly(tuple(counts.get(k, 0) for k in range(max(counts) + 1)))
