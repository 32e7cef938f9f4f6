"""Exact rational scalars, monic polynomials kept as root multisets, reduced
ratios and truncated power series in ``u**-1``.

Root convention used throughout the package: a stored root value ``r``
stands for the linear factor ``(u + r)``, not for the zero ``u = -r``.
"""
from __future__ import annotations

import math
import re
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import product
from typing import Iterable, Sequence

Rat = Fraction

_RAT_RE = re.compile(r"^\s*(-?\d+)\s*(?:/\s*(\d+)\s*)?$")


def parse_rat(value) -> Fraction:
    """Parse a rational literal such as ``"3"``, ``"-1/2"`` or an int."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise ValueError(f"not a rational literal: {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if not isinstance(value, str):
        raise ValueError(f"not a rational literal: {value!r}")
    match = _RAT_RE.match(value)
    if match is None:
        raise ValueError(f"not a rational literal: {value!r}")
    num, den = match.group(1), match.group(2)
    if den is not None and int(den) == 0:
        raise ValueError(f"zero denominator in {value!r}")
    return Fraction(int(num), int(den) if den is not None else 1)


def format_rat(x) -> str:
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


@dataclass(frozen=True)
class RootMultiset:
    """Multiset of rational roots, stored sorted in descending order."""

    roots: tuple[Fraction, ...] = ()

    def __post_init__(self):
        ordered = tuple(sorted(
            (r if isinstance(r, Fraction) else Fraction(r) for r in self.roots), reverse=True
        ))
        object.__setattr__(self, "roots", ordered)

    @classmethod
    def of(cls, *roots) -> RootMultiset:
        return cls(tuple(parse_rat(r) for r in roots))

    @classmethod
    def from_counter(cls, counts: Counter) -> RootMultiset:
        return cls(tuple(counts.elements()))

    def counter(self) -> Counter:
        return Counter(self.roots)

    def __len__(self) -> int:
        return len(self.roots)

    def __iter__(self):
        return iter(self.roots)

    def __add__(self, other: RootMultiset) -> RootMultiset:
        return RootMultiset(self.roots + tuple(other))

    def _merge(self, other: RootMultiset) -> tuple[list, list, list]:
        """Walk both descending tuples: (only in self, common, only in other)."""
        a, b = self.roots, other.roots
        i = j = 0
        left, common, right = [], [], []
        while i < len(a) and j < len(b):
            if a[i] == b[j]:
                common.append(a[i])
                i += 1
                j += 1
            elif a[i] > b[j]:
                left.append(a[i])
                i += 1
            else:
                right.append(b[j])
                j += 1
        left.extend(a[i:])
        right.extend(b[j:])
        return left, common, right

    def intersection(self, other: RootMultiset) -> RootMultiset:
        return RootMultiset(tuple(self._merge(other)[1]))

    def difference(self, other: RootMultiset) -> RootMultiset:
        """Multiset difference; ``other`` must be contained in ``self``."""
        left, _, right = self._merge(other)
        if right:
            raise ValueError("difference of multisets requires containment")
        return RootMultiset(tuple(left))

    def shifted(self, t) -> RootMultiset:
        t = Fraction(t)
        return RootMultiset(tuple(r + t for r in self.roots))

    def negated(self) -> RootMultiset:
        return RootMultiset(tuple(-r for r in self.roots))

    def __str__(self) -> str:
        return "{" + ", ".join(format_rat(r) for r in self.roots) + "}"


def _poly_mul(a: Sequence[Fraction], b: Sequence[Fraction]) -> list[Fraction]:
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def expand_roots(roots: Iterable[Fraction]) -> tuple[Fraction, ...]:
    """Coefficients (ascending powers of u) of the product of ``(u + r)``."""
    coeffs = [Fraction(1)]
    for r in roots:
        coeffs = _poly_mul(coeffs, [Fraction(r), Fraction(1)])
    return tuple(coeffs)


@dataclass(frozen=True)
class MonicPoly:
    roots: RootMultiset = field(default_factory=RootMultiset)

    def __post_init__(self):
        if not isinstance(self.roots, RootMultiset):
            object.__setattr__(self, "roots", RootMultiset(tuple(self.roots)))

    @classmethod
    def one(cls) -> MonicPoly:
        return cls(RootMultiset())

    @classmethod
    def from_roots(cls, roots: Iterable) -> MonicPoly:
        return cls(RootMultiset(tuple(parse_rat(r) for r in roots)))

    @classmethod
    def from_coefficients(cls, coeffs: Sequence) -> MonicPoly:
        return cls(roots_from_coefficients([parse_rat(c) for c in coeffs]))

    @property
    def degree(self) -> int:
        return len(self.roots)

    @cached_property
    def coefficients(self) -> tuple[Fraction, ...]:
        """Ascending coefficients; the last entry is always 1."""
        return expand_roots(self.roots)

    def __call__(self, x) -> Fraction:
        acc = Fraction(0)
        for c in reversed(self.coefficients):
            acc = acc * x + c
        return acc

    def __mul__(self, other: MonicPoly) -> MonicPoly:
        return MonicPoly(self.roots + other.roots)

    def shift(self, t) -> MonicPoly:
        return shift_poly(self, t)

    def inverse_series(self, order: int) -> TruncatedSeries:
        """Series of ``P(u) / u**deg`` = product of ``(1 + r u**-1)``."""
        rev = list(reversed(self.coefficients))
        rev += [Fraction(0)] * max(0, order + 1 - len(rev))
        return TruncatedSeries(tuple(rev[: order + 1]))

    def __str__(self) -> str:
        if not self.roots:
            return "1"
        parts = []
        for r, mult in sorted(self.roots.counter().items(), reverse=True):
            if r == 0:
                base = "u"
            else:
                sign = "+" if r > 0 else "-"
                base = f"(u{sign}{format_rat(abs(r))})"
            parts.append(base if mult == 1 else f"{base}^{mult}")
        return "".join(parts)


@dataclass(frozen=True)
class RationalFn:
    """A ratio ``num/den`` of monic polynomials sharing no roots."""

    num: MonicPoly
    den: MonicPoly

    def __post_init__(self):
        if self.num.roots.intersection(self.den.roots):
            raise ValueError("RationalFn requires num and den without common roots")

    @property
    def is_one(self) -> bool:
        return not self.num.roots and not self.den.roots

    def inverse(self) -> RationalFn:
        return RationalFn(self.den, self.num)

    def __str__(self) -> str:
        return f"{self.num}/{self.den}"


def reduce_ratio(num: MonicPoly, den: MonicPoly) -> RationalFn:
    """Cancel the multiset intersection of the roots of ``num`` and ``den``."""
    left, _, right = num.roots._merge(den.roots)
    return RationalFn(MonicPoly(RootMultiset(tuple(left))), MonicPoly(RootMultiset(tuple(right))))


@dataclass(frozen=True)
class TruncatedSeries:
    """Coefficients of ``u**0, u**-1, ..., u**-N``."""

    coeffs: tuple[Fraction, ...]

    def __post_init__(self):
        if not self.coeffs:
            raise ValueError("a truncated series needs at least the constant term")
        object.__setattr__(self, "coeffs", tuple(Fraction(c) for c in self.coeffs))

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    @classmethod
    def one(cls, order: int) -> TruncatedSeries:
        return cls((Fraction(1),) + (Fraction(0),) * order)

    def truncate(self, order: int) -> TruncatedSeries:
        if order > self.order:
            raise ValueError("cannot extend a truncated series")
        return TruncatedSeries(self.coeffs[: order + 1])

    def __mul__(self, other: TruncatedSeries) -> TruncatedSeries:
        n = min(self.order, other.order)
        a, b = self.coeffs, other.coeffs
        return TruncatedSeries(
            tuple(sum((a[i] * b[k - i] for i in range(k + 1)), Fraction(0)) for k in range(n + 1))
        )

    def inverse(self) -> TruncatedSeries:
        a = self.coeffs
        if a[0] == 0:
            raise ZeroDivisionError("series with zero constant term is not invertible")
        inv = [1 / a[0]]
        for k in range(1, len(a)):
            inv.append(-sum((a[i] * inv[k - i] for i in range(1, k + 1)), Fraction(0)) / a[0])
        return TruncatedSeries(tuple(inv))

    def __str__(self) -> str:
        terms = []
        for k, c in enumerate(self.coeffs):
            if c:
                terms.append(format_rat(c) if k == 0 else f"{format_rat(c)}*u^-{k}")
        return " + ".join(terms) if terms else "0"


def expand_series(f: RationalFn, order: int) -> TruncatedSeries:
    """Expand ``f`` in powers of ``u**-1`` up to and including ``u**-order``."""
    if f.num.degree != f.den.degree:
        raise ValueError("series does not start at 1")
    num = f.num.inverse_series(order)
    den = f.den.inverse_series(order)
    return num * den.inverse()


def _divisors(n: int) -> list[int]:
    n = abs(n)
    small, large = [], []
    d = 1
    while d * d <= n:
        if n % d == 0:
            small.append(d)
            if d * d != n:
                large.append(n // d)
        d += 1
    return small + large[::-1]


def _synthetic_division(coeffs: list[Fraction], zero: Fraction) -> tuple[list[Fraction], Fraction]:
    """Divide ascending ``coeffs`` by ``(u - zero)``; returns quotient, remainder."""
    n = len(coeffs) - 1
    quotient = [Fraction(0)] * n
    acc = coeffs[n]
    for k in range(n - 1, -1, -1):
        quotient[k] = acc
        acc = coeffs[k] + acc * zero
    return quotient, acc


def roots_from_coefficients(coeffs: Sequence[Fraction]) -> RootMultiset:
    """Recover the rational root multiset of a monic polynomial.

    ``coeffs`` lists ascending powers of u with leading coefficient 1. Roots are
    returned in the ``(u + r)`` convention. Raises ``ValueError`` with message
    ``"non-rational root"`` when the polynomial does not split over Q.
    """
    coeffs = [Fraction(c) for c in coeffs]
    if not coeffs or coeffs[-1] != 1:
        raise ValueError("polynomial is not monic")
    roots: list[Fraction] = []
    while len(coeffs) > 1 and coeffs[0] == 0:
        roots.append(Fraction(0))
        coeffs = coeffs[1:]
    while len(coeffs) > 1:
        lcm = math.lcm(*(c.denominator for c in coeffs))
        ints = [int(c * lcm) for c in coeffs]
        content = math.gcd(*ints)
        ints = [v // content for v in ints]
        if ints[0] == 0:
            roots.append(Fraction(0))
            coeffs = coeffs[1:]
            continue
        found = None
        for p, q in product(_divisors(ints[0]), _divisors(ints[-1])):
            for zero in (Fraction(p, q), Fraction(-p, q)):
                _, rem = _synthetic_division(coeffs, zero)
                if rem == 0:
                    found = zero
                    break
            if found is not None:
                break
        if found is None:
            raise ValueError("non-rational root")
        coeffs, _ = _synthetic_division(coeffs, found)
        roots.append(-found)
    return RootMultiset(tuple(roots))


def shift_poly(poly: MonicPoly, t) -> MonicPoly:
    """Return ``P(u + t)``: every root ``r`` becomes ``r + t``."""
    return MonicPoly(poly.roots.shifted(t))
