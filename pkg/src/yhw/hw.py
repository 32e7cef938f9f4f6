"""Highest-weight calculus: parity sequences, odd reflections and the
finite-dimensionality decision for irreducible highest-weight modules.

Positions ``i`` are 1-based everywhere in this module.
"""
from __future__ import annotations

import enum
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, NamedTuple, Sequence

from .exact import (
    MonicPoly,
    RationalFn,
    RootMultiset,
    parse_rat,
    reduce_ratio,
)


class NonRationalComponent(ValueError):
    """Raised when a weight component is not a rational multiple of the others.

    ``position`` is the first 1-based ``i`` where ``lambda_i/lambda_{i+1}`` fails
    to be rational.
    """

    def __init__(self, position: int):
        super().__init__(f"non-rational component (ratio at position {position})")
        self.position = position


@dataclass(frozen=True)
class ParitySeq:
    bits: tuple[int, ...]

    def __post_init__(self):
        bits = tuple(int(b) for b in self.bits)
        if not bits:
            raise ValueError("parity sequence must be nonempty")
        if any(b not in (0, 1) for b in bits):
            raise ValueError("parity bits must be 0 or 1")
        object.__setattr__(self, "bits", bits)

    @classmethod
    def parse(cls, text: str) -> ParitySeq:
        if not text or set(text) - {"0", "1"}:
            raise ValueError(f"bad parity sequence {text!r}")
        return cls(tuple(int(c) for c in text))

    @classmethod
    def standard(cls, m: int, n: int) -> ParitySeq:
        return cls((0,) * m + (1,) * n)

    @property
    def m(self) -> int:
        return self.bits.count(0)

    @property
    def n(self) -> int:
        return self.bits.count(1)

    def __len__(self) -> int:
        return len(self.bits)

    def __getitem__(self, i: int) -> int:
        """1-based access."""
        if not 1 <= i <= len(self.bits):
            raise IndexError(i)
        return self.bits[i - 1]

    @property
    def is_standard(self) -> bool:
        return self.bits == tuple(sorted(self.bits))

    def swapped(self, i: int) -> ParitySeq:
        b = list(self.bits)
        b[i - 1], b[i] = b[i], b[i - 1]
        return ParitySeq(tuple(b))

    def __str__(self) -> str:
        return "".join(map(str, self.bits))


@dataclass(frozen=True)
class HighestWeight:
    """Level-p highest weight: ``m+n`` monic components of common degree p."""

    components: tuple[MonicPoly, ...]

    def __post_init__(self):
        comps = tuple(self.components)
        if not comps:
            raise ValueError("highest weight needs at least one component")
        if len({c.degree for c in comps}) != 1:
            raise ValueError("all components must have the same degree (the level)")
        object.__setattr__(self, "components", comps)

    @classmethod
    def from_roots(cls, *root_lists: Sequence) -> HighestWeight:
        return cls(tuple(MonicPoly.from_roots(r) for r in root_lists))

    @property
    def level(self) -> int:
        return self.components[0].degree

    def __len__(self) -> int:
        return len(self.components)

    def __getitem__(self, i: int) -> MonicPoly:
        """1-based access."""
        if not 1 <= i <= len(self.components):
            raise IndexError(i)
        return self.components[i - 1]

    def replace(self, changes: Mapping[int, MonicPoly]) -> HighestWeight:
        comps = list(self.components)
        for i, poly in changes.items():
            comps[i - 1] = poly
        return HighestWeight(tuple(comps))

    def stabilized(self, extra: int = 1) -> HighestWeight:
        """Multiply every component by ``u**extra`` (append zero roots)."""
        zeros = RootMultiset((Fraction(0),) * extra)
        return HighestWeight(tuple(MonicPoly(c.roots + zeros) for c in self.components))

    def __str__(self) -> str:
        return "(" + ", ".join(str(c) for c in self.components) + ")"


class Partition(NamedTuple):
    k: int
    a_distinct: RootMultiset
    b_distinct: RootMultiset
    shared: RootMultiset


def partition_common_roots(a: MonicPoly, b: MonicPoly) -> Partition:
    """Split two degree-p polynomials into distinct parts and shared roots.

    The shared part is the full multiset intersection, so ``k`` is minimal.
    Distinct parts come back sorted descending, which is the order satisfying
    the anti-string condition ``alpha_i - alpha_j + 1 != 0`` for ``i < j``.
    """
    if a.degree != b.degree:
        raise ValueError("partition_common_roots needs equal degrees")
    shared = a.roots.intersection(b.roots)
    a_distinct = a.roots.difference(shared)
    b_distinct = b.roots.difference(shared)
    return Partition(len(a_distinct), a_distinct, b_distinct, shared)


@dataclass(frozen=True)
class ReflectionStep:
    index: int
    direction: str  # "plus" (source 10) or "minus" (source 01)
    k: int
    shared: RootMultiset
    moved_i: RootMultiset
    moved_i1: RootMultiset


def odd_reflect(
    parity: ParitySeq, weight: HighestWeight, i: int
) -> tuple[ParitySeq, HighestWeight, ReflectionStep]:
    """Apply the odd reflection at the adjacent pair ``(i, i+1)``.

    A ``10`` pair goes to ``01`` with the non-shared roots shifted by +1, a
    ``01`` pair goes to ``10`` with shift -1. The non-shared roots of the two
    components trade places; shared roots stay in both.
    """
    if len(parity) != len(weight):
        raise ValueError("parity sequence and weight have different lengths")
    if not 1 <= i < len(parity):
        raise IndexError(f"position {i} out of range")
    if parity[i] == parity[i + 1]:
        raise ValueError("not an odd position")
    direction = "plus" if parity[i] == 1 else "minus"
    shift = 1 if direction == "plus" else -1
    part = partition_common_roots(weight[i], weight[i + 1])
    moved_i = part.b_distinct.shifted(shift)
    moved_i1 = part.a_distinct.shifted(shift)
    new_weight = weight.replace(
        {i: MonicPoly(moved_i + part.shared), i + 1: MonicPoly(moved_i1 + part.shared)}
    )
    step = ReflectionStep(i, direction, part.k, part.shared, moved_i, moved_i1)
    return parity.swapped(i), new_weight, step


def chain_to_standard(parity: ParitySeq, order: str = "smallest") -> list[int]:
    """Positions of the ``10 -> 01`` swaps that sort ``parity`` to standard form.

    ``order="smallest"`` always picks the leftmost ``10`` pair; ``"largest"``
    the rightmost. Either way the chain length is the number of inversions.
    """
    if order not in ("smallest", "largest"):
        raise ValueError(f"unknown order {order!r}")
    bits = list(parity.bits)
    chain = []
    while True:
        spots = [j for j in range(len(bits) - 1) if bits[j] == 1 and bits[j + 1] == 0]
        if not spots:
            return chain
        j = spots[0] if order == "smallest" else spots[-1]
        bits[j], bits[j + 1] = 0, 1
        chain.append(j + 1)


def _translate_class(x: Fraction) -> Fraction:
    return x - (x.numerator // x.denominator)


def is_p_shift_ratio(f: RationalFn) -> MonicPoly | None:
    """Find the monic P with ``P(u+1)/P(u) == f``, or None when none exists.

    Roots are grouped into classes modulo the integers; in each class both
    sides are sorted descending and paired positionally, and every pair
    ``(a, b)`` must satisfy ``a - b`` in ``{1, 2, ...}``. The answer is the
    product of the strings ``(u+b)(u+b+1)...(u+a-1)``.
    """
    if f.num.degree != f.den.degree:
        return None
    f = reduce_ratio(f.num, f.den)
    classes: dict[Fraction, tuple[list, list]] = defaultdict(lambda: ([], []))
    for a in f.num.roots:
        classes[_translate_class(a)][0].append(a)
    for b in f.den.roots:
        classes[_translate_class(b)][1].append(b)
    roots: list[Fraction] = []
    for tops, bottoms in classes.values():
        if len(tops) != len(bottoms):
            return None
        for a, b in zip(sorted(tops, reverse=True), sorted(bottoms, reverse=True)):
            if a - b < 1:
                return None
            roots.extend(b + j for j in range(int(a - b)))
    return MonicPoly(RootMultiset(tuple(roots)))


class Verdict(str, enum.Enum):
    FINITE = "FiniteDim"
    INFINITE = "InfiniteDim"


@dataclass(frozen=True)
class DrinfeldData:
    """Drinfeld polynomials for a weight on the standard parity sequence.

    ``P`` maps each even-pair position to its polynomial; ``qbar``/``q`` are the
    reduced numerator and denominator at position m (None when m or n is 0).
    """

    P: Mapping[int, MonicPoly]
    qbar: MonicPoly | None = None
    q: MonicPoly | None = None


@dataclass(frozen=True)
class Failure:
    position: int
    ratio: RationalFn  # oriented as required at that position
    step: str = "even_pair"


@dataclass(frozen=True)
class Decision:
    verdict: Verdict
    parity: ParitySeq
    weight: HighestWeight
    final_parity: ParitySeq
    final_weight: HighestWeight
    trail: tuple[ReflectionStep, ...] = ()
    drinfeld: DrinfeldData | None = None
    failure: Failure | None = None

    @property
    def finite(self) -> bool:
        return self.verdict is Verdict.FINITE

    def recheck(self) -> bool:
        """Validate the certificate against the stored final weight only."""
        sigma, lam = self.final_parity, self.final_weight
        if not sigma.is_standard or not self._trail_consistent():
            return False
        if self.finite:
            if self.drinfeld is None:
                return False
            for i in _even_positions(sigma):
                want = _oriented_ratio(sigma, lam, i)
                P = self.drinfeld.P.get(i)
                if P is None or reduce_ratio(P.shift(1), P) != want:
                    return False
            if sigma.m and sigma.n:
                d = self.drinfeld
                if d.qbar is None or d.q is None or d.qbar.degree != d.q.degree:
                    return False
                if reduce_ratio(d.qbar, d.q) != reduce_ratio(lam[sigma.m], lam[sigma.m + 1]):
                    return False
            return True
        fail = self.failure
        if fail is None:
            return False
        if fail.step == "non_rational":
            return True
        return (
            fail.ratio == _oriented_ratio(sigma, lam, fail.position)
            and is_p_shift_ratio(fail.ratio) is None
        )

    def _trail_consistent(self) -> bool:
        """Replay the recorded steps as bookkeeping on root multisets."""
        bits = list(self.parity.bits)
        comps = [c.roots for c in self.weight.components]
        for step in self.trail:
            i = step.index
            if not 1 <= i < len(bits):
                return False
            src = (bits[i - 1], bits[i])
            if src != ((1, 0) if step.direction == "plus" else (0, 1)):
                return False
            shift = 1 if step.direction == "plus" else -1
            a, b = comps[i - 1], comps[i]
            if a.intersection(b) != step.shared:
                return False
            if (b.difference(step.shared).shifted(shift) != step.moved_i
                    or a.difference(step.shared).shifted(shift) != step.moved_i1
                    or step.k + len(step.shared) != len(a)):
                return False
            comps[i - 1], comps[i] = step.moved_i + step.shared, step.moved_i1 + step.shared
            bits[i - 1], bits[i] = bits[i], bits[i - 1]
        return (tuple(bits) == self.final_parity.bits
                and tuple(comps) == tuple(c.roots for c in self.final_weight.components))


def _even_positions(parity: ParitySeq) -> list[int]:
    return [i for i in range(1, len(parity)) if parity[i] == parity[i + 1]]


def _oriented_ratio(parity: ParitySeq, weight: HighestWeight, i: int) -> RationalFn:
    """``lambda_i/lambda_{i+1}`` for a 00 pair, the inverse for a 11 pair."""
    if parity[i] == 0:
        return reduce_ratio(weight[i], weight[i + 1])
    return reduce_ratio(weight[i + 1], weight[i])


def even_pair_failures(parity: ParitySeq, weight: HighestWeight) -> list[int]:
    """Even pairs where the necessary Drinfeld-polynomial condition fails.

    This is checked on the given (possibly non-standard) parity sequence; any
    failure already forces an infinite-dimensional module.
    """
    return [
        i
        for i in _even_positions(parity)
        if is_p_shift_ratio(_oriented_ratio(parity, weight, i)) is None
    ]


def decide_finite_dimensional(
    parity: ParitySeq, weight: HighestWeight, order: str = "smallest"
) -> Decision:
    """Decide whether the irreducible module with this highest weight is
    finite-dimensional.

    Odd reflections at ``10`` pairs move the parity sequence to standard form
    (``order`` picks which pair first); the Drinfeld polynomial criterion is
    then applied on the standard sequence.
    """
    if len(parity) != len(weight):
        raise ValueError("parity sequence and weight have different lengths")
    sigma, lam = parity, weight
    trail = []
    for i in chain_to_standard(parity, order):
        sigma, lam, step = odd_reflect(sigma, lam, i)
        trail.append(step)
    P: dict[int, MonicPoly] = {}
    for i in _even_positions(sigma):
        ratio = _oriented_ratio(sigma, lam, i)
        poly = is_p_shift_ratio(ratio)
        if poly is None:
            return Decision(
                Verdict.INFINITE, parity, weight, sigma, lam, tuple(trail),
                failure=Failure(i, ratio),
            )
        P[i] = poly
    qbar = q = None
    if sigma.m and sigma.n:
        mid = reduce_ratio(lam[sigma.m], lam[sigma.m + 1])
        qbar, q = mid.num, mid.den
    return Decision(
        Verdict.FINITE, parity, weight, sigma, lam, tuple(trail),
        drinfeld=DrinfeldData(P, qbar, q),
    )


@dataclass(frozen=True)
class WeightComponent:
    """One highest-weight component given in ``u**-1`` form.

    The rational part is ``prod(1 + a u**-1) / prod(1 + b u**-1)`` over the
    roots of ``num`` and ``den``. ``opaque`` records non-rational series
    factors by name and exponent; they only cancel against identical factors.
    """

    num: MonicPoly = field(default_factory=MonicPoly.one)
    den: MonicPoly = field(default_factory=MonicPoly.one)
    opaque: Mapping[str, int] = field(default_factory=dict)

    @classmethod
    def from_inverse_coefficients(
        cls, num_coeffs: Sequence, den_coeffs: Sequence = (1,), opaque=None
    ) -> WeightComponent:
        """Build from coefficient lists ``[1, c1, c2, ...]`` in powers of ``u**-1``."""
        return cls(
            _poly_from_inverse_coeffs(num_coeffs),
            _poly_from_inverse_coeffs(den_coeffs),
            dict(opaque or {}),
        )


def _poly_from_inverse_coeffs(coeffs: Sequence) -> MonicPoly:
    cs = [parse_rat(c) for c in coeffs]
    if not cs or cs[0] != 1:
        raise ValueError("a u^-1 coefficient list must start with constant term 1")
    while len(cs) > 1 and cs[-1] == 0:
        cs.pop()
    # 1 + c1 x + ... + cd x^d  <->  u^d + c1 u^(d-1) + ... + cd
    return MonicPoly.from_coefficients(list(reversed(cs)))


@dataclass(frozen=True)
class Twist:
    """The series ``f(u)`` multiplying every component.

    ``roots`` lists the rational factors ``(1 + r u**-1)``; ``opaque`` the
    removed non-rational factors, with negated exponents.
    """

    roots: RootMultiset
    opaque: Mapping[str, int]


def normalize_twist(components: Sequence[WeightComponent]) -> tuple[HighestWeight, Twist]:
    """Twist a tuple of series components into level-p polynomial form.

    Each component is reduced, all are multiplied by the least common multiple
    of the denominators, and the results are padded with zero roots (factors
    of u) up to the common degree p.
    """
    if not components:
        raise ValueError("no components")
    base = {k: v for k, v in components[0].opaque.items() if v}
    for i in range(1, len(components)):
        here = {k: v for k, v in components[i].opaque.items() if v}
        if here != base:
            raise NonRationalComponent(i)
    nonzero = lambda ms: RootMultiset(tuple(r for r in ms if r != 0))  # noqa: E731
    reduced = [reduce_ratio(MonicPoly(nonzero(c.num.roots)), MonicPoly(nonzero(c.den.roots)))
               for c in components]
    lcm: Counter = Counter()
    for f in reduced:
        lcm |= f.den.roots.counter()
    lcm_roots = RootMultiset.from_counter(lcm)
    polys = [f.num.roots + lcm_roots.difference(f.den.roots) for f in reduced]
    p = max(len(r) for r in polys)
    padded = tuple(
        MonicPoly(r + RootMultiset((Fraction(0),) * (p - len(r)))) for r in polys
    )
    twist = Twist(lcm_roots, {k: -v for k, v in base.items()})
    return HighestWeight(padded), twist
