"""Explicit level-p matrix representations of the super Yangian.

A representation stores, for every pair ``(i, j)``, the matrix polynomial
``T_ij(u) = delta_ij u^p + t_ij^(1) u^(p-1) + ... + t_ij^(p)`` acting on a
Z/2-graded space. Matrix storage is 0-based; the public ``i, j`` arguments
of :meth:`YangianRep.T` and friends are 1-based.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Sequence

import numpy as np

from ..exact import parse_rat
from ..hw import ParitySeq
from ..linalg import Subspace, from_integer, is_zero, qarray, qeye, qmatmul, qzeros, to_integer

DEFAULT_MAX_DIM = 256


class DimensionCapError(ValueError):
    pass


@dataclass(frozen=True)
class SuperVec:
    parities: tuple[int, ...]

    @property
    def dim(self) -> int:
        return len(self.parities)


class PolyMatrix:
    """Matrix polynomial in u, coefficient matrices in ascending powers."""

    __slots__ = ("coeffs", "size")

    def __init__(self, coeffs: Sequence[np.ndarray], size: int | None = None):
        coeffs = list(coeffs)
        if size is None:
            if not coeffs:
                raise ValueError("size needed for the zero polynomial")
            size = coeffs[0].shape[0]
        while coeffs and is_zero(coeffs[-1]):
            coeffs.pop()
        self.coeffs = tuple(coeffs)
        self.size = size

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def coefficient(self, power: int) -> np.ndarray:
        if 0 <= power < len(self.coeffs):
            return self.coeffs[power]
        return qzeros(self.size, self.size)

    def __call__(self, x) -> np.ndarray:
        x = Fraction(x)
        acc = qzeros(self.size, self.size)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def shifted(self, t) -> PolyMatrix:
        """Coefficients of ``T(u + t)``."""
        t = Fraction(t)
        out = [qzeros(self.size, self.size) for _ in self.coeffs]
        for r, c in enumerate(self.coeffs):
            for s in range(r + 1):
                out[s] = out[s] + c * (comb(r, s) * t ** (r - s))
        return PolyMatrix(out, self.size)

    def apply(self, v: Sequence[Fraction]) -> list[list[Fraction]]:
        """Vector polynomial ``T(u) v`` as a list of coefficient vectors."""
        vec = np.array(list(v), dtype=object)
        return [list(c.dot(vec)) for c in self.coeffs]

    def __mul__(self, other: PolyMatrix) -> PolyMatrix:
        out = [qzeros(self.size, self.size) for _ in range(len(self.coeffs) + len(other.coeffs) - 1)]
        for r, a in enumerate(self.coeffs):
            for s, b in enumerate(other.coeffs):
                out[r + s] = out[r + s] + qmatmul(a, b)
        return PolyMatrix(out, self.size)

    def is_zero(self) -> bool:
        return not self.coeffs


@dataclass(frozen=True, eq=False)
class YangianRep:
    parity: ParitySeq
    level: int
    space: SuperVec
    entries: tuple[tuple[PolyMatrix, ...], ...]
    xi: tuple[Fraction, ...] | None = None

    def __post_init__(self):
        N, d, p = len(self.parity), self.space.dim, self.level
        if len(self.entries) != N or any(len(row) != N for row in self.entries):
            raise ValueError("T must be an (m+n)x(m+n) array of matrix polynomials")
        if self.xi is not None and len(self.xi) != d:
            raise ValueError("distinguished vector has the wrong length")
        par = self.space.parities
        for i in range(N):
            for j in range(N):
                poly = self.entries[i][j]
                if poly.size != d or poly.degree > p:
                    raise ValueError(f"T_{i + 1}{j + 1} has the wrong size or degree")
                lead = poly.coefficient(p)
                if i == j and not np.array_equal(lead, qeye(d)) and d:
                    raise ValueError(f"T_{i + 1}{i + 1} is not monic of degree {p}")
                if i != j and not is_zero(lead):
                    raise ValueError(f"T_{i + 1}{j + 1} has a nonzero u^{p} term")
                gen = (self.parity.bits[i] + self.parity.bits[j]) % 2
                for c in poly.coeffs:
                    for r, col in zip(*np.nonzero(c != 0)):
                        if (par[r] + par[col]) % 2 != gen:
                            raise ValueError(
                                f"T_{i + 1}{j + 1} breaks the parity grading at ({r}, {col})"
                            )

    @property
    def dim(self) -> int:
        return self.space.dim

    @property
    def size(self) -> int:
        """Number of rows/columns of T, i.e. m+n."""
        return len(self.parity)

    def T(self, i: int, j: int) -> PolyMatrix:
        return self.entries[i - 1][j - 1]

    def generator(self, i: int, j: int, r: int) -> np.ndarray:
        """Matrix of ``t_ij^(r)``, the coefficient of ``u^(p-r)`` in ``T_ij``."""
        return self.T(i, j).coefficient(self.level - r)

    def generator_matrices(self) -> list[np.ndarray]:
        N = self.size
        return [
            self.generator(i, j, r)
            for i in range(1, N + 1)
            for j in range(1, N + 1)
            for r in range(1, self.level + 1)
        ]

    def raising_matrices(self) -> list[np.ndarray]:
        N = self.size
        return [
            self.generator(i, j, r)
            for i in range(1, N + 1)
            for j in range(i + 1, N + 1)
            for r in range(1, self.level + 1)
        ]

    def with_xi(self, xi: Sequence[Fraction] | None) -> YangianRep:
        return YangianRep(
            self.parity, self.level, self.space, self.entries,
            None if xi is None else tuple(Fraction(x) for x in xi),
        )


def _gl_vector_matrices(parity: ParitySeq):
    N = len(parity)
    E = {}
    for i in range(N):
        for j in range(N):
            m = qzeros(N, N)
            m[i, j] = Fraction(1)
            E[i, j] = m
    return E, tuple(parity.bits)


def _gl11_kac_matrices(a1: Fraction, a2: Fraction, quotient: bool):
    """gl(1|1) action on the Kac module with basis v, w = E21 v.

    The atypical case ``a1 + a2 == 0`` collapses to the 1-dimensional
    quotient spanned by v unless ``quotient`` is False.
    """
    if quotient and a1 + a2 == 0:
        E = {(0, 0): qarray([[a1]]), (1, 1): qarray([[a2]]),
             (0, 1): qzeros(1, 1), (1, 0): qzeros(1, 1)}
        return E, (0,)
    E = {
        (0, 0): qarray([[a1, 0], [0, a1 - 1]]),
        (1, 1): qarray([[a2, 0], [0, a2 + 1]]),
        (1, 0): qarray([[0, 0], [1, 0]]),
        (0, 1): qarray([[0, a1 + a2], [0, 0]]),
    }
    return E, (0, 1)


def evaluation_rep(parity: ParitySeq, E, parities: Sequence[int], shift=0,
                   xi: Sequence | None = None) -> YangianRep:
    """Level-1 rep ``T_ij(u) = delta_ij (u - shift) + (-1)^(parity_i) E_ij``."""
    shift = Fraction(shift)
    N, d = len(parity), len(parities)
    entries = []
    for i in range(N):
        row = []
        sign = -1 if parity.bits[i] else 1
        for j in range(N):
            c0 = E[i, j] * sign
            if i == j:
                c0 = c0 - qeye(d) * shift
                row.append(PolyMatrix([c0, qeye(d)], d))
            else:
                row.append(PolyMatrix([c0], d))
        entries.append(tuple(row))
    if xi is None:
        xi = [Fraction(int(k == 0)) for k in range(d)]
    return YangianRep(parity, 1, SuperVec(tuple(parities)), tuple(entries),
                      tuple(Fraction(x) for x in xi))


def build_eval_module(kind: str, parity: ParitySeq | str, shift=0, weight=None,
                      quotient: bool = True) -> YangianRep:
    """Evaluation module pulled back along ``u -> u - shift``.

    ``kind="vector"``: the natural module C^{m|n}, highest vector e_1.
    ``kind="kac"``: the gl(1|1) Kac module of highest weight ``weight=(a1, a2)``
    (its 1-dimensional quotient when a1 + a2 = 0 and ``quotient`` is set).
    ``kind="trivial"``: the 1-dimensional module ``T_ij(u) = delta_ij (u - shift)``.
    """
    if isinstance(parity, str):
        parity = ParitySeq.parse(parity)
    if kind == "vector":
        E, pars = _gl_vector_matrices(parity)
        return evaluation_rep(parity, E, pars, shift)
    if kind == "kac":
        if parity.bits not in ((0, 1), (1, 0)):
            raise ValueError("kac modules need parity sequence 01 or 10")
        if weight is None or len(weight) != 2:
            raise ValueError("kac modules need a weight (a1, a2)")
        a1, a2 = (parse_rat(a) for a in weight)
        E, pars = _gl11_kac_matrices(a1, a2, quotient)
        return evaluation_rep(parity, E, pars, shift)
    if kind == "trivial":
        N = len(parity)
        E = {(i, j): qzeros(1, 1) for i in range(N) for j in range(N)}
        return evaluation_rep(parity, E, (0,), shift)
    raise ValueError(f"unknown module kind {kind!r}")


def tensor_modules(r1: YangianRep, r2: YangianRep, max_dim: int = DEFAULT_MAX_DIM) -> YangianRep:
    """Graded tensor product through the coproduct ``T_ij -> sum_k T_ik (x) T_kj``.

    Operators act by ``(x (x) y)(v (x) w) = (-1)^(|y||v|) xv (x) yw``.
    """
    if r1.parity != r2.parity:
        raise ValueError("parity sequence mismatch")
    d1, d2 = r1.dim, r2.dim
    if d1 * d2 > max_dim:
        raise DimensionCapError(f"tensor dimension {d1 * d2} exceeds cap {max_dim}")
    bits = r1.parity.bits
    N = len(bits)
    p = r1.level + r2.level
    par1 = np.array(r1.space.parities)
    signs = {0: np.ones(d1, dtype=object), 1: np.array([(-1) ** int(x) for x in par1], dtype=object)}
    # integer numerators over one denominator per factor; zero blocks dropped
    ints1, den1 = _integer_entries(r1)
    ints2, den2 = _integer_entries(r2)
    entries = []
    for i in range(N):
        row = []
        for j in range(N):
            acc = [None] * (p + 1)
            for k in range(N):
                ypar = (bits[k] + bits[j]) % 2
                for r, x in ints1[i][k]:
                    xs = x * signs[ypar][None, :]
                    for s, y in ints2[k][j]:
                        term = np.kron(xs, y)
                        acc[r + s] = term if acc[r + s] is None else acc[r + s] + term
            coeffs = [
                qzeros(d1 * d2, d1 * d2) if a is None else from_integer(a, den1 * den2)
                for a in acc
            ]
            row.append(PolyMatrix(coeffs, d1 * d2))
        entries.append(tuple(row))
    space = SuperVec(tuple((a + b) % 2 for a in r1.space.parities for b in r2.space.parities))
    xi = None
    if r1.xi is not None and r2.xi is not None:
        xi = tuple(a * b for a in r1.xi for b in r2.xi)
    return YangianRep(r1.parity, p, space, tuple(entries), xi)


def _integer_entries(rep: YangianRep):
    """Nonzero coefficients of every T_ij as ``(power, numerators)`` over a common denominator."""
    den = 1
    for row in rep.entries:
        for poly in row:
            for c in poly.coeffs:
                den = math.lcm(den, *(x.denominator for x in c.flat))
    table = [
        [[(r, to_integer(c, den)[0]) for r, c in enumerate(poly.coeffs) if not is_zero(c)]
         for poly in row]
        for row in rep.entries
    ]
    return table, den


def tensor_all(reps: Sequence[YangianRep], max_dim: int = DEFAULT_MAX_DIM) -> YangianRep:
    out = reps[0]
    for r in reps[1:]:
        out = tensor_modules(out, r, max_dim)
    return out


def relabel(rep: YangianRep, i: int) -> YangianRep:
    """Twist by the transposition ``(i, i+1)``: ``T_ab -> T_{s(a) s(b)}``."""
    N = rep.size
    s = list(range(N))
    s[i - 1], s[i] = s[i], s[i - 1]
    entries = tuple(tuple(rep.entries[s[a]][s[b]] for b in range(N)) for a in range(N))
    return YangianRep(rep.parity.swapped(i), rep.level, rep.space, entries, rep.xi)


def negate_variable(rep: YangianRep) -> YangianRep:
    """``T(u) -> (-1)^p T(-u)`` with every parity bit flipped.

    For ``m + n = 2`` this realizes the isomorphisms between the Yangians for
    ``01`` and ``10`` (and ``00`` and ``11``); highest-weight roots negate.
    """
    p = rep.level
    entries = tuple(
        tuple(
            PolyMatrix([c * ((-1) ** (p + r)) for r, c in enumerate(poly.coeffs)], poly.size)
            for poly in row
        )
        for row in rep.entries
    )
    flipped = ParitySeq(tuple(1 - b for b in rep.parity.bits))
    return YangianRep(flipped, p, rep.space, entries, rep.xi)


def _map_entries(rep: YangianRep, fn, new_dim: int) -> tuple:
    return tuple(
        tuple(PolyMatrix([fn(c) for c in poly.coeffs], new_dim) for poly in row)
        for row in rep.entries
    )


def restrict(rep: YangianRep, sub: Subspace) -> YangianRep:
    """Restriction to an invariant graded subspace, in its rref basis."""
    basis = sub.matrix()  # rows
    piv = list(sub.pivots)
    bt = basis.T.copy()
    fn = lambda c: qmatmul(c, bt)[piv, :] if len(piv) else qzeros(0, 0)  # noqa: E731
    parities = tuple(rep.space.parities[c] for c in piv)
    xi = None if rep.xi is None else tuple(rep.xi[c] for c in piv)
    return YangianRep(rep.parity, rep.level, SuperVec(parities),
                      _map_entries(rep, fn, len(piv)), xi)


def quotient(rep: YangianRep, sub: Subspace) -> YangianRep:
    """Quotient by an invariant graded subspace, coordinates = non-pivot columns."""
    d = rep.dim
    piv = set(sub.pivots)
    keep = [c for c in range(d) if c not in piv]
    reducer = qeye(d)
    for row, c in zip(sub.basis, sub.pivots):
        # v -> v - v[c] * row
        reducer[:, c] = reducer[:, c] - qarray(row)
    fn = lambda c: qmatmul(reducer, c)[np.ix_(keep, keep)]  # noqa: E731
    parities = tuple(rep.space.parities[c] for c in keep)
    xi = None
    if rep.xi is not None:
        red = sub.reduce(rep.xi)
        xi = tuple(red[c] for c in keep)
    return YangianRep(rep.parity, rep.level, SuperVec(parities),
                      _map_entries(rep, fn, len(keep)), xi)
