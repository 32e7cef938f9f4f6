"""Coefficient-wise check of the defining relations on a matrix representation.

The relation is checked with the denominator cleared,

    (u - v) [T_ij(u), T_kl(v)] = (T_kj(u) T_il(v) - T_kj(v) T_il(u)) * s,

with ``s = (-1)^(ij + ik + jk)`` on parities and the super-commutator sign
``(-1)^((i+j)(k+l))``. Both sides are expanded in independent u and v.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from ..linalg import int_bound, int_matmul, to_integer
from .module import YangianRep


@dataclass(frozen=True)
class Violation:
    i: int
    j: int
    k: int
    l: int
    u_power: int
    v_power: int
    row: int
    col: int
    lhs: Fraction
    rhs: Fraction


@dataclass(frozen=True)
class RelationsReport:
    ok: bool
    checked: int
    violation: Violation | None = None


class _IntegerForm:
    """All coefficient matrices over one common denominator, with cached products."""

    def __init__(self, rep: YangianRep):
        self.p = rep.level
        self.dim = rep.dim
        mats = {}
        den = 1
        for i, row in enumerate(rep.entries):
            for j, poly in enumerate(row):
                for r, c in enumerate(poly.coeffs):
                    den = math.lcm(den, *(Fraction(x).denominator for x in c.flat))
                    mats[i, j, r] = c
        self.den = den
        self.ints = {}
        self.bounds = {}
        for key, c in mats.items():
            n, _ = to_integer(c, den)
            if n.size and int_bound(n):
                self.ints[key] = n
                self.bounds[key] = int_bound(n)
        self._products: dict = {}

    def product(self, a: tuple, b: tuple):
        """``den**2 * X_a @ X_b`` as an integer array, or None when zero."""
        key = (a, b)
        if key not in self._products:
            x, y = self.ints.get(a), self.ints.get(b)
            if x is None or y is None:
                self._products[key] = None
            else:
                prod = int_matmul(x, y, self.bounds[a], self.bounds[b])
                self._products[key] = prod if np.any(prod != 0) else None
        return self._products[key]


def _combine(terms) -> np.ndarray | None:
    acc = None
    for sign, mat in terms:
        if mat is None:
            continue
        acc = sign * mat if acc is None else acc + sign * mat
    return acc


# largest product tensor (in entries) the batched path may allocate
BATCH_BUDGET = 4_000_000
_INT64_HALF = 2**61


def _stacked_integers(rep: YangianRep):
    """All coefficients as one integer array of shape (N, N, p+1, d, d), and its scale."""
    N, R, d = rep.size, rep.level + 1, rep.dim
    den = 1
    for row in rep.entries:
        for poly in row:
            for c in poly.coeffs:
                den = math.lcm(den, *(x.denominator for x in c.flat))
    stack = np.zeros((N, N, R, d, d), dtype=object)
    for i, row in enumerate(rep.entries):
        for j, poly in enumerate(row):
            for r, c in enumerate(poly.coeffs):
                stack[i, j, r] = to_integer(c, den)[0]
    return stack, den


def _relations_hold_batched(rep: YangianRep) -> bool | None:
    """All relations at once from a single batched product tensor.

    Returns None when the tensor would exceed the memory budget.
    """
    N, R, d = rep.size, rep.level + 1, rep.dim
    Q = N * N * R
    if Q * Q * d * d > BATCH_BUDGET:
        return None
    stack, _ = _stacked_integers(rep)
    bound = int_bound(stack) if stack.size else 0
    flat = stack.reshape(Q, d, d)
    if 4 * bound * bound * max(d, 1) < _INT64_HALF:
        flat = flat.astype(np.int64)
    prod = np.matmul(flat[:, None], flat[None, :]).reshape(N, N, R, N, N, R, d, d)

    bits = np.array(rep.parity.bits)
    bi, bj, bk, bl = np.ix_(bits, bits, bits, bits)
    super_sign = (-1) ** ((bi + bj) * (bk + bl))
    rhs_sign = (-1) ** (bi * bj + bi * bk + bj * bk)
    expand = (...,) + (None,) * 4  # broadcast (i,j,k,l) signs over (r, s, row, col)

    # axes (i, j, k, l, r, s, row, col)
    commutator = (prod.transpose(0, 1, 3, 4, 2, 5, 6, 7)
                  - super_sign[expand] * prod.transpose(3, 4, 0, 1, 5, 2, 6, 7))
    pad = np.zeros((N, N, N, N, R + 1, R + 1, d, d), dtype=commutator.dtype)
    lhs = pad.copy()
    lhs[:, :, :, :, 1:, :R] += commutator
    lhs[:, :, :, :, :R, 1:] -= commutator
    rhs = pad
    rhs[:, :, :, :, :R, :R] = rhs_sign[expand] * (
        prod.transpose(3, 1, 0, 4, 2, 5, 6, 7) - prod.transpose(3, 1, 0, 4, 5, 2, 6, 7)
    )
    return bool(np.all(lhs == rhs))


def check_defining_relations(rep: YangianRep, batched: bool = True) -> RelationsReport:
    """Compare both sides of every relation coefficient by coefficient, exactly.

    The batched path decides all relations with one tensor of products; on
    failure (or when it does not fit) the slice-by-slice path runs to report
    the first violation.
    """
    N, p = rep.size, rep.level
    if batched and _relations_hold_batched(rep):
        return RelationsReport(True, N**4 * (p + 2) ** 2)
    form = _IntegerForm(rep)
    bits = rep.parity.bits
    N, p = len(bits), rep.level
    zero = np.zeros((rep.dim, rep.dim), dtype=object)
    checked = 0
    for i, j, k, l in itertools.product(range(N), repeat=4):
        super_sign = (-1) ** ((bits[i] + bits[j]) * (bits[k] + bits[l]))
        rhs_sign = (-1) ** (bits[i] * bits[j] + bits[i] * bits[k] + bits[j] * bits[k])

        def F(r, s):
            if not (0 <= r <= p and 0 <= s <= p):
                return None
            return _combine([
                (1, form.product((i, j, r), (k, l, s))),
                (-super_sign, form.product((k, l, s), (i, j, r))),
            ])

        for x in range(p + 2):
            for y in range(p + 2):
                lhs = _combine([(1, F(x - 1, y)), (-1, F(x, y - 1))])
                rhs = None
                if x <= p and y <= p:
                    rhs = _combine([
                        (rhs_sign, form.product((k, j, x), (i, l, y))),
                        (-rhs_sign, form.product((k, j, y), (i, l, x))),
                    ])
                checked += 1
                left = zero if lhs is None else lhs
                right = zero if rhs is None else rhs
                diff = left - right
                if np.any(diff != 0):
                    r_, c_ = (int(v[0]) for v in np.nonzero(diff != 0))
                    den2 = form.den ** 2
                    return RelationsReport(False, checked, Violation(
                        i + 1, j + 1, k + 1, l + 1, x, y, r_, c_,
                        Fraction(int(left[r_, c_]), den2), Fraction(int(right[r_, c_]), den2),
                    ))
    return RelationsReport(True, checked)
