"""Dense exact linear algebra over Q.

Matrices are numpy object arrays holding ``Fraction`` entries; vectors are
1-d object arrays. Products go through an integer path (common denominator,
int64 when the entry bound allows it, Python ints otherwise) because that is
where almost all of the time goes.
"""
from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

_INT64_SAFE = 2**62


def qzeros(rows: int, cols: int | None = None) -> np.ndarray:
    shape = (rows,) if cols is None else (rows, cols)
    out = np.empty(shape, dtype=object)
    out.fill(Fraction(0))
    return out


def qeye(n: int) -> np.ndarray:
    out = qzeros(n, n)
    for i in range(n):
        out[i, i] = Fraction(1)
    return out


def qarray(rows) -> np.ndarray:
    arr = np.array(rows, dtype=object)
    flat = arr.reshape(-1)
    for idx, x in enumerate(flat):
        flat[idx] = Fraction(x)
    return arr


def is_zero(a: np.ndarray) -> bool:
    return not any(x != 0 for x in a.flat)


def to_integer(a: np.ndarray, den: int | None = None) -> tuple[np.ndarray, int]:
    """Return ``(N, d)`` with ``a == N / d`` and N an integer object array."""
    if den is None:
        den = math.lcm(1, *(Fraction(x).denominator for x in a.flat))
    out = np.empty(a.shape, dtype=object)
    flat_out, flat_in = out.reshape(-1), a.reshape(-1)
    for idx, x in enumerate(flat_in):
        if not isinstance(x, Fraction):
            x = Fraction(x)
        flat_out[idx] = x.numerator * (den // x.denominator)
    return out, den


def int_bound(a: np.ndarray) -> int:
    return max((abs(int(x)) for x in a.flat), default=0)


def int_matmul(a: np.ndarray, b: np.ndarray, bound_a: int | None = None,
               bound_b: int | None = None) -> np.ndarray:
    """Exact product of integer arrays, using int64 whenever it cannot overflow."""
    if bound_a is None:
        bound_a = int_bound(a)
    if bound_b is None:
        bound_b = int_bound(b)
    inner = a.shape[-1] if a.ndim else 1
    if bound_a * bound_b * max(inner, 1) < _INT64_SAFE:
        prod = a.astype(np.int64) @ b.astype(np.int64)
        return prod.astype(object)
    return a.astype(object) @ b.astype(object)


def from_integer(n: np.ndarray, den: int) -> np.ndarray:
    out = np.empty(n.shape, dtype=object)
    flat_out, flat_in = out.reshape(-1), n.reshape(-1)
    for idx, x in enumerate(flat_in):
        flat_out[idx] = Fraction(int(x), den)
    return out


def qmatmul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    na, da = to_integer(a)
    nb, db = to_integer(b)
    return from_integer(int_matmul(na, nb), da * db)


def rref(rows: Sequence[Sequence[Fraction]], ncols: int | None = None
         ) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form of a list of rows; zero rows are dropped."""
    mat = [[Fraction(x) for x in r] for r in rows]
    if ncols is None:
        ncols = len(mat[0]) if mat else 0
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        pivot = next((i for i in range(r, len(mat)) if mat[i][c] != 0), None)
        if pivot is None:
            continue
        mat[r], mat[pivot] = mat[pivot], mat[r]
        inv = 1 / mat[r][c]
        mat[r] = [x * inv for x in mat[r]]
        for i in range(len(mat)):
            if i != r and mat[i][c] != 0:
                f = mat[i][c]
                mat[i] = [x - f * y for x, y in zip(mat[i], mat[r])]
        pivots.append(c)
        r += 1
        if r == len(mat):
            break
    return mat[:r], pivots


class Subspace:
    """A subspace of Q^n kept in reduced row echelon form."""

    def __init__(self, dim: int, rows: Iterable[Sequence[Fraction]] = ()):
        self.dim = dim
        rows = [list(r) for r in rows]
        self.basis, self.pivots = rref(rows, dim) if rows else ([], [])

    def __len__(self) -> int:
        return len(self.basis)

    def reduce(self, v: Sequence[Fraction]) -> list[Fraction]:
        """Remainder of ``v`` modulo the subspace (zero at every pivot)."""
        v = [Fraction(x) for x in v]
        for row, c in zip(self.basis, self.pivots):
            f = v[c]
            if f:
                v = [x - f * y for x, y in zip(v, row)]
        return v

    def contains(self, v: Sequence[Fraction]) -> bool:
        return not any(self.reduce(v))

    def add(self, v: Sequence[Fraction]) -> bool:
        """Insert ``v``; returns False when it was already in the span."""
        w = self.reduce(v)
        c = next((i for i, x in enumerate(w) if x != 0), None)
        if c is None:
            return False
        inv = 1 / w[c]
        w = [x * inv for x in w]
        new_basis = []
        for row in self.basis:
            f = row[c]
            new_basis.append([x - f * y for x, y in zip(row, w)] if f else row)
        pos = sum(1 for p in self.pivots if p < c)
        new_basis.insert(pos, w)
        self.basis = new_basis
        self.pivots = self.pivots[:pos] + [c] + self.pivots[pos:]
        return True

    def coordinates(self, v: Sequence[Fraction]) -> list[Fraction]:
        """Coordinates of ``v`` (assumed in the span) in the rref basis."""
        return [Fraction(v[c]) for c in self.pivots]

    def matrix(self) -> np.ndarray:
        return qarray(self.basis) if self.basis else qzeros(0, self.dim)


def nullspace(mat: np.ndarray) -> list[list[Fraction]]:
    """Basis of the right kernel of ``mat``."""
    ncols = mat.shape[1]
    rows, pivots = rref([list(r) for r in mat], ncols) if mat.shape[0] else ([], [])
    free = [c for c in range(ncols) if c not in set(pivots)]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for row, p in zip(rows, pivots):
            v[p] = -row[f]
        basis.append(v)
    return basis


def common_kernel(mats: Sequence[np.ndarray], dim: int) -> list[list[Fraction]]:
    nonzero = [m for m in mats if not is_zero(m)]
    if not nonzero:
        return [[Fraction(int(i == j)) for j in range(dim)] for i in range(dim)]
    return nullspace(np.vstack(nonzero))


def column_space(mats: Sequence[np.ndarray], dim: int) -> Subspace:
    """Sum of the images of ``mats``."""
    cols = [list(m[:, j]) for m in mats for j in range(m.shape[1])]
    return Subspace(dim, cols)


def intersect(a: Subspace, b: Subspace) -> Subspace:
    """Intersection of two subspaces via the kernel of ``[A^T | -B^T]``."""
    if not len(a) or not len(b):
        return Subspace(a.dim)
    A, B = a.basis, b.basis
    system = qzeros(a.dim, len(A) + len(B))
    for j, row in enumerate(A):
        system[:, j] = row
    for j, row in enumerate(B):
        system[:, len(A) + j] = [-x for x in row]
    vecs = []
    for coeffs in nullspace(system):
        v = [Fraction(0)] * a.dim
        for c, row in zip(coeffs[: len(A)], A):
            if c:
                v = [x + c * y for x, y in zip(v, row)]
        vecs.append(v)
    return Subspace(a.dim, vecs)


def apply(mat: np.ndarray, v: Sequence[Fraction]) -> list[Fraction]:
    out = []
    for row in mat:
        acc = Fraction(0)
        for x, y in zip(row, v):
            if x and y:
                acc += x * y
        out.append(acc)
    return out


def span_closure(seeds: Iterable[Sequence[Fraction]], operators: Sequence[np.ndarray],
                 dim: int) -> Subspace:
    """Smallest subspace containing ``seeds`` and invariant under ``operators``."""
    ops = [m for m in operators if not is_zero(m)]
    space = Subspace(dim)
    queue = []
    for s in seeds:
        if space.add(s):
            queue.append(list(s))
    while queue:
        v = queue.pop()
        for m in ops:
            w = apply(m, v)
            if space.add(w):
                queue.append(w)
    return space
