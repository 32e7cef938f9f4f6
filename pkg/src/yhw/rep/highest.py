"""Cyclic spans, highest-weight readout and irreducible quotients."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from ..exact import MonicPoly, roots_from_coefficients
from ..hw import HighestWeight
from ..linalg import (
    Subspace,
    apply,
    column_space,
    common_kernel,
    intersect,
    qeye,
    span_closure,
)
from .module import YangianRep, quotient, restrict


class NotSingularError(ValueError):
    def __init__(self, i: int, j: int, power: int):
        super().__init__(f"xi is not singular: T_{i}{j} u^{power} coefficient acts nontrivially")
        self.witness = (i, j, power)


class NotEigenvectorError(ValueError):
    pass


def _scalar_on(mat, v: Sequence[Fraction]) -> Fraction | None:
    """The c with ``mat v == c v``, or None when v is not an eigenvector."""
    w = apply(mat, v)
    lead = next(idx for idx, x in enumerate(v) if x != 0)
    c = w[lead] / v[lead]
    if any(a != c * b for a, b in zip(w, v)):
        return None
    return c


def vector_eigenvalue(poly, v: Sequence[Fraction]) -> MonicPoly | None:
    """The monic polynomial ``f`` with ``poly(u) v == f(u) v``, if any."""
    coeffs = []
    for c in poly.coeffs:
        s = _scalar_on(c, v)
        if s is None:
            return None
        coeffs.append(s)
    return MonicPoly(roots_from_coefficients(coeffs))


def singular_witness(rep: YangianRep, v: Sequence[Fraction]):
    """First ``(i, j, power)`` with ``T_ij`` (i < j) not killing v, or None."""
    N = rep.size
    for i in range(1, N + 1):
        for j in range(i + 1, N + 1):
            for power, c in enumerate(rep.T(i, j).coeffs):
                if any(apply(c, v)):
                    return (i, j, power)
    return None


def read_weight(rep: YangianRep, v: Sequence[Fraction]) -> HighestWeight:
    comps = []
    for i in range(1, rep.size + 1):
        f = vector_eigenvalue(rep.T(i, i), v)
        if f is None:
            raise NotEigenvectorError(f"vector is not an eigenvector of T_{i}{i}(u)")
        comps.append(f)
    return HighestWeight(tuple(comps))


@dataclass(frozen=True)
class CyclicModule:
    span: Subspace
    weight: HighestWeight
    singular: bool

    @property
    def dim(self) -> int:
        return len(self.span)


def cyclic_highest_module(rep: YangianRep) -> CyclicModule:
    """Check that xi is a singular joint eigenvector and close up its span."""
    if rep.xi is None:
        raise ValueError("representation has no distinguished vector")
    if not any(rep.xi):
        raise ValueError("distinguished vector is zero")
    witness = singular_witness(rep, rep.xi)
    if witness is not None:
        raise NotSingularError(*witness)
    weight = read_weight(rep, rep.xi)
    span = span_closure([rep.xi], rep.generator_matrices(), rep.dim)
    return CyclicModule(span, weight, True)


def restrict_to_cyclic_span(rep: YangianRep) -> YangianRep:
    return restrict(rep, cyclic_highest_module(rep).span)


def _homogeneous_parts(rep: YangianRep, vectors) -> list[list[Fraction]]:
    out = []
    for v in vectors:
        for parity in (0, 1):
            part = [x if rep.space.parities[c] == parity else Fraction(0) for c, x in enumerate(v)]
            if any(part):
                out.append(part)
    return out


def non_highest_singular_vectors(rep: YangianRep) -> Subspace:
    """Singular vectors whose gl-weight differs from that of xi.

    Raising kernels are intersected with the sum of the images of
    ``H_i - mu_i``, where ``H_i = t_ii^(1)`` and ``mu_i`` is its eigenvalue on xi;
    on a weight module that sum is exactly the complement of the xi line.
    """
    d = rep.dim
    if rep.level == 0 or d <= 1:
        return Subspace(d)
    shifted = []
    for i in range(1, rep.size + 1):
        H = rep.generator(i, i, 1)
        mu = _scalar_on(H, rep.xi)
        if mu is None:
            raise NotEigenvectorError("xi is not a gl-weight vector")
        shifted.append(H - qeye(d) * mu)
    other_weights = column_space(shifted, d)
    if len(other_weights) != d - 1:
        raise ValueError("cyclic span is not a weight module with a 1-dimensional top")
    kernel = Subspace(d, common_kernel(rep.raising_matrices(), d))
    return intersect(kernel, other_weights)


def irreducible_quotient(rep: YangianRep) -> YangianRep:
    """Irreducible quotient L(lambda) of the cyclic span of xi.

    Repeatedly removes the submodule generated by the singular vectors not
    proportional to xi, until xi spans the only singular line.
    """
    current = restrict_to_cyclic_span(rep)
    while True:
        extra = non_highest_singular_vectors(current)
        if not len(extra):
            return current
        seeds = _homogeneous_parts(current, extra.basis)
        sub = span_closure(seeds, current.generator_matrices(), current.dim)
        current = quotient(current, sub)
