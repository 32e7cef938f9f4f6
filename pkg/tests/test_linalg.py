from fractions import Fraction

import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st

from yhw.linalg import (
    Subspace,
    apply,
    common_kernel,
    from_integer,
    int_matmul,
    intersect,
    nullspace,
    qarray,
    qmatmul,
    rref,
    span_closure,
    to_integer,
)

entries = st.fractions(-5, 5, max_denominator=3)


def matrices(rows, cols):
    return st.lists(st.lists(entries, min_size=cols, max_size=cols), min_size=rows, max_size=rows)


def naive_matmul(a, b):
    return [[sum((a[i][k] * b[k][j] for k in range(len(b))), Fraction(0))
             for j in range(len(b[0]))] for i in range(len(a))]


@given(matrices(3, 4), matrices(4, 2))
def test_qmatmul_matches_naive(a, b):
    assert qmatmul(qarray(a), qarray(b)).tolist() == naive_matmul(a, b)


def test_integer_path_switches_to_python_ints():
    big = qarray([[Fraction(2**40)]])
    n, den = to_integer(big)
    prod = int_matmul(n, n)
    assert from_integer(prod, den * den)[0, 0] == Fraction(2**80)


@settings(max_examples=60)
@given(matrices(3, 5))
def test_nullspace_and_rank(a):
    mat = qarray(a)
    ns = nullspace(mat)
    for v in ns:
        assert not any(apply(mat, v))
    rank = len(rref(a, 5)[0])
    assert rank + len(ns) == 5


def test_subspace_membership_and_coordinates():
    s = Subspace(3, [[1, 1, 0], [0, 1, 1]])
    v = [Fraction(2), Fraction(5), Fraction(3)]
    assert s.contains(v)
    c = s.coordinates(v)
    assert [sum(ci * row[k] for ci, row in zip(c, s.basis)) for k in range(3)] == v
    assert not s.contains([1, 0, 0])
    assert s.add([1, 0, 0]) and len(s) == 3
    assert not s.add([3, 4, 5])


@settings(max_examples=60)
@given(matrices(2, 4), matrices(2, 4))
def test_intersection_dimension(a, b):
    A, B = Subspace(4, a), Subspace(4, b)
    joint = Subspace(4, list(a) + list(b))
    both = intersect(A, B)
    assert len(both) == len(A) + len(B) - len(joint)
    for v in both.basis:
        assert A.contains(v) and B.contains(v)


def test_common_kernel_and_span_closure():
    shift = qarray([[0, 0, 0], [1, 0, 0], [0, 1, 0]])
    assert len(span_closure([[1, 0, 0]], [shift], 3)) == 3
    assert len(span_closure([[0, 0, 1]], [shift], 3)) == 1
    ker = common_kernel([shift, shift.T.copy()], 3)
    assert ker == []
    ker = common_kernel([shift], 3)
    assert len(ker) == 1 and ker[0][2] != 0


def test_zero_dim_edge():
    assert len(Subspace(0)) == 0
    assert np.asarray(qmatmul(qarray([[1]]), qarray([[Fraction(1, 2)]])))[0, 0] == Fraction(1, 2)
