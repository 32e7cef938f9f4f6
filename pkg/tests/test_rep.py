from fractions import Fraction

import numpy as np
import pytest

from yhw.exact import expand_series, reduce_ratio
from yhw.hw import HighestWeight, ParitySeq, odd_reflect
from yhw.linalg import common_kernel, qeye, span_closure
from yhw.rep import (
    DimensionCapError,
    NotSingularError,
    PolyMatrix,
    YangianRep,
    berezinian_action,
    build_eval_module,
    check_defining_relations,
    cyclic_highest_module,
    irreducible_quotient,
    negate_variable,
    quotient,
    read_weight,
    relabel,
    restrict,
    tensor_all,
    verify_key_relations,
    verify_odd_reflection,
)

F = Fraction
W = HighestWeight.from_roots


def vec(parity, shift):
    return build_eval_module("vector", parity, shift)


def kac(shift, a1, a2, quotient=True):
    return build_eval_module("kac", "01", shift, (a1, a2), quotient)


def weight(rep):
    return read_weight(rep, rep.xi)


# -- building blocks -----------------------------------------------------------

@pytest.mark.parametrize("parity, shift, want", [
    ("01", 0, ([1], [0])),
    ("10", 0, ([-1], [0])),
    ("001", F(1, 2), ([F(1, 2)], [F(-1, 2)], [F(-1, 2)])),
    ("1", 3, ([-4],)),
])
def test_vector_module_weights(parity, shift, want):
    rep = vec(parity, shift)
    assert rep.dim == len(parity)
    assert weight(rep) == W(*want)
    assert check_defining_relations(rep).ok


def test_kac_modules():
    rep = kac(0, 1, 0)
    assert rep.dim == 2 and weight(rep) == W([1], [0])
    assert check_defining_relations(rep).ok
    atyp = kac(0, 2, -2)
    assert atyp.dim == 1 and weight(atyp) == W([2], [2])
    full = kac(0, 2, -2, quotient=False)
    assert full.dim == 2 and check_defining_relations(full).ok
    assert irreducible_quotient(full).dim == 1


def test_trivial_module():
    rep = build_eval_module("trivial", "011", 2)
    assert rep.dim == 1 and weight(rep) == W([-2], [-2], [-2])


def test_tensor_weights_multiply():
    assert weight(tensor_all([vec("01", 0), vec("01", -3)])) == W([1, 4], [0, 3])
    assert weight(tensor_all([vec("01", 0), vec("01", 3)])) == W([1, -2], [0, -3])
    k = tensor_all([kac(0, 1, 0), kac(-10, 1, 0)])
    assert weight(k) == W([11, 1], [10, 0])


def test_tensor_cap():
    with pytest.raises(DimensionCapError):
        tensor_all([vec("101", 0), vec("101", 1), vec("101", 2)], max_dim=20)


# -- defining relations -----------------------------------------------------------

@pytest.mark.parametrize("parity", ["01", "10", "11", "101", "011"])
def test_relations_on_tensors(parity):
    rep = tensor_all([vec(parity, 0), vec(parity, F(1, 2)), vec(parity, -2)][: 3 if len(parity) == 2 else 2])
    report = check_defining_relations(rep)
    assert report.ok and report.checked > 0


def _unsigned_tensor(r1, r2):
    """Coproduct without the Koszul sign; must break the relations for odd data."""
    N, p = r1.size, r1.level + r2.level
    d = r1.dim * r2.dim
    entries = []
    for i in range(N):
        row = []
        for j in range(N):
            coeffs = [np.zeros((d, d), dtype=object) * F(0) for _ in range(p + 1)]
            for k in range(N):
                for r, x in enumerate(r1.entries[i][k].coeffs):
                    for s, y in enumerate(r2.entries[k][j].coeffs):
                        coeffs[r + s] = coeffs[r + s] + np.kron(x, y)
            row.append(PolyMatrix(coeffs, d))
        entries.append(tuple(row))
    parities = tuple((a + b) % 2 for a in r1.space.parities for b in r2.space.parities)
    return YangianRep(r1.parity, p, type(r1.space)(parities), tuple(entries), None)


def test_relations_check_detects_missing_sign():
    bad = _unsigned_tensor(vec("01", 0), vec("01", 2))
    report = check_defining_relations(bad)
    assert not report.ok and report.violation is not None
    assert report.violation.lhs != report.violation.rhs


def test_relations_check_detects_perturbation():
    rep = kac(1, 2, 3)
    coeffs = [c.copy() for c in rep.T(1, 1).coeffs]
    coeffs[0][0, 0] += 1
    entries = [list(row) for row in rep.entries]
    entries[0][0] = PolyMatrix(coeffs, rep.dim)
    bad = YangianRep(rep.parity, rep.level, rep.space, tuple(tuple(r) for r in entries), rep.xi)
    assert not check_defining_relations(bad).ok


@pytest.mark.parametrize("parity", ["10", "101", "0011", "110"])
def test_negate_variable_is_a_module(parity):
    rep = tensor_all([vec(parity, 1), vec(parity, F(-3, 2))])
    flipped = negate_variable(rep)
    assert check_defining_relations(flipped).ok


def test_negate_variable_negates_roots_for_gl11():
    rep = kac(0, 3, 1)
    assert weight(rep) == W([3], [-1])
    assert weight(negate_variable(rep)) == W([-3], [1])


def test_relabel_is_a_module():
    rep = tensor_all([vec("101", 0), vec("101", 2)])
    assert check_defining_relations(relabel(rep, 1)).ok


# -- submodules, quotients, irreducibility -------------------------------------------

def _radical_oracle_dim(rep):
    """dim L(lambda) via the dual closure of the xi-projection functional."""
    d = rep.dim
    shifted = []
    for i in range(1, rep.size + 1):
        H = rep.generator(i, i, 1)
        mu = next(H[r, :].dot(np.array(rep.xi, dtype=object)) / rep.xi[r]
                  for r in range(d) if rep.xi[r] != 0)
        shifted.append((H - qeye(d) * mu).T.copy())
    # phi kills every other gl-weight space and is 1 on xi
    candidates = common_kernel(shifted, d)
    phi = next(v for v in candidates if sum(a * b for a, b in zip(v, rep.xi)) != 0)
    transposes = [g.T.copy() for g in rep.generator_matrices()]
    return len(span_closure([phi], transposes, d))


@pytest.mark.parametrize("factors", [
    [("01", 0, (2, -2), False)],
    [("01", 0, (1, 0), True), ("01", -1, (1, 0), True)],
    [("01", 0, (1, 0), True), ("01", 1, (1, 0), True)],
    [("01", 0, (F(1, 2), 1), True), ("01", 3, (2, -1), True), ("01", F(-1, 2), (-1, 3), True)],
])
def test_irreducible_quotient_matches_dual_radical(factors):
    rep = tensor_all([build_eval_module("kac", s, a, w, q) for s, a, w, q in factors])
    cyc = cyclic_highest_module(rep)
    span_rep = restrict(rep, cyc.span)
    L = irreducible_quotient(rep)
    assert L.dim == _radical_oracle_dim(span_rep)
    assert weight(L) == cyc.weight
    assert check_defining_relations(L).ok
    assert _radical_oracle_dim(L) == L.dim


def test_vector_tensor_quotient():
    # shifts differing by one make the tensor of vector modules reducible
    rep = tensor_all([vec("01", 0), vec("01", 1)])
    L = irreducible_quotient(rep)
    assert L.dim == _radical_oracle_dim(restrict(rep, cyclic_highest_module(rep).span))
    assert check_defining_relations(L).ok


@pytest.mark.parametrize("parity", ["01", "10"])
def test_vector_tensor_dimension_scan(parity):
    # irreducible dimension of V(0) x V(d) drops exactly at d = +-1
    for d in range(-3, 4):
        L = irreducible_quotient(tensor_all([vec(parity, 0), vec(parity, d)]))
        assert L.dim == (2 if abs(d) == 1 else 4), d


def test_restrict_and_quotient_stay_modules():
    rep = kac(0, 2, -2, quotient=False)
    sub = span_closure([[F(0), F(1)]], rep.generator_matrices(), rep.dim)
    assert len(sub) == 1
    assert check_defining_relations(restrict(rep.with_xi(None), sub)).ok
    q = quotient(rep, sub)
    assert q.dim == 1 and check_defining_relations(q).ok


def test_non_singular_vector_is_rejected():
    rep = vec("01", 0).with_xi([F(0), F(1)])
    with pytest.raises(NotSingularError) as err:
        cyclic_highest_module(rep)
    assert err.value.witness[:2] == (1, 2)


# -- key relations, reflections, Berezinian ----------------------------------------------

@pytest.mark.parametrize("factors, k", [
    ([(0, 1, 0)], 1),
    ([(0, 1, 0), (-10, 1, 0)], 2),
    ([(0, 1, 0), (0, 1, 0)], 2),
    ([(0, 1, 0), (2, 2, 1)], 1),
    ([(0, 2, 1), (3, 1, 1), (F(1, 2), -1, 4)], 3),
])
def test_key_relations(factors, k):
    rep = irreducible_quotient(tensor_all([kac(*f) for f in factors]))
    report = verify_key_relations(rep)
    assert report.passed, report.messages
    assert report.k == k
    assert ("veze" in report.checks) == (k == rep.level)


def test_key_relations_with_no_distinct_roots():
    # lambda_1 == lambda_2: k = 0 and zeta is xi itself
    rep = irreducible_quotient(tensor_all([kac(0, 1, -1), kac(2, 3, -3)]))
    assert rep.dim == 1
    report = verify_key_relations(rep)
    assert report.passed, report.messages
    assert report.k == 0 and report.zeta == list(rep.xi)


def test_divisibility_needs_the_irreducible_quotient():
    # on a reducible cyclic span T21(u) is not divisible by the shared-root product
    rep = tensor_all([kac(1, -1, 3), kac(2, 1, 0)])
    span = restrict(rep, cyclic_highest_module(rep).span)
    assert span.dim > irreducible_quotient(rep).dim
    report = verify_key_relations(span)
    assert not report.checks["divisible"]
    assert verify_key_relations(irreducible_quotient(rep)).passed


def test_key_relations_on_10_form():
    rep = irreducible_quotient(tensor_all([
        build_eval_module("kac", "10", 0, (1, 0)), build_eval_module("kac", "10", 2, (3, 1)),
    ]))
    assert verify_key_relations(rep).passed


@pytest.mark.parametrize("parity, shifts, i", [
    ("01", [0], 1),
    ("10", [0, 3], 1),
    ("101", [0, F(1, 2)], 1),
    ("101", [0, F(1, 2)], 2),
    ("110", [1, -2], 2),
])
def test_odd_reflection_dual_path(parity, shifts, i):
    rep = irreducible_quotient(tensor_all([vec(parity, s) for s in shifts]))
    report = verify_odd_reflection(rep, i)
    assert report.passed, report.messages
    assert report.rep_weight == report.hw_weight
    back = verify_odd_reflection(report.relabelled, i)
    assert back.passed and back.rep_weight == report.weight


def test_odd_reflection_of_vector_module():
    report = verify_odd_reflection(vec("01", 0), 1)
    assert report.rep_weight == W([-1], [0])
    assert odd_reflect(ParitySeq.parse("01"), W([1], [0]), 1)[1] == W([-1], [0])


def test_berezinian_and_naive_control():
    rep = tensor_all([kac(0, 1, 0), kac(-3, 2, F(1, 2))])
    good = berezinian_action(rep)
    assert good.order == 6 and good.central and good.scalar_match
    lam = weight(rep)
    assert good.scalar_series == expand_series(reduce_ratio(lam[2], lam[1]), 6)
    assert [str(c) for c in good.scalar_series.coeffs] == ["1", "-7/2", "16", "-157/2", "391", "-3907/2", "9766"]
    naive = berezinian_action(kac(0, 1, 0), naive=True)
    assert not naive.central


def test_berezinian_needs_01():
    with pytest.raises(ValueError):
        berezinian_action(build_eval_module("kac", "10", 0, (1, 0)))


@pytest.mark.parametrize("parity", ["0", "01", "10", "110", "101"])
def test_batched_and_slice_checks_agree(parity):
    rep = tensor_all([vec(parity, 0), vec(parity, F(5, 2))])
    assert check_defining_relations(rep) == check_defining_relations(rep, batched=False)
    bad = _unsigned_tensor(vec(parity, 0), vec(parity, 1))
    expect_ok = all(b == 0 for b in ParitySeq.parse(parity).bits)
    assert check_defining_relations(bad).ok == check_defining_relations(bad, batched=False).ok
    if not expect_ok:
        assert not check_defining_relations(bad).ok
