"""Acceptance suite: one test and one PASS/FAIL line per criterion.

Run with ``pytest tests/test_acceptance.py`` (lines appear in the terminal
summary) or ``python tests/test_acceptance.py``.
"""
from __future__ import annotations

import itertools
import random
import time
from collections import Counter
from fractions import Fraction

from conftest import brute_force_shift_ratio, record_criterion
from yhw.exact import MonicPoly, RationalFn, RootMultiset, reduce_ratio
from yhw.harness import (
    ModuleSpec,
    all_parities,
    instance_rng,
    rtt_check,
    run_instance,
)
from yhw.hw import is_p_shift_ratio

SEED = 2024
F = Fraction


def _first_failure(results):
    bad = [r for r in results if not r["passed"]]
    return "" if not bad else f"; first failure #{bad[0]['index']}: {bad[0]['checks']} {bad[0]['message']}"


def test_criterion_1_rtt_oracle():
    start = time.perf_counter()
    shifts = instance_rng(SEED, 0).sample([F(k) for k in range(-5, 6)] + [F(s, 2) for s in (-3, -1, 1, 3)], 3)
    shifts = sorted(set(shifts))
    assert len(shifts) == 3
    parities = all_parities(3)
    results, max_dim = [], 0
    for sigma in parities:
        for size in (1, 2, 3):
            for combo in itertools.product(shifts, repeat=size):
                res = rtt_check(sigma, [ModuleSpec("vector", s) for s in combo])
                res["index"] = len(results)
                max_dim = max(max_dim, res["params"]["dim"])
                results.append(res)
    elapsed = time.perf_counter() - start
    passed = sum(r["passed"] for r in results)
    ok = passed == len(results) and elapsed < 60
    record_criterion(1, ok, f"RTT relations exact on {passed}/{len(results)} tensors "
                     f"({len(parities)} parity sequences, shifts {[str(s) for s in shifts]}, "
                     f"dim <= {max_dim}) in {elapsed:.1f} s (< 60 s){_first_failure(results)}")
    assert ok


def test_criterion_2_key_relations():
    start = time.perf_counter()
    results = [run_instance("prop42", SEED, k, {"p": 1 + k % 3}) for k in range(50)]
    elapsed = time.perf_counter() - start
    veze_ok = all(("veze" in r["checks"]) == (r["params"]["k"] == r["params"]["p"]) for r in results)
    with_veze = sum("veze" in r["checks"] for r in results)
    passed = sum(r["passed"] for r in results)
    ok = passed == 50 and veze_ok and elapsed < 60
    record_criterion(2, ok, f"gl(1|1) level-p identities hold on {passed}/50 instances "
                     f"(proportionality checked on the {with_veze} with k = p) in {elapsed:.1f} s"
                     f"{_first_failure(results)}")
    assert ok


def test_criterion_3_odd_reflection_dual_path():
    sigmas = ["10", "101", "110"]
    results = [
        run_instance("reflection", SEED, k, {"parity": sigmas[k % 3], "p": 1 + (k // 3) % 2})
        for k in range(30)
    ]
    passed = sum(r["passed"] for r in results)
    doubles = sum(r["checks"].get("double_hw", False) and r["checks"].get("double_rep", False)
                  for r in results)
    ok = passed == 30 and doubles == 30
    record_criterion(3, ok, f"rep-engine and hw-calculus reflected weights agree on {passed}/30; "
                     f"double reflection is the identity on {doubles}/30{_first_failure(results)}")
    assert ok


def test_criterion_4_soundness():
    results = [run_instance("soundness", SEED, k) for k in range(30)]
    finite = sum(r["checks"]["finite"] for r in results)
    certified = sum(r["checks"]["recheck"] and r["checks"]["json_certificate"] for r in results)
    ok = finite == 30 and certified == 30
    record_criterion(4, ok, f"tensors of finite-dimensional modules decide FiniteDim on {finite}/30; "
                     f"certificates re-validate on {certified}/30{_first_failure(results)}")
    assert ok


MATCH_VALUES = [F(0), F(1, 2), F(-1, 2), F(1), F(-1), F(2), F(-2), F(3)]


def _multisets(max_size):
    for size in range(max_size + 1):
        yield from itertools.combinations_with_replacement(MATCH_VALUES, size)


def test_criterion_5_matching_oracle():
    start = time.perf_counter()
    pairs = agree = positives = 0
    sets = [(list(a), frozenset(a), MonicPoly.from_roots(a)) for a in _multisets(4)]
    for a, distinct_a, poly_a in sets:
        for b, distinct_b, poly_b in sets:
            if not distinct_a.isdisjoint(distinct_b):
                continue  # not reduced
            pairs += 1
            f = RationalFn(poly_a, poly_b)
            got = is_p_shift_ratio(f)
            want = brute_force_shift_ratio(a, b)
            sound = got is None or reduce_ratio(got.shift(1), got) == f
            agree += (got is not None) == want and sound
            positives += want
    rng = random.Random(f"{SEED}:matching")
    pool = [F(n, d) for n in range(-8, 9) for d in (1, 2, 3)]
    round_trips = 0
    for _ in range(100):
        P = MonicPoly(RootMultiset(tuple(rng.choice(pool) for _ in range(rng.randint(0, 6)))))
        f = reduce_ratio(P.shift(1), P)
        got = is_p_shift_ratio(f)
        round_trips += got is not None and reduce_ratio(got.shift(1), got) == f
    elapsed = time.perf_counter() - start
    ok = agree == pairs and round_trips == 100 and elapsed < 30
    record_criterion(5, ok, f"matching agrees with exhaustive search on {agree}/{pairs} reduced pairs "
                     f"({positives} admit P); round trip {round_trips}/100; {elapsed:.1f} s (< 30 s)")
    assert ok


def test_criterion_6_berezinian():
    results = [run_instance("berezinian", SEED, k, {"p": 1 + k % 3}) for k in range(20)]
    orders_ok = all(r["params"]["order"] == 2 * r["params"]["p"] + 2 for r in results)
    passed = sum(r["passed"] for r in results)
    ok = passed == 20 and orders_ok
    record_criterion(6, ok, f"b(u) central and b(u) xi = lambda2/lambda1 xi through order 2p+2 "
                     f"on {passed}/20 modules{_first_failure(results)}")
    assert ok


def _direct_101(roots):
    """Reflect at 1 by hand, then search every pairing for lambda+_3/lambda+_2."""
    a, b, c = (Counter(r) for r in roots)
    shared = a & b
    plus2 = Counter({r + 1: m for r, m in (a - shared).items()}) + shared
    common = c & plus2
    tops, bottoms = list((c - common).elements()), list((plus2 - common).elements())
    return brute_force_shift_ratio(tops, bottoms)


def test_criterion_7_parity_101():
    results = [run_instance("parity101", SEED, k) for k in range(10)]
    agree, verdicts = 0, Counter()
    for r in results:
        roots = [[F(x) for x in comp] for comp in r["params"]["weight"]]
        direct = _direct_101(roots)
        verdicts[r["params"]["verdict"]] += 1
        agree += (r["params"]["verdict"] == "FiniteDim") == direct and r["passed"]
    ok = agree == 10 and len(verdicts) == 2
    record_criterion(7, ok, f"parity 101 verdict equals the direct criterion on {agree}/10 "
                     f"({dict(sorted(verdicts.items()))})")
    assert ok


def test_criterion_8_invariance():
    results = [run_instance("invariance", SEED, k) for k in range(100)]
    passed = sum(r["passed"] for r in results)
    verdicts = Counter(r["params"]["verdict"] for r in results)
    early = sum(bool(r["params"]["early_failures"]) for r in results)
    ok = passed == 100 and len(verdicts) == 2 and early > 0
    record_criterion(8, ok, f"stabilization, path independence and early-fail soundness hold on "
                     f"{passed}/100 ({dict(sorted(verdicts.items()))}; {early} early failures)"
                     f"{_first_failure(results)}")
    assert ok


if __name__ == "__main__":
    import sys

    failed = 0
    for name, fn in sorted(globals().items()):
        if name.startswith("test_criterion_"):
            try:
                fn()
            except AssertionError:
                failed += 1
    sys.exit(1 if failed else 0)
