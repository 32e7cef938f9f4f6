"""Seeded random instances and per-family verification runs.

Every instance is a pure function of ``(family, seed, index, params)``: its RNG
is ``random.Random(f"{seed}:{index}")``, so reports reproduce exactly and
instances can run in any order or in parallel.
"""
from __future__ import annotations

import itertools
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Callable, Sequence

from .exact import MonicPoly, RootMultiset, format_rat
from .hw import (
    HighestWeight,
    ParitySeq,
    chain_to_standard,
    decide_finite_dimensional,
    even_pair_failures,
    odd_reflect,
)
from .rep import (
    DEFAULT_MAX_DIM,
    berezinian_action,
    build_eval_module,
    check_defining_relations,
    irreducible_quotient,
    read_weight,
    tensor_all,
    verify_key_relations,
    verify_odd_reflection,
)

SHIFT_POOL: tuple[Fraction, ...] = tuple(
    [Fraction(k) for k in range(-5, 6)]
    + [Fraction(s, 2) for s in (-3, -1, 1, 3)]
)



def instance_rng(seed: int, index: int) -> random.Random:
    return random.Random(f"{seed}:{index}")


@dataclass(frozen=True)
class ModuleSpec:
    """Recipe for one evaluation-module factor."""

    kind: str
    shift: Fraction
    weight: tuple[Fraction, Fraction] | None = None

    def build(self, parity: ParitySeq):
        return build_eval_module(self.kind, parity, self.shift, self.weight)

    def to_json(self) -> dict:
        out: dict[str, Any] = {"kind": self.kind, "shift": format_rat(self.shift)}
        if self.weight is not None:
            out["weight"] = [format_rat(a) for a in self.weight]
        return out


def build_tensor(parity: ParitySeq, specs: Sequence[ModuleSpec], max_dim: int = DEFAULT_MAX_DIM):
    return tensor_all([s.build(parity) for s in specs], max_dim)


def all_parities(max_len: int, min_len: int = 1) -> list[ParitySeq]:
    return [
        ParitySeq(bits)
        for n in range(min_len, max_len + 1)
        for bits in itertools.product((0, 1), repeat=n)
    ]


def random_parity(rng: random.Random, max_len: int, min_len: int = 2) -> ParitySeq:
    n = rng.randint(min_len, max_len)
    return ParitySeq(tuple(rng.randint(0, 1) for _ in range(n)))


def _typical_kac(rng: random.Random) -> ModuleSpec:
    while True:
        a1, a2 = rng.choice(SHIFT_POOL), rng.choice(SHIFT_POOL)
        if a1 + a2 != 0:
            return ModuleSpec("kac", rng.choice(SHIFT_POOL), (a1, a2))


def _distinct_shifts(rng: random.Random, count: int) -> list[Fraction]:
    return rng.sample(SHIFT_POOL, count)


def _weight_json(w: HighestWeight) -> list[list[str]]:
    return [[format_rat(r) for r in c.roots] for c in w.components]


def _result(ok: bool, params: dict, checks: dict | None = None, message: str = "") -> dict:
    return {"passed": bool(ok), "params": params, "checks": checks or {}, "message": message}


# -- families ---------------------------------------------------------------

def run_rtt(rng: random.Random, parity: str | None = None, factors: int | None = None,
            max_dim: int = DEFAULT_MAX_DIM, **_) -> dict:
    sigma = ParitySeq.parse(parity) if parity else random_parity(rng, 3, 1)
    nf = factors or rng.randint(1, 3)
    specs = [ModuleSpec("vector", s) for s in _distinct_shifts(rng, nf)]
    return rtt_check(sigma, specs, max_dim)


def rtt_check(sigma: ParitySeq, specs: Sequence[ModuleSpec], max_dim: int = DEFAULT_MAX_DIM) -> dict:
    rep = build_tensor(sigma, specs, max_dim)
    report = check_defining_relations(rep)
    params = {"parity": str(sigma), "factors": [s.to_json() for s in specs], "dim": rep.dim}
    msg = ""
    if not report.ok:
        v = report.violation
        msg = (f"T_{v.i}{v.j}/T_{v.k}{v.l} at u^{v.u_power} v^{v.v_power}, "
               f"entry ({v.row},{v.col}): {v.lhs} != {v.rhs}")
    return _result(report.ok, params, {"relations": report.ok, "checked": report.checked}, msg)


def run_key_relations(rng: random.Random, p: int | None = None, parity: str | None = None,
               max_dim: int = DEFAULT_MAX_DIM, **_) -> dict:
    level = p or rng.randint(1, 3)
    sigma = ParitySeq.parse(parity) if parity else ParitySeq((0, 1))
    specs = [_typical_kac(rng) for _ in range(level)]
    rep = irreducible_quotient(build_tensor(sigma, specs, max_dim))
    report = verify_key_relations(rep)
    params = {"parity": str(sigma), "p": level, "factors": [s.to_json() for s in specs],
              "dim": rep.dim, "k": report.k}
    return _result(report.passed, params, report.checks, "; ".join(report.messages))


def run_reflection(rng: random.Random, parity: str | None = None, p: int | None = None,
                   max_dim: int = DEFAULT_MAX_DIM, **_) -> dict:
    sigma = ParitySeq.parse(parity) if parity else rng.choice(
        [ParitySeq.parse(s) for s in ("10", "101", "110")]
    )
    level = p or rng.randint(1, 2)
    specs = [ModuleSpec("vector", s) for s in _distinct_shifts(rng, level)]
    rep = irreducible_quotient(build_tensor(sigma, specs, max_dim))
    odd = [i for i in range(1, len(sigma)) if sigma[i] != sigma[i + 1]]
    i = rng.choice(odd)
    first = verify_odd_reflection(rep, i)
    params = {"parity": str(sigma), "p": level, "index": i,
              "factors": [s.to_json() for s in specs], "dim": rep.dim}
    checks = dict(first.checks)
    if not first.passed:
        return _result(False, params, checks, "; ".join(first.messages))
    back = verify_odd_reflection(first.relabelled, i)
    checks["back_passed"] = back.passed
    lam = first.weight
    s1, l1, _ = odd_reflect(sigma, lam, i)
    s2, l2, _ = odd_reflect(s1, l1, i)
    checks["double_hw"] = (s2, l2) == (sigma, lam)
    checks["double_rep"] = back.passed and back.rep_weight == lam and back.new_parity == sigma
    params["weight"] = _weight_json(lam)
    params["reflected"] = _weight_json(first.rep_weight)
    ok = all(checks.values())
    return _result(ok, params, checks, "" if ok else "; ".join(first.messages + back.messages))


def run_berezinian(rng: random.Random, p: int | None = None, order: int | None = None,
                   max_dim: int = DEFAULT_MAX_DIM, **_) -> dict:
    level = p or rng.randint(1, 3)
    sigma = ParitySeq((0, 1))
    specs = []
    for _ in range(level):
        # atypical factors allowed here; the Berezinian is central on any module
        a1, a2 = rng.choice(SHIFT_POOL), rng.choice(SHIFT_POOL)
        specs.append(ModuleSpec("kac", rng.choice(SHIFT_POOL), (a1, a2)))
    rep = build_tensor(sigma, specs, max_dim)
    rep_order = order if order is not None else 2 * level + 2
    report = berezinian_action(rep, rep_order)
    params = {"p": level, "order": rep_order, "factors": [s.to_json() for s in specs],
              "dim": rep.dim, "series": [format_rat(c) for c in report.scalar_series.coeffs]}
    checks = {"central": report.central, "scalar_match": report.scalar_match}
    return _result(report.central and report.scalar_match, params, checks)


def _soundness_factor(rng: random.Random, sigma: ParitySeq) -> ModuleSpec:
    roll = rng.random()
    if sigma.bits in ((0, 1), (1, 0)) and roll < 0.5:
        a1, a2 = rng.choice(SHIFT_POOL), rng.choice(SHIFT_POOL)
        return ModuleSpec("kac", rng.choice(SHIFT_POOL), (a1, a2))
    if roll < 0.1:
        return ModuleSpec("trivial", rng.choice(SHIFT_POOL))
    return ModuleSpec("vector", rng.choice(SHIFT_POOL))


def run_soundness(rng: random.Random, parity: str | None = None, factors: int | None = None,
                  max_dim: int = DEFAULT_MAX_DIM, **_) -> dict:
    """A tensor of finite-dimensional modules must decide FiniteDim."""
    from .serialize import decision_json, validate_certificate

    sigma = ParitySeq.parse(parity) if parity else random_parity(rng, 3, 2)
    nf = factors or rng.randint(1, 3)
    specs = [_soundness_factor(rng, sigma) for _ in range(nf)]
    rep = build_tensor(sigma, specs, max_dim)
    lam = read_weight(rep, rep.xi)
    decision = decide_finite_dimensional(sigma, lam)
    checks = {
        "finite": decision.finite,
        "recheck": decision.recheck(),
        "json_certificate": validate_certificate(decision_json(decision)),
    }
    params = {"parity": str(sigma), "factors": [s.to_json() for s in specs],
              "weight": _weight_json(lam)}
    ok = all(checks.values())
    return _result(ok, params, checks, "" if ok else f"verdict {decision.verdict.value}")


def random_roots(rng: random.Random, count: int) -> list[Fraction]:
    return [rng.choice(SHIFT_POOL) for _ in range(count)]


def finite_leaning_weight(rng: random.Random, sigma: ParitySeq, p: int) -> HighestWeight:
    """A weight built to be finite-dimensional, pulled back to ``sigma``.

    On the standard sequence each component is ``prod_k (u + c_k + e_ik)`` with
    integer offsets non-increasing across the even block and non-decreasing
    across the odd block, so every even-pair ratio is a product of strings.
    The weight is then carried to ``sigma`` by reversing the reflection chain.
    """
    m, n = sigma.m, sigma.n
    base = random_roots(rng, p)
    offsets = []
    for _ in range(p):
        even = sorted((rng.randint(0, 2) for _ in range(m)), reverse=True)
        odd = sorted(rng.randint(0, 2) for _ in range(n))
        offsets.append(even + odd)
    comps = tuple(
        MonicPoly(RootMultiset(tuple(base[k] + offsets[k][j] for k in range(p))))
        for j in range(m + n)
    )
    lam = HighestWeight(comps)
    std = ParitySeq.standard(m, n)
    for i in reversed(chain_to_standard(sigma)):
        std, lam, _ = odd_reflect(std, lam, i)
    assert std == sigma
    return lam


def random_weight(rng: random.Random, sigma: ParitySeq, p: int) -> HighestWeight:
    return HighestWeight(tuple(
        MonicPoly.from_roots(random_roots(rng, p)) for _ in range(len(sigma))
    ))


def direct_101_criterion(weight: HighestWeight) -> tuple[HighestWeight, bool]:
    """The ``101`` criterion computed from scratch: reflect at 1, then look
    for P with ``lambda+_3 / lambda+_2 = P(u+1)/P(u)`` by brute-force pairing."""
    from collections import Counter

    a, b = weight[1].roots.counter(), weight[2].roots.counter()
    shared = a & b
    new1 = Counter({r + 1: c for r, c in (b - shared).items()}) + shared
    new2 = Counter({r + 1: c for r, c in (a - shared).items()}) + shared
    plus = (
        MonicPoly(RootMultiset.from_counter(new1)),
        MonicPoly(RootMultiset.from_counter(new2)),
        weight[3],
    )
    num, den = plus[2].roots.counter(), plus[1].roots.counter()
    common = num & den
    tops, bottoms = list((num - common).elements()), list((den - common).elements())
    return HighestWeight(plus), _brute_force_strings(tops, bottoms)


def _brute_force_strings(tops: list[Fraction], bottoms: list[Fraction]) -> bool:
    """Exists a bijection top -> bottom with every ``top - bottom`` a positive
    integer, so that the ratio telescopes into strings."""
    if len(tops) != len(bottoms):
        return False
    return any(
        all(t - b >= 1 and (t - b).denominator == 1 for t, b in zip(tops, perm))
        for perm in itertools.permutations(bottoms)
    )


def run_parity101(rng: random.Random, index: int = 0, p: int | None = None, **_) -> dict:
    sigma = ParitySeq.parse("101")
    level = p or rng.randint(1, 2)
    lam = finite_leaning_weight(rng, sigma, level) if index % 2 == 0 else random_weight(rng, sigma, level)
    decision = decide_finite_dimensional(sigma, lam)
    plus, direct = direct_101_criterion(lam)
    checks = {
        "verdict_matches_direct": decision.finite == direct,
        "reflected_weight_matches": decision.final_weight == plus,
        "recheck": decision.recheck(),
    }
    params = {"parity": "101", "p": level, "weight": _weight_json(lam),
              "verdict": decision.verdict.value}
    return _result(all(checks.values()), params, checks)


def run_invariance(rng: random.Random, index: int = 0, p: int | None = None, **_) -> dict:
    sigma = random_parity(rng, 4, 2)
    level = p or rng.randint(1, 3)
    lam = finite_leaning_weight(rng, sigma, level) if rng.random() < 0.5 else random_weight(rng, sigma, level)
    small = decide_finite_dimensional(sigma, lam, "smallest")
    large = decide_finite_dimensional(sigma, lam, "largest")
    stab = decide_finite_dimensional(sigma, lam.stabilized(1))
    early = even_pair_failures(sigma, lam)
    checks = {
        "path_verdict": small.verdict == large.verdict,
        "path_final_weight": small.final_weight == large.final_weight,
        "stabilization": small.verdict == stab.verdict
        and [t.k for t in small.trail] == [t.k for t in stab.trail],
        "early_fail_sound": not early or not small.finite,
        "recheck": small.recheck() and large.recheck() and stab.recheck(),
    }
    params = {"parity": str(sigma), "p": level, "weight": _weight_json(lam),
              "verdict": small.verdict.value, "early_failures": early}
    return _result(all(checks.values()), params, checks)


RUNNERS: dict[str, Callable[..., dict]] = {
    "rtt": run_rtt,
    "prop42": run_key_relations,
    "reflection": run_reflection,
    "berezinian": run_berezinian,
    "soundness": run_soundness,
    "parity101": run_parity101,
    "invariance": run_invariance,
}


def run_instance(family: str, seed: int, index: int, params: dict | None = None) -> dict:
    runner = RUNNERS[family]
    out = runner(instance_rng(seed, index), index=index, **(params or {}))
    out["index"] = index
    return out


def _run_star(args):
    return run_instance(*args)


def run_family(family: str, seed: int, count: int, params: dict | None = None,
               workers: int = 1) -> dict:
    """Run ``count`` instances and assemble a report ordered by index."""
    if family not in RUNNERS:
        raise ValueError(f"unknown family {family!r}")
    jobs = [(family, seed, k, params) for k in range(count)]
    if workers > 1 and count > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_run_star, jobs))
    else:
        results = [_run_star(j) for j in jobs]
    results.sort(key=lambda r: r["index"])
    failures = [r for r in results if not r["passed"]]
    return {
        "family": family,
        "seed": seed,
        "count": count,
        "passed": len(results) - len(failures),
        "failed": len(failures),
        "first_failure": failures[0] if failures else None,
        "instances": results,
    }
