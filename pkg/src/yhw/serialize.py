"""JSON interchange: rationals as strings, job specs in, reports out."""
from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from importlib import resources
from typing import Any

import jsonschema

from .exact import MonicPoly, RationalFn, RootMultiset, format_rat, parse_rat, reduce_ratio
from .hw import (
    Decision,
    HighestWeight,
    ParitySeq,
    ReflectionStep,
    Twist,
    WeightComponent,
    is_p_shift_ratio,
    normalize_twist,
)


class JobError(ValueError):
    """Malformed or inconsistent job input (CLI exit code 2)."""


def load_schema() -> dict:
    text = resources.files("yhw").joinpath("jobspec.schema.json").read_text()
    return json.loads(text)


def roots_json(ms: RootMultiset) -> list[str]:
    return [format_rat(r) for r in ms]


def poly_json(p: MonicPoly | None):
    return None if p is None else {"roots": roots_json(p.roots)}


def poly_from_json(obj) -> MonicPoly:
    return MonicPoly.from_roots(obj["roots"])


def ratio_json(f: RationalFn) -> dict:
    return {"num": roots_json(f.num.roots), "den": roots_json(f.den.roots)}


def weight_json(w: HighestWeight) -> list:
    return [poly_json(c) for c in w.components]


def step_json(step: ReflectionStep) -> dict:
    return {
        "index": step.index,
        "direction": step.direction,
        "k": step.k,
        "shared": roots_json(step.shared),
        "moved_i": roots_json(step.moved_i),
        "moved_i1": roots_json(step.moved_i1),
    }


def twist_json(t: Twist | None):
    if t is None:
        return None
    return {"roots": roots_json(t.roots), "opaque": dict(sorted(t.opaque.items()))}


def decision_json(d: Decision) -> dict:
    out: dict[str, Any] = {
        "verdict": d.verdict.value,
        "trail": [step_json(s) for s in d.trail],
        "final_parity": str(d.final_parity),
        "final_weight": weight_json(d.final_weight),
    }
    if d.finite:
        dd = d.drinfeld
        ratios = {}
        for i in sorted(dd.P):
            bits = d.final_parity
            num, den = (i, i + 1) if bits[i] == 0 else (i + 1, i)
            ratios[str(i)] = ratio_json(reduce_ratio(d.final_weight[num], d.final_weight[den]))
        out["certificate"] = {
            "P": {str(i): poly_json(dd.P[i]) for i in sorted(dd.P)},
            "ratios": ratios,
            "Qbar": poly_json(dd.qbar),
            "Q": poly_json(dd.q),
        }
    else:
        f = d.failure
        out["certificate"] = {
            "step": f.step,
            "position": f.position,
            "ratio": ratio_json(f.ratio) if f.ratio is not None else None,
        }
    return out


def validate_certificate(result: dict) -> bool:
    """Re-check a decide result from its JSON alone, by re-expansion.

    FiniteDim: every ``P_i(u+1)/P_i(u)`` must reduce to the stated ratio, and the
    stated ratio must match the final weight. InfiniteDim at an even pair: the
    stated ratio must admit no Drinfeld polynomial.
    """
    cert = result["certificate"]
    if result["verdict"] == "InfiniteDim" and cert["step"] == "non_rational":
        return True
    final = [poly_from_json(c) for c in result["final_weight"]]
    sigma = ParitySeq.parse(result["final_parity"])
    if not sigma.is_standard:
        return False

    def ratio(obj) -> RationalFn:
        return reduce_ratio(MonicPoly.from_roots(obj["num"]), MonicPoly.from_roots(obj["den"]))

    if result["verdict"] == "FiniteDim":
        for i in range(1, len(sigma)):
            if sigma[i] != sigma[i + 1]:
                continue
            key = str(i)
            if key not in cert["P"] or key not in cert["ratios"]:
                return False
            P = poly_from_json(cert["P"][key])
            stated = ratio(cert["ratios"][key])
            num, den = (i, i + 1) if sigma[i] == 0 else (i + 1, i)
            if reduce_ratio(final[num - 1], final[den - 1]) != stated:
                return False
            if reduce_ratio(P.shift(1), P) != stated:
                return False
        m = sigma.m
        if m and sigma.n:
            qbar, q = poly_from_json(cert["Qbar"]), poly_from_json(cert["Q"])
            if reduce_ratio(qbar, q) != reduce_ratio(final[m - 1], final[m]):
                return False
        return True
    i = cert["position"]
    stated = ratio(cert["ratio"])
    num, den = (i, i + 1) if sigma[i] == 0 else (i + 1, i)
    return (reduce_ratio(final[num - 1], final[den - 1]) == stated
            and is_p_shift_ratio(stated) is None)


@dataclass
class ParsedWeight:
    weight: HighestWeight
    twist: Twist | None = None


def _component(obj: dict) -> WeightComponent:
    opaque = {str(k): int(v) for k, v in obj.get("opaque", {}).items()}
    if "roots" in obj:
        roots = [parse_rat(r) for r in obj["roots"]]
        return WeightComponent(MonicPoly.from_roots(roots), MonicPoly.one(), opaque)
    return WeightComponent.from_inverse_coefficients(
        obj["num_coeffs"], obj.get("den_coeffs", [1]), opaque
    )


def parse_weight(job: dict) -> ParsedWeight:
    """Turn the ``weights`` of a job into a level-p highest weight.

    All-roots input is read as level-p polynomials, zero-padded to ``level``
    (or to the longest list). Any coefficient-form or opaque component sends
    the whole tuple through :func:`normalize_twist`, reading ``roots`` entries
    as products of ``(1 + r u^-1)``. May raise ``NonRationalComponent``.
    """
    raw = job["weights"]
    try:
        comps = [_component(c) for c in raw]
    except (ValueError, ZeroDivisionError) as exc:
        if type(exc).__name__ == "NonRationalComponent":
            raise
        raise JobError(f"bad weight component: {exc}") from exc
    level = job.get("level")
    polynomial_form = all("roots" in c and not c.get("opaque") for c in raw)
    if polynomial_form:
        longest = max(len(c["roots"]) for c in raw)
        p = longest if level is None else level
        if p < longest:
            raise JobError(f"level {p} is smaller than a root list of length {longest}")
        padded = []
        for c in comps:
            extra = RootMultiset((Fraction(0),) * (p - c.num.degree))
            padded.append(MonicPoly(c.num.roots + extra))
        return ParsedWeight(HighestWeight(tuple(padded)))
    weight, twist = normalize_twist(comps)
    if level is not None:
        if level < weight.level:
            raise JobError(f"level {level} is smaller than the normalized level {weight.level}")
        weight = weight.stabilized(level - weight.level) if level > weight.level else weight
    return ParsedWeight(weight, twist)


def parse_job(job: Any, command: str | None = None) -> dict:
    """Validate a job against the shipped schema plus cross-field rules."""
    try:
        jsonschema.validate(job, load_schema())
    except jsonschema.ValidationError as exc:
        raise JobError(f"job does not match schema: {exc.message}") from exc
    if command is not None:
        if job.get("command", command) != command:
            raise JobError(f"job command {job['command']!r} conflicts with subcommand {command!r}")
        job = {**job, "command": command}
    if "command" not in job:
        raise JobError("no command given")
    if "parity" in job and "weights" in job and len(job["parity"]) != len(job["weights"]):
        raise JobError("parity length differs from the number of weight components")
    if job["command"] in ("decide", "reflect") and "weights" not in job:
        raise JobError(f"{job['command']} needs weights")
    if job["command"] in ("decide", "reflect", "chain") and "parity" not in job:
        raise JobError(f"{job['command']} needs a parity sequence")
    if job["command"] == "reflect" and "index" not in job:
        raise JobError("reflect needs an index")
    if job["command"] == "verify" and "family" not in job:
        raise JobError("verify needs a family")
    return job


def dumps(obj: Any) -> str:
    return json.dumps(obj, indent=2, sort_keys=True)
