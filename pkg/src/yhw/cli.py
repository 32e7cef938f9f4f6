"""``yhw`` command-line front end.

Exit codes: 0 success (the answer is in the JSON), 2 input error,
3 verification failure.
"""
from __future__ import annotations

import argparse
import json
import sys
import time
from typing import Any, Sequence

from .exact import format_rat, parse_rat
from .harness import ModuleSpec, build_tensor, run_family
from .hw import (
    NonRationalComponent,
    ParitySeq,
    chain_to_standard,
    decide_finite_dimensional,
    odd_reflect,
)
from .rep import DEFAULT_MAX_DIM, DimensionCapError, berezinian_action, read_weight
from .serialize import (
    JobError,
    decision_json,
    dumps,
    parse_job,
    parse_weight,
    step_json,
    twist_json,
    weight_json,
)

EXIT_OK, EXIT_INPUT, EXIT_VERIFY = 0, 2, 3
MAX_LEVEL = 4


class VerificationFailed(Exception):
    """Carries a finished result whose checks did not all pass."""

    def __init__(self, result: dict):
        super().__init__("verification failed")
        self.result = result


def _parity(job: dict) -> ParitySeq:
    return ParitySeq.parse(job["parity"])


def run_decide(job: dict) -> dict:
    sigma = _parity(job)
    try:
        parsed = parse_weight(job)
    except NonRationalComponent as exc:
        return {
            "verdict": "InfiniteDim",
            "trail": [],
            "certificate": {"step": "non_rational", "position": exc.position, "ratio": None},
        }
    decision = decide_finite_dimensional(sigma, parsed.weight, job.get("path", "smallest"))
    out = decision_json(decision)
    out["weight"] = weight_json(parsed.weight)
    if parsed.twist is not None:
        out["twist"] = twist_json(parsed.twist)
    return out


def run_reflect(job: dict) -> dict:
    sigma = _parity(job)
    lam = _rational_weight(job)
    indices = job["index"] if isinstance(job["index"], list) else [job["index"]]
    steps = []
    for i in indices:
        if not 1 <= i < len(sigma):
            raise JobError(f"index {i} out of range for parity {sigma}")
        if sigma[i] == sigma[i + 1]:
            raise JobError(f"parities at {i} and {i + 1} are equal; no odd reflection there")
        sigma, lam, step = odd_reflect(sigma, lam, i)
        steps.append({"step": step_json(step), "parity": str(sigma), "weight": weight_json(lam)})
    return {"parity": str(sigma), "weight": weight_json(lam), "steps": steps}


def run_chain(job: dict) -> dict:
    sigma = _parity(job)
    path = job.get("path", "smallest")
    positions = chain_to_standard(sigma, path)
    out: dict[str, Any] = {"positions": positions, "standard": str(ParitySeq.standard(sigma.m, sigma.n))}
    if "weights" in job:
        lam = _rational_weight(job)
        states = [{"parity": str(sigma), "weight": weight_json(lam)}]
        for i in positions:
            sigma, lam, step = odd_reflect(sigma, lam, i)
            states.append({"step": step_json(step), "parity": str(sigma), "weight": weight_json(lam)})
        out["states"] = states
    return out


def _rational_weight(job: dict):
    try:
        return parse_weight(job).weight
    except NonRationalComponent as exc:
        raise JobError(f"component {exc.position + 1} is not rational relative to component 1") from exc


def run_verify(job: dict) -> dict:
    p = job.get("p")
    if p is not None and p > MAX_LEVEL:
        raise JobError(f"level {p} exceeds the cap {MAX_LEVEL}")
    params = {key: job[key] for key in ("p", "parity", "factors", "order") if key in job}
    params["max_dim"] = job.get("max_dim", DEFAULT_MAX_DIM)
    report = run_family(job["family"], job.get("seed", 0), job.get("count", 1),
                        params, job.get("workers", 1))
    if report["failed"]:
        raise VerificationFailed(report)
    return report


def run_berezinian(job: dict) -> dict:
    if "modules" not in job:
        return run_verify({**job, "family": "berezinian"})
    sigma = ParitySeq.parse(job.get("parity", "01"))
    specs = [
        ModuleSpec(m["kind"], parse_rat(m.get("shift", 0)),
                   tuple(parse_rat(a) for a in m["weight"]) if "weight" in m else None)
        for m in job["modules"]
    ]
    try:
        rep = build_tensor(sigma, specs, job.get("max_dim", DEFAULT_MAX_DIM))
        report = berezinian_action(rep, job.get("order"))
    except DimensionCapError:
        raise
    except ValueError as exc:
        raise JobError(str(exc)) from exc
    result = {
        "order": report.order,
        "dim": rep.dim,
        "weight": weight_json(read_weight(rep, rep.xi)),
        "series": [format_rat(c) for c in report.scalar_series.coeffs],
        "central": report.central,
        "scalar_match": report.scalar_match,
    }
    if not (report.central and report.scalar_match):
        raise VerificationFailed(result)
    return result


COMMANDS = {
    "decide": run_decide,
    "reflect": run_reflect,
    "chain": run_chain,
    "verify": run_verify,
    "berezinian": run_berezinian,
}


def run_job(job: Any, command: str | None = None) -> tuple[int, dict]:
    """Run one job; returns ``(exit_code, report)``. Timing sits in its own field."""
    start = time.perf_counter()
    code = EXIT_OK
    try:
        job = parse_job(job, command)
        result = COMMANDS[job["command"]](job)
    except VerificationFailed as exc:
        code, result = EXIT_VERIFY, exc.result
    except (JobError, DimensionCapError, ValueError) as exc:
        return EXIT_INPUT, {"job": job, "error": str(exc)}
    report = {"job": job, "result": result, "ok": code == EXIT_OK,
              "timing": {"seconds": round(time.perf_counter() - start, 6)}}
    return code, report


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="yhw", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sp = sub.add_parser(name)
        sp.add_argument("--input", help="job JSON file (default: stdin)")
        sp.add_argument("--output", help="report JSON file (default: stdout)")
        sp.add_argument("--seed", type=int)
        sp.add_argument("--count", type=int)
        sp.add_argument("--order", help="series order N, or smallest|largest reflection order")
        sp.add_argument("--max-dim", type=int, dest="max_dim")
        if name == "reflect":
            sp.add_argument("--index", type=int, nargs="+")
        if name in ("verify", "berezinian"):
            sp.add_argument("--family")
            sp.add_argument("--p", type=int)
            sp.add_argument("--parity")
            sp.add_argument("--factors", type=int)
            sp.add_argument("--workers", type=int)
    return parser


def _read_job(args) -> Any:
    if args.input:
        with open(args.input, encoding="utf-8") as fh:
            return json.load(fh)
    if sys.stdin is None or sys.stdin.isatty():
        return {}
    text = sys.stdin.read()
    return json.loads(text) if text.strip() else {}


def _merge_flags(job: Any, args) -> Any:
    if not isinstance(job, dict):
        return job
    job = dict(job)
    for key in ("seed", "count", "max_dim", "family", "p", "parity", "factors", "workers"):
        value = getattr(args, key, None)
        if value is not None:
            job[key] = value
    if getattr(args, "index", None):
        job["index"] = args.index[0] if len(args.index) == 1 else args.index
    if args.order is not None:
        if args.order in ("smallest", "largest"):
            job["path"] = args.order
        else:
            try:
                job["order"] = int(args.order)
            except ValueError:
                job["order"] = args.order  # rejected by the schema
    return job


def main(argv: Sequence[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        job = _merge_flags(_read_job(args), args)
    except (OSError, json.JSONDecodeError) as exc:
        print(f"yhw: cannot read job: {exc}", file=sys.stderr)
        return EXIT_INPUT
    code, report = run_job(job, args.command)
    if code == EXIT_INPUT:
        print(f"yhw: {report['error']}", file=sys.stderr)
    text = dumps(report) + "\n"
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
