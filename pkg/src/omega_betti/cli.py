"""Command-line front end: ``omega-betti <mode> --input job.json``.

Exit codes: 0 when a verdict (including NoVerdict) was computed, 2 on input
or validation errors, 3 when an internal certificate check failed.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import dataclass
from math import comb
from typing import Sequence

from .errors import (
    HypothesisFails,
    InvariantViolation,
    NotQuasiHomogeneous,
    PointNotOnVariety,
    RankDeficient,
    ValidationError,
)
from .explorer import DEFAULT_DEPTH, IdealInput, truncated_minimal_resolution, weight_solver
from .groebner import QuotientRing, matrix_columns, syzygies_over_quotient
from .hypersurface import (
    HypersurfaceInput,
    check_hypothesis,
    full_column_rank_mod_f,
    jacobian_regularity,
    presentation_matrix,
)
from .parser import parse_polynomial
from .poly import parse_point
from .resolution import betti_series_from_resolution, betti_series_regular, build_minimal_resolution
from .verify import verify_suite

MODES = ("hypothesis", "present", "betti", "explore", "verify")

IRREDUCIBILITY_CAVEAT = "conditional on irreducibility of f (user assertion, not verified)"
UNASSERTED_CAVEAT = (
    "conditional on irreducibility of f, which the job does not assert; "
    "a rank certificate then does not establish freeness of the kernel"
)
EXPLORER_CAVEAT = (
    "Betti numbers from a truncated resolution; a detected recurrence is a "
    "conjecture about finitely many terms, not a proof of rationality"
)

log = logging.getLogger("omega_betti")


@dataclass
class JobSpec:
    mode: str
    variables: tuple
    order: int
    ideal: tuple  # polynomial strings
    point: tuple | None = None  # rational strings
    depth: int | None = None
    seed: int = 0
    irreducible: bool = True

    @classmethod
    def from_dict(cls, data: dict, mode: str | None = None) -> "JobSpec":
        if not isinstance(data, dict):
            raise ValidationError("job file must contain a JSON object")
        mode = mode or data.get("mode")
        if mode not in MODES:
            raise ValidationError(f"mode must be one of {', '.join(MODES)}")
        if mode == "verify":
            return cls(mode, (), 1, (), None, None, int(data.get("seed", 0)))
        try:
            variables = tuple(str(v) for v in data["variables"])
            order = data["order"]
            ideal = tuple(str(p) for p in data["ideal"])
        except KeyError as exc:
            raise ValidationError(f"missing field {exc.args[0]!r}") from None
        if not isinstance(order, int) or isinstance(order, bool) or order < 1:
            raise ValidationError("order must be a positive integer")
        if not variables:
            raise ValidationError("variables must be nonempty")
        if not ideal:
            raise ValidationError("ideal must be nonempty")
        point = data.get("point")
        if point is not None:
            point = tuple(str(c) for c in point)
            if len(point) != len(variables):
                raise ValidationError("point length does not match the variables")
        depth = data.get("depth")
        if depth is not None and (not isinstance(depth, int) or depth < 1):
            raise ValidationError("depth must be a positive integer")
        spec = cls(
            mode,
            variables,
            order,
            ideal,
            point,
            depth,
            int(data.get("seed", 0)),
            bool(data.get("irreducible", True)),
        )
        if mode in ("hypothesis", "present", "betti"):
            if len(ideal) != 1:
                raise ValidationError(f"mode {mode} needs a principal ideal (one generator)")
            if point is None:
                raise ValidationError(f"mode {mode} needs a point")
        return spec

    def to_json(self) -> dict:
        if self.mode == "verify":
            return {"seed": self.seed}
        out = {
            "variables": list(self.variables),
            "order": self.order,
            "ideal": list(self.ideal),
            "point": list(self.point) if self.point is not None else None,
        }
        if self.depth is not None:
            out["depth"] = self.depth
        return out


def _parse_ideal(spec: JobSpec) -> list:
    return [parse_polynomial(p, spec.variables) for p in spec.ideal]


def _point(spec: JobSpec, gens) -> tuple:
    try:
        pt = parse_point(spec.point)
    except (ValueError, ZeroDivisionError) as exc:
        raise ValidationError(f"bad point coordinate: {exc}") from None
    for g in gens:
        if g.evaluate(pt):
            raise PointNotOnVariety(f"generator {g} does not vanish at the point")
    return pt


def _hyper_input(spec: JobSpec):
    (f,) = _parse_ideal(spec)
    pt = _point(spec, [f])
    return HypersurfaceInput(f, spec.order, pt, spec.irreducible)


def _irreducibility(spec: JobSpec) -> list:
    return [IRREDUCIBILITY_CAVEAT if spec.irreducible else UNASSERTED_CAVEAT]


def _report(spec, result, certificates, caveats) -> dict:
    return {
        "mode": spec.mode,
        "input": spec.to_json(),
        "result": result,
        "certificates": certificates,
        "caveats": caveats,
    }


def _mode_hypothesis(spec: JobSpec, threads: int) -> dict:
    inp = _hyper_input(spec)
    report = check_hypothesis(inp)
    reg = jacobian_regularity(inp.f, inp.point)
    result = {"hypothesis_holds": report.holds, "regularity": reg.to_json()}
    certs = {"hypothesis": report.to_json()}
    return _report(spec, result, certs, _irreducibility(spec))


def _mode_present(spec: JobSpec, threads: int) -> dict:
    inp = _hyper_input(spec)
    M = presentation_matrix([inp.f], inp.n)
    s = inp.s
    cert = full_column_rank_mod_f(M, inp.f, threads=threads)
    result = {
        "shape": list(M.shape),
        "expected_shape": [comb(inp.n + s, s) - 1, comb(inp.n + s - 1, s)],
        "presentation": M.to_json(),
    }
    certs = {"rank": cert.to_json(M.row_labels())}
    return _report(spec, result, certs, _irreducibility(spec))


def _explorer_payload(gens, order, depth, time_budget=None):
    res, rep = truncated_minimal_resolution(IdealInput(gens, order, depth), time_budget)
    result = rep.to_json()
    certs = {
        "pivots": [p.to_json() for p in rep.pivots],
        "steps": rep.certificates,
        "minimal": res.minimal,
        "ext_dimensions": res.ext_dimensions(),
    }
    return result, certs


def _mode_betti(spec: JobSpec, threads: int, time_budget=None) -> dict:
    inp = _hyper_input(spec)
    f, n, a, s = inp.f, inp.n, inp.point, inp.s
    reg = jacobian_regularity(f, a)
    caveats = _irreducibility(spec)
    if reg.regular:
        series = betti_series_regular(n, s)
        result = {"path": "regular", "series": series.to_json()}
        certs = {"regularity": reg.to_json()}
        return _report(spec, result, certs, caveats)
    try:
        res = build_minimal_resolution(inp, threads=threads)
    except HypothesisFails as exc:
        certs = {"regularity": reg.to_json(), "hypothesis": exc.report.to_json()}
        if not any(a):
            try:
                weight_solver([f])
            except NotQuasiHomogeneous:
                pass
            else:
                depth = spec.depth or DEFAULT_DEPTH
                result, ecerts = _explorer_payload([f], n, depth, time_budget)
                certs.update(ecerts)
                return _report(
                    spec, {"path": "explorer", **result}, certs, caveats + [EXPLORER_CAVEAT]
                )
        return _report(spec, {"path": "none", "verdict": "NoVerdict"}, certs, caveats)
    except RankDeficient as exc:
        return _report(
            spec,
            {"path": "none", "verdict": "NoVerdict", "reason": str(exc)},
            {"regularity": reg.to_json()},
            caveats,
        )
    series = betti_series_from_resolution(res)
    M = presentation_matrix([f], n)
    ring = QuotientRing([f])
    kernel = syzygies_over_quotient(matrix_columns(M.entries, f.variables), ring)
    if kernel:
        raise InvariantViolation("presentation columns have syzygies over S/(f)")
    ext = res.ext_dimensions()
    result = {
        "path": "two_term",
        "series": series.to_json(),
        "resolution": res.to_json(),
    }
    certs = {
        "regularity": reg.to_json(),
        "hypothesis": check_hypothesis(inp).to_json(),
        "rank": res.exactness.to_json(res.row_labels),
        "ext_dimensions": ext,
        "ext1_nonzero": len(ext) > 1 and ext[1] > 0,
        "kernel_generators_over_quotient": len(kernel),
        "euler_characteristic": {
            "value": ext[0] - ext[1],
            "generic_rank": comb(n + s - 1, s - 1) - 1,
        },
    }
    return _report(spec, result, certs, caveats)


def _mode_explore(spec: JobSpec, threads: int, time_budget=None) -> dict:
    gens = _parse_ideal(spec)
    if spec.point is not None:
        pt = _point(spec, gens)
        if any(pt):
            raise ValidationError("explore works at the origin only")
    depth = spec.depth or DEFAULT_DEPTH
    result, certs = _explorer_payload(gens, spec.order, depth, time_budget)
    return _report(spec, result, certs, [EXPLORER_CAVEAT])


def _mode_verify(spec: JobSpec, threads: int) -> dict:
    return _report(spec, verify_suite(spec.seed), {}, [])


def run_job(spec: JobSpec, threads: int = 1, time_budget: float | None = None) -> dict:
    """Dispatch a validated job to its computation path; returns the report dict."""
    if spec.mode == "hypothesis":
        return _mode_hypothesis(spec, threads)
    if spec.mode == "present":
        return _mode_present(spec, threads)
    if spec.mode == "betti":
        return _mode_betti(spec, threads, time_budget)
    if spec.mode == "explore":
        return _mode_explore(spec, threads, time_budget)
    return _mode_verify(spec, threads)


def dumps(report: dict) -> str:
    return json.dumps(report, indent=2, ensure_ascii=False) + "\n"


def render_text(report: dict) -> str:
    lines = [f"mode: {report['mode']}"]
    inp = report["input"]
    for k, v in inp.items():
        lines.append(f"  {k}: {v}")
    lines.append("")
    lines.append("result")
    lines.extend(_text_block(report["result"], 1))
    if report["certificates"]:
        lines.append("")
        lines.append("certificates")
        lines.extend(_text_block(report["certificates"], 1))
    if report["caveats"]:
        lines.append("")
        lines.append("caveats")
        lines.extend(f"  - {c}" for c in report["caveats"])
    return "\n".join(lines) + "\n"


def _is_matrix(v) -> bool:
    return (
        isinstance(v, list)
        and v
        and all(isinstance(r, list) and all(isinstance(x, str) for x in r) for r in v)
    )


def _text_block(obj, level: int) -> list:
    pad = "  " * level
    out = []
    if isinstance(obj, dict):
        for k, v in obj.items():
            if isinstance(v, (dict, list)) and v and not _flat_list(v):
                out.append(f"{pad}{k}:")
                out.extend(_text_block(v, level + 1))
            else:
                out.append(f"{pad}{k}: {_scalar(v)}")
    elif _is_matrix(obj):
        widths = [max(len(r[j]) for r in obj) for j in range(len(obj[0]))]
        for r in obj:
            out.append(pad + "  ".join(x.rjust(w) for x, w in zip(r, widths)))
    elif isinstance(obj, list):
        for item in obj:
            if isinstance(item, (dict, list)) and not _flat_list(item):
                out.append(f"{pad}-")
                out.extend(_text_block(item, level + 1))
            else:
                out.append(f"{pad}- {_scalar(item)}")
    else:
        out.append(pad + _scalar(obj))
    return out


def _flat_list(v) -> bool:
    return isinstance(v, list) and all(not isinstance(x, (dict, list)) for x in v)


def _scalar(v) -> str:
    if v is None:
        return "-"
    if isinstance(v, bool):
        return "yes" if v else "no"
    if isinstance(v, list):
        return "[" + ", ".join(_scalar(x) for x in v) + "]"
    return str(v)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="omega-betti",
        description="Universal modules of higher derivations: presentations, "
        "minimal resolutions and Betti series.",
    )
    p.add_argument("mode", choices=MODES)
    p.add_argument("--input", "-i", help="job file (JSON); optional for verify")
    p.add_argument("--output", "-o", choices=("json", "text"), default="json")
    p.add_argument("--depth", type=int, help="truncation depth for the explorer")
    p.add_argument("--seed", type=int, help="seed for the verify suites")
    p.add_argument("--threads", type=int, default=1, help="worker threads for minor evaluation")
    p.add_argument(
        "--time-budget", type=float, help="seconds after which the explorer stops starting steps"
    )
    p.add_argument("--verbose", "-v", action="store_true")
    return p


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    try:
        if args.input:
            try:
                with open(args.input, encoding="utf-8") as fh:
                    data = json.load(fh)
            except OSError as exc:
                raise ValidationError(f"cannot read job file: {exc}") from None
            except json.JSONDecodeError as exc:
                raise ValidationError(f"malformed job file: {exc}") from None
        elif args.mode == "verify":
            data = {}
        else:
            raise ValidationError(f"mode {args.mode} needs --input")
        if isinstance(data, dict):
            data = dict(data)
            if args.depth is not None:
                data["depth"] = args.depth
            if args.seed is not None:
                data["seed"] = args.seed
        spec = JobSpec.from_dict(data, args.mode)
        if args.threads < 1:
            raise ValidationError("--threads must be at least 1")
        report = run_job(spec, threads=args.threads, time_budget=args.time_budget)
    except (InvariantViolation, AssertionError) as exc:
        print(f"internal invariant violation: {exc}", file=sys.stderr)
        return 3
    except (ValidationError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    text = dumps(report) if args.output == "json" else render_text(report)
    sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
