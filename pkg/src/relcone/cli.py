"""Command-line entry point: ``relcone {cone,join,oracle,normalize} INPUT``.

Exit status: 0 success, 2 input error, 3 precision exhausted,
4 field extension required, 5 oracle validation failed.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass

from . import cyclo
from .branch import Branch, CoincidentInfo, Transversal, normalize_pair
from .cone import DEFAULT_MAX_TRUNC, LinearCone, cone_sets
from .errors import (FieldExtensionRequired, ParseError, PrecisionExhausted,
                     RelconeError)
from .join import join_report, points_from_json
from .oracle import sample, validate

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_PRECISION = 3
EXIT_FIELD = 4
EXIT_ORACLE = 5


@dataclass
class JobSpec:
    command: str
    input: str
    output: str | None = None
    trunc: int | None = None
    max_trunc: int = DEFAULT_MAX_TRUNC
    max_conductor: int = 240
    radius: float = 1e-3
    samples: int = 2000
    seed: int = 7
    tol: float = 1e-2
    validate: bool = False
    format: str = "json"


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="relcone", description="Relative tangent cones and joins of curves")
    p.add_argument("command", choices=["cone", "join", "oracle", "normalize"])
    p.add_argument("input", help="input JSON file ('-' for stdin)")
    p.add_argument("-o", "--output", help="write the result here instead of stdout")
    p.add_argument("--trunc", type=int, help="truncate input series at t^N and start cone windows at N")
    p.add_argument("--max-trunc", type=int, default=DEFAULT_MAX_TRUNC)
    p.add_argument("--max-conductor", type=int, default=240)
    p.add_argument("--radius", type=float, default=1e-3)
    p.add_argument("--samples", type=int, default=2000)
    p.add_argument("--seed", type=int, default=7)
    p.add_argument("--tol", type=float, default=1e-2)
    p.add_argument("--validate", action="store_true", help="cross-check cones with the secant oracle")
    p.add_argument("--format", choices=["json", "text"], default="json")
    return p


def _load(path: str) -> dict:
    try:
        if path == "-":
            return json.load(sys.stdin)
        with open(path) as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc


def _branches(doc: dict, key: str, spec: JobSpec) -> list:
    items = doc.get(key)
    if items is None:
        raise ParseError(f"input needs a '{key}' list of branches")
    if isinstance(items, dict):
        items = [items]
    return [Branch.from_json(b, spec.trunc) for b in items]


def _oracle_reports(xs, ys, cone, spec):
    out = []
    for x in xs:
        for y in ys:
            s = sample(x, y, spec.radius, spec.samples, spec.seed)
            rep = validate(s, cone, spec.tol)
            out.append({"pair": [x.label, y.label], **rep.to_json()})
    return out


def _cone_job(doc, spec):
    xs, ys = _branches(doc, "X", spec), _branches(doc, "Y", spec)
    cone = cone_sets(xs, ys, spec.trunc, spec.max_trunc)
    result = {"command": "cone", "cone": cone.to_json()}
    status = EXIT_OK
    if spec.validate:
        reps = _oracle_reports(xs, ys, cone, spec)
        result["oracle"] = reps
        if not all(r["passed"] for r in reps):
            status = EXIT_ORACLE
    return result, status


def _join_job(doc, spec):
    mode, points = points_from_json(doc, spec.trunc)
    rep = join_report(points, mode, spec.trunc, spec.max_trunc)
    return {"command": "join", "report": rep.to_json()}, EXIT_OK


def _oracle_job(doc, spec):
    xs, ys = _branches(doc, "X", spec), _branches(doc, "Y", spec)
    if "cone" not in doc:
        raise ParseError("oracle input needs a 'cone' object")
    try:
        cone = LinearCone.from_json(doc["cone"])
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"malformed cone: {exc}") from exc
    reps = _oracle_reports(xs, ys, cone, spec)
    status = EXIT_OK if all(r["passed"] for r in reps) else EXIT_ORACLE
    return {"command": "oracle", "oracle": reps}, status


def _matrix_json(mat):
    return [[str(c) for c in row] for row in mat]


def _std_json(sb):
    return {"label": sb.source.label, "k": sb.k, "coords": [str(c) for c in sb.coords],
            "param": str(sb.param), "param_inverse": str(sb.param_inverse)}


def _normalize_job(doc, spec):
    xs, ys = _branches(doc, "X", spec), _branches(doc, "Y", spec)
    out = []
    for x in xs:
        for y in ys:
            order = spec.trunc
            res = normalize_pair(x, y, order, order)
            if isinstance(res, Transversal):
                out.append({"pair": [x.label, y.label], "kind": "transversal",
                            "tangents": [[str(c) for c in res.tangent_x],
                                         [str(c) for c in res.tangent_y]]})
                continue
            out.append({
                "pair": [x.label, y.label],
                "kind": "coincident" if isinstance(res, CoincidentInfo) else "shared_tangent",
                "frame": {"matrix": _matrix_json(res.xs.frame.matrix),
                          "inverse": _matrix_json(res.xs.frame.inverse),
                          "pivot": res.xs.frame.pivot},
                "x": _std_json(res.xs),
                "y": _std_json(res.ys),
            })
    return {"command": "normalize", "pairs": out}, EXIT_OK


_JOBS = {"cone": _cone_job, "join": _join_job, "oracle": _oracle_job, "normalize": _normalize_job}


def render_text(result: dict) -> str:
    lines = []
    cmd = result["command"]
    if cmd == "cone":
        c = result["cone"]
        lines.append(f"cone in C^{c['dim']}: {len(c['subspaces'])} component(s)")
        for s in c["subspaces"]:
            span = ", ".join("(" + ", ".join(row) + ")" for row in s["span"])
            provs = "; ".join(
                p["kind"] + (f" eps={p['epsilon']} n={p['n_i']}" if "n_i" in p and p["n_i"] is not None else "")
                for p in s["provenance"])
            lines.append(f"  dim {s['dim']}: span{{{span}}}  [{provs}]")
        for w in c["warnings"]:
            lines.append(f"  warning: {w}")
    if cmd == "join":
        r = result["report"]
        lines.append(f"join ({r['mode']}): {len(r['points'])} point(s)")
        for pt in r["points"]:
            lines.append(f"  P = ({':'.join(pt['P'])}), chart {pt['chart']}")
            for comp in pt["components"]:
                span = ", ".join("(" + ":".join(row) + ")" for row in comp["span"])
                lines.append(f"    {comp['theorem_case']} {comp['case']}: P^{comp['dim']} spanned by {span}")
        for k, v in r["markers"].items():
            lines.append(f"  marker {k}: {v}")
        for w in r["warnings"]:
            lines.append(f"  warning: {w}")
    if cmd == "normalize":
        for p in result["pairs"]:
            lines.append(f"pair {p['pair'][0]} / {p['pair'][1]}: {p['kind']}")
            for side in ("x", "y"):
                if side in p:
                    lines.append(f"  {side}: k={p[side]['k']} ({', '.join(p[side]['coords'])})")
    if "oracle" in result:
        for r in result["oracle"]:
            verdict = "PASS" if r["passed"] else "FAIL"
            lines.append(f"oracle {r['pair'][0]} / {r['pair'][1]}: soundness {r['soundness']:.3e} "
                         f"(tol {r['tol']}) {verdict}")
    return "\n".join(lines) + "\n"


def dump(result: dict, fmt: str = "json") -> str:
    if fmt == "text":
        return render_text(result)
    return json.dumps(result, sort_keys=True, indent=2) + "\n"


def run(spec: JobSpec) -> tuple[int, str]:
    """Execute one job; returns (exit status, output document)."""
    old_cap = cyclo.set_max_conductor(spec.max_conductor)
    try:
        doc = _load(spec.input)
        if not isinstance(doc, dict):
            raise ParseError("input must be a JSON object")
        result, status = _JOBS[spec.command](doc, spec)
        return status, dump(result, spec.format)
    except PrecisionExhausted as exc:
        return EXIT_PRECISION, dump({"command": spec.command, "error": "PrecisionExhausted",
                                     "message": str(exc)}, "json")
    except FieldExtensionRequired as exc:
        return EXIT_FIELD, dump({"command": spec.command, "error": "FieldExtensionRequired",
                                 "message": str(exc)}, "json")
    except (ParseError, RelconeError, ValueError, KeyError, TypeError) as exc:
        return EXIT_INPUT, dump({"command": spec.command, "error": type(exc).__name__,
                                 "message": str(exc)}, "json")
    finally:
        cyclo.set_max_conductor(old_cap)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    spec = JobSpec(command=args.command, input=args.input, output=args.output, trunc=args.trunc,
                   max_trunc=args.max_trunc, max_conductor=args.max_conductor,
                   radius=args.radius, samples=args.samples, seed=args.seed, tol=args.tol,
                   validate=args.validate, format=args.format)
    status, text = run(spec)
    if status in (EXIT_OK, EXIT_ORACLE) and spec.output:
        with open(spec.output, "w") as fh:
            fh.write(text)
    elif status in (EXIT_OK, EXIT_ORACLE):
        sys.stdout.write(text)
    else:
        sys.stderr.write(text)
    return status


if __name__ == "__main__":
    sys.exit(main())
