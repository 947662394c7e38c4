"""Command line entry points.

    schwarz-lab run suite.json [--format f] [--jobs N] [--tolerance k=v]
    schwarz-lab gallery list
    schwarz-lab check NAME --map MAP [--point VEC] [-p P] [...]
    schwarz-lab caratheodory --dir VEC -p P [--base VEC] [--to VEC]

Exit status is 0 iff every executed job passed; schema problems exit 2.
"""

from __future__ import annotations

import argparse
import json
import sys

from .errors import SchemaError, SchwarzLabError
from .gallery import gallery_names
from .suite import (
    emit_report,
    parse_suite,
    run_suite,
    serialize_suite,
    suite_passed,
)


def _parse_vector_arg(text: str):
    """Accept [re, im] pair JSON or a bare comma list of real coordinates."""
    try:
        data = json.loads(text)
    except ValueError:
        try:
            return [[float(t), 0.0] for t in text.split(",") if t.strip()]
        except ValueError:
            raise SchemaError(f"cannot parse vector argument {text!r}")
    if isinstance(data, list) and data and all(
            isinstance(t, (int, float)) for t in data):
        return [[float(t), 0.0] for t in data]
    return data


def _parse_map_arg(text: str, params_text: str | None):
    try:
        data = json.loads(text)
    except ValueError:
        data = None
    if isinstance(data, dict):
        return data
    # bare gallery name, params in a separate flag
    ref = {"gallery": text}
    if params_text:
        ref["params"] = json.loads(params_text)
    return ref


def _parse_exponent_arg(text: str):
    if text in ("inf", "Inf", "oo"):
        return "inf"
    value = float(text)
    return int(value) if value == int(value) else value


def _tolerance_pairs(items):
    out = {}
    for item in items or []:
        key, sep, value = item.partition("=")
        if not sep:
            raise SchemaError(f"--tolerance expects k=v, got {item!r}")
        out[key] = float(value)
    return out


def _emit(results, fmt: str) -> int:
    sys.stdout.buffer.write(emit_report(results, fmt))
    sys.stdout.buffer.flush()
    return 0 if suite_passed(results) else 1


def _cmd_run(args) -> int:
    with open(args.suite, "rb") as fh:
        config = parse_suite(fh.read())
    if args.tolerance:
        merged = dict(config.tolerance_overrides)
        merged.update(_tolerance_pairs(args.tolerance))
        config = parse_suite({**serialize_suite(config),
                              "tolerance_overrides": merged})
    results = run_suite(config, workers=args.jobs)
    return _emit(results, args.format)


def _cmd_gallery(args) -> int:
    if args.action != "list":
        raise SchemaError(f"unknown gallery action {args.action!r}")
    for name in gallery_names():
        print(name)
    return 0


def _single_job_config(job: dict, seed: int, tolerances: dict) -> dict:
    return {
        "suite_name": "cli",
        "seed": seed,
        "tolerance_overrides": tolerances,
        "jobs": [job],
    }


def _cmd_check(args) -> int:
    job = {"id": "cli", "check": args.name,
           "map": _parse_map_arg(args.map, args.map_params)}
    if args.point:
        job["point"] = _parse_vector_arg(args.point)
    if args.exponent is not None:
        job["exponent"] = _parse_exponent_arg(args.exponent)
    if args.samples:
        job["samples"] = args.samples
    if args.variant:
        job["variant"] = args.variant
    if args.anchor:
        job["anchors"] = [_parse_vector_arg(a) for a in args.anchor]
    if args.expect:
        job["expect"] = args.expect
    config = parse_suite(_single_job_config(
        job, args.seed, _tolerance_pairs(args.tolerance)))
    return _emit(run_suite(config), args.format)


def _cmd_caratheodory(args) -> int:
    if args.to:
        job = {"id": "cli", "check": "caratheodory_distance",
               "z": _parse_vector_arg(args.to),
               "exponent": _parse_exponent_arg(args.exponent)}
    else:
        job = {"id": "cli", "check": "caratheodory_metric",
               "direction": _parse_vector_arg(args.dir),
               "exponent": _parse_exponent_arg(args.exponent)}
        if args.base:
            job["base"] = _parse_vector_arg(args.base)
        if args.family:
            job["family"] = args.family
    if args.starts:
        job["starts"] = args.starts
    if args.iters:
        job["iters"] = args.iters
    config = parse_suite(_single_job_config(
        job, args.seed, _tolerance_pairs(args.tolerance)))
    return _emit(run_suite(config), args.format)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="schwarz-lab",
                                     description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--format", choices=("jsonl", "csv", "text"),
                       default="text")
        p.add_argument("--tolerance", action="append", metavar="K=V")
        p.add_argument("--seed", type=int, default=0)

    p_run = sub.add_parser("run", help="execute a suite file")
    p_run.add_argument("suite")
    p_run.add_argument("--format", choices=("jsonl", "csv", "text"),
                       default="text")
    p_run.add_argument("--jobs", type=int, default=1, metavar="N")
    p_run.add_argument("--tolerance", action="append", metavar="K=V")
    p_run.set_defaults(func=_cmd_run)

    p_gal = sub.add_parser("gallery", help="inspect the map gallery")
    p_gal.add_argument("action", choices=("list",))
    p_gal.set_defaults(func=_cmd_gallery)

    p_chk = sub.add_parser("check", help="run one verification job")
    p_chk.add_argument("name")
    p_chk.add_argument("--map", required=True,
                       help="gallery name or map JSON")
    p_chk.add_argument("--map-params", help="gallery params JSON")
    p_chk.add_argument("--point", help="boundary point vector")
    p_chk.add_argument("-p", "--exponent")
    p_chk.add_argument("--samples", type=int)
    p_chk.add_argument("--variant")
    p_chk.add_argument("--anchor", action="append",
                       help="rigidity anchor vector (repeatable)")
    p_chk.add_argument("--expect")
    common(p_chk)
    p_chk.set_defaults(func=_cmd_check)

    p_car = sub.add_parser("caratheodory", help="metric / distance bounds")
    p_car.add_argument("--base", help="base point (default origin)")
    p_car.add_argument("--dir", help="direction vector for the metric")
    p_car.add_argument("--to", help="endpoint: report distance from 0 instead")
    p_car.add_argument("-p", "--exponent", required=True)
    p_car.add_argument("--family", choices=("linear_dual", "linear_moebius"))
    p_car.add_argument("--starts", type=int)
    p_car.add_argument("--iters", type=int)
    common(p_car)
    p_car.set_defaults(func=_cmd_caratheodory)
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return args.func(args)
    except SchemaError as exc:
        print(f"schema error: {exc}", file=sys.stderr)
        return 2
    except SchwarzLabError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
