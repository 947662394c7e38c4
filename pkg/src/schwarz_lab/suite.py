"""Declarative verification suites.

A suite is one JSON document naming jobs; each job binds a check to a map
(gallery reference or inline expression JSON), point data, and an exponent.
Execution is deterministic: every random draw is keyed by the suite seed and
the job id, so re-running a config byte-for-byte reproduces the report.
"""

from __future__ import annotations

import hashlib
import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .caratheodory import (
    CompetitorFamily,
    MetricQuery,
    OptBudget,
    competitor_membership_max,
    distance_lower_bound_opt,
    distance_origin_closed,
    metric_lower_bound_opt,
    metric_origin_closed,
)
from .errors import SchemaError, SchwarzLabError
from .gallery import gallery, gallery_names
from .geometry import BoundaryPoint, as_exponent, cvector
from .maps import MapExpr, map_from_json
from .rigidity import (
    RigidityConfig,
    RigidityInstance,
    RigidityReport,
    check_proof_chain,
    check_rigidity,
    counterexample_polydisk_eigen,
    equality_case_1d,
)
from .verify import (
    Verdict,
    VerifyConfig,
    verify_kalaj,
    verify_liu_wang,
    verify_lp_boundary_schwarz,
    verify_pluriharmonic_boundary,
    verify_product_slice,
    verify_schwarz_pick,
    verify_zhu,
)

RIGIDITY_VERDICTS = ("certified", "equations_fail", "hypotheses_fail")

# per-check parameter contracts; "expect" and the common keys are handled
# separately
_CHECK_PARAMS = {
    "schwarz_pick": ({"map", "exponent"}, {"samples"}),
    "zhu": ({"map"}, set()),
    "kalaj": ({"map", "exponent"}, set()),
    "lp_boundary_schwarz": ({"map", "point", "exponent"}, set()),
    "liu_wang": ({"map", "point"}, set()),
    "product_slice": ({"map", "phi", "z_fix", "exponent", "n", "m"}, {"samples"}),
    "pluriharmonic_boundary": ({"map", "point", "exponent"}, set()),
    "rigidity": ({"map", "anchors", "exponent", "variant"},
                 {"samples", "grid_points"}),
    "proof_chain": ({"map", "anchors", "exponent", "variant"}, set()),
    "equality_1d": ({"map"}, set()),
    "polydisk_counterexample": ({"n"}, set()),
    "caratheodory_metric": ({"direction", "exponent"},
                            {"base", "family", "starts", "iters"}),
    "caratheodory_distance": ({"z", "exponent"}, {"starts", "iters"}),
}

_VERIFY_TOL_KEYS = ("hypothesis_tol", "margin_tol", "tangent_tol",
                    "slope_rel_tol")
_RIGIDITY_TOL_KEYS = ("origin_tol", "holo_tol", "fixed_tol", "equation_tol",
                      "identity_tol")
_KNOWN_TOL_KEYS = set(_VERIFY_TOL_KEYS) | set(_RIGIDITY_TOL_KEYS) | {"attain_tol"}


@dataclass(frozen=True)
class JobSpec:
    id: str
    check: str
    expect: str
    params: dict


@dataclass(frozen=True)
class SuiteConfig:
    suite_name: str
    seed: int
    tolerance_overrides: dict
    jobs: tuple


@dataclass(frozen=True)
class JobResult:
    """One executed job; serializes with the frozen report keys."""

    job_id: str
    theorem_id: str
    passed: bool
    margin: float | None
    quantities: dict
    hypotheses: tuple
    residuals: dict
    runtime_ms: float | None = None
    note: str = ""

    def to_json(self) -> dict:
        return {
            "id": self.job_id,
            "theorem_id": self.theorem_id,
            "passed": bool(self.passed),
            "margin": _finite_or_none(self.margin),
            "quantities": {k: _finite_or_none(v)
                           for k, v in self.quantities.items()},
            "hypotheses": [
                {"name": h["name"], "ok": bool(h["ok"]),
                 "residual": _finite_or_none(h["residual"])}
                for h in self.hypotheses
            ],
            "residuals": {k: _finite_or_none(v)
                          for k, v in self.residuals.items()},
            "runtime_ms": self.runtime_ms,
        }


def _finite_or_none(x):
    if x is None:
        return None
    x = float(x)
    return x if math.isfinite(x) else None


# ---------------------------------------------------------------------------
# schema


def _fail(path: str, message: str):
    raise SchemaError(f"{path}: {message}")


def _want_str(value, path: str) -> str:
    if not isinstance(value, str) or not value:
        _fail(path, "expected a non-empty string")
    return value


def _want_vector(value, path: str) -> np.ndarray:
    if not isinstance(value, list) or not value:
        _fail(path, "expected a non-empty array of [re, im] pairs")
    out = np.empty(len(value), dtype=complex)
    for i, entry in enumerate(value):
        if (not isinstance(entry, list) or len(entry) != 2
                or not all(isinstance(t, (int, float)) and not isinstance(t, bool)
                           for t in entry)):
            _fail(f"{path}/{i}", "expected an [re, im] number pair")
        out[i] = complex(entry[0], entry[1])
    return out


def _want_exponent(value, path: str):
    if isinstance(value, bool) or not isinstance(value, (int, float, str)):
        _fail(path, "expected a number greater than 1 or the string 'inf'")
    try:
        return as_exponent(value)
    except SchwarzLabError as exc:
        _fail(path, str(exc))


def _want_map(value, path: str) -> MapExpr:
    if not isinstance(value, dict):
        _fail(path, "expected a map object")
    if "gallery" in value:
        extra = set(value) - {"gallery", "params"}
        if extra:
            _fail(path, f"unexpected keys in gallery reference: {sorted(extra)}")
        name = _want_str(value["gallery"], f"{path}/gallery")
        if name not in gallery_names():
            _fail(f"{path}/gallery", f"unknown gallery map {name!r}")
        params = value.get("params", {})
        if not isinstance(params, dict):
            _fail(f"{path}/params", "expected an object")
        try:
            return gallery(name, params)
        except SchwarzLabError as exc:
            _fail(f"{path}/params", str(exc))
    try:
        return map_from_json(value)
    except SchwarzLabError as exc:
        _fail(path, str(exc))


def _want_count(value, path: str, minimum: int = 1) -> int:
    if isinstance(value, bool) or not isinstance(value, int) or value < minimum:
        _fail(path, f"expected an integer >= {minimum}")
    return value


def _valid_expect(value: str, check: str) -> bool:
    if value.startswith("raises:"):
        return value[len("raises:"):].isidentifier()
    if check == "rigidity":
        return value in RIGIDITY_VERDICTS
    return value in ("pass", "fail")


def _validate_job(raw: dict, index: int) -> JobSpec:
    path = f"/jobs/{index}"
    if not isinstance(raw, dict):
        _fail(path, "expected an object")
    job_id = _want_str(raw.get("id"), f"{path}/id")
    check = _want_str(raw.get("check"), f"{path}/check")
    if check not in _CHECK_PARAMS:
        _fail(f"{path}/check", f"unknown check {check!r}; "
              f"expected one of {sorted(_CHECK_PARAMS)}")
    required, optional = _CHECK_PARAMS[check]
    params = {k: v for k, v in raw.items() if k not in ("id", "check", "expect")}
    missing = required - set(params)
    if missing:
        _fail(path, f"missing required keys for {check}: {sorted(missing)}")
    extra = set(params) - required - optional
    if extra:
        _fail(path, f"unexpected keys for {check}: {sorted(extra)}")

    expect = raw.get("expect", "certified" if check == "rigidity" else "pass")
    expect = _want_str(expect, f"{path}/expect")
    if not _valid_expect(expect, check):
        _fail(f"{path}/expect", f"invalid expectation {expect!r} for {check}")

    # structural validation; runtime errors stay with the job result
    dims = []
    f = None
    if "map" in params:
        f = _want_map(params["map"], f"{path}/map")
        dims.append(f.input_dim)
    if "phi" in params:
        _want_map(params["phi"], f"{path}/phi")
    for key in ("point", "z_fix", "direction", "base", "z", "w"):
        if key in params:
            vec = _want_vector(params[key], f"{path}/{key}")
            if key == "point":
                dims.append(vec.shape[0])
    if "anchors" in params:
        if not isinstance(params["anchors"], list) or not params["anchors"]:
            _fail(f"{path}/anchors", "expected a non-empty array of vectors")
        for i, entry in enumerate(params["anchors"]):
            vec = _want_vector(entry, f"{path}/anchors/{i}")
            dims.append(vec.shape[0])
    if "exponent" in params:
        _want_exponent(params["exponent"], f"{path}/exponent")
    for key in ("samples", "grid_points", "starts", "iters"):
        if key in params:
            _want_count(params[key], f"{path}/{key}")
    if "n" in params:
        _want_count(params["n"], f"{path}/n")
    if "m" in params:
        _want_count(params["m"], f"{path}/m")
    if "variant" in params:
        _want_str(params["variant"], f"{path}/variant")
    if "family" in params:
        _want_str(params["family"], f"{path}/family")
    if len(set(dims)) > 1 and check != "product_slice":
        _fail(path, f"inconsistent dimensions {sorted(set(dims))}")
    return JobSpec(job_id, check, expect, params)


def parse_suite(source) -> SuiteConfig:
    """Validate a suite document (dict, JSON text, or bytes) into a SuiteConfig.

    Raises SchemaError carrying a JSON-pointer path to the offending field.
    """
    if isinstance(source, (str, bytes)):
        try:
            source = json.loads(source)
        except ValueError as exc:
            _fail("/", f"invalid JSON: {exc}")
    if not isinstance(source, dict):
        _fail("/", "expected a JSON object")
    extra = set(source) - {"suite_name", "seed", "tolerance_overrides", "jobs"}
    if extra:
        _fail("/", f"unexpected keys: {sorted(extra)}")

    name = _want_str(source.get("suite_name"), "/suite_name")
    seed = source.get("seed")
    if isinstance(seed, bool) or not isinstance(seed, int) or seed < 0:
        _fail("/seed", "expected a non-negative integer (wall-clock seeding "
              "is not allowed)")

    overrides = source.get("tolerance_overrides", {})
    if not isinstance(overrides, dict):
        _fail("/tolerance_overrides", "expected an object")
    clean = {}
    for key, value in overrides.items():
        if key not in _KNOWN_TOL_KEYS:
            _fail(f"/tolerance_overrides/{key}", "unknown tolerance name")
        if isinstance(value, bool) or not isinstance(value, (int, float)) or value <= 0:
            _fail(f"/tolerance_overrides/{key}", "expected a positive number")
        clean[key] = float(value)

    raw_jobs = source.get("jobs")
    if not isinstance(raw_jobs, list):
        _fail("/jobs", "expected an array")
    jobs = tuple(_validate_job(raw, i) for i, raw in enumerate(raw_jobs))
    seen = set()
    for i, job in enumerate(jobs):
        if job.id in seen:
            _fail(f"/jobs/{i}/id", f"duplicate job id {job.id!r}")
        seen.add(job.id)
    return SuiteConfig(name, seed, clean, jobs)


def serialize_suite(config: SuiteConfig) -> dict:
    """Normalized document: defaults filled in, ready for json.dumps."""
    return {
        "suite_name": config.suite_name,
        "seed": config.seed,
        "tolerance_overrides": dict(sorted(config.tolerance_overrides.items())),
        "jobs": [
            {"id": j.id, "check": j.check, "expect": j.expect, **j.params}
            for j in config.jobs
        ],
    }


# ---------------------------------------------------------------------------
# execution


def _job_seed(suite_seed: int, job_id: str) -> int:
    digest = hashlib.blake2s(f"{suite_seed}:{job_id}".encode(),
                             digest_size=8).digest()
    return int.from_bytes(digest, "big") % (2 ** 63)


@dataclass(frozen=True)
class _RunContext:
    seed: int
    overrides: dict

    def verify_cfg(self, job: JobSpec, **extra) -> VerifyConfig:
        kw = {k: self.overrides[k] for k in _VERIFY_TOL_KEYS
              if k in self.overrides}
        kw.update(extra)
        return VerifyConfig(seed=_job_seed(self.seed, job.id), **kw)

    def rigidity_cfg(self, job: JobSpec) -> RigidityConfig:
        kw = {k: self.overrides[k] for k in _RIGIDITY_TOL_KEYS
              if k in self.overrides}
        if "samples" in job.params:
            kw["selfmap_samples"] = job.params["samples"]
        if "grid_points" in job.params:
            kw["grid_points"] = job.params["grid_points"]
        return RigidityConfig(seed=_job_seed(self.seed, job.id), **kw)

    def attain_tol(self) -> float:
        return self.overrides.get("attain_tol", 1e-3)


def _job_map(job: JobSpec, key: str = "map") -> MapExpr:
    return _want_map(job.params[key], key)


def _job_point(job: JobSpec, key: str = "point") -> BoundaryPoint:
    vec = _want_vector(job.params[key], key)
    return BoundaryPoint(vec, as_exponent(job.params["exponent"]),
                         tolerance=1e-8)


def _expectation_pass(expect: str, raw_pass: bool) -> bool:
    return raw_pass if expect == "pass" else (not raw_pass)


def _row_from_verdict(job: JobSpec, verdict: Verdict) -> JobResult:
    hyps = tuple(
        {"name": h.name, "ok": bool(h.ok), "residual": float(h.residual)}
        for h in verdict.hypotheses
    )
    residuals = {h.name: float(h.residual) for h in verdict.hypotheses}
    quantities = {k: float(v) for k, v in verdict.quantities.items()}
    return JobResult(
        job_id=job.id,
        theorem_id=verdict.theorem_id,
        passed=_expectation_pass(job.expect, verdict.passed),
        margin=float(verdict.margin),
        quantities=quantities,
        hypotheses=hyps,
        residuals=residuals,
    )


def _row_from_rigidity(job: JobSpec, report: RigidityReport) -> JobResult:
    passed = report.verdict == job.expect
    quantities = {k: float(v) for k, v in report.quantities.items()}
    quantities["rank"] = float(report.rank)
    quantities["identity_residual"] = float(report.identity_residual)
    residuals = {}
    for i, r in enumerate(report.fixed_point_residuals):
        residuals[f"fixed_point_{i}"] = float(r)
    for i, v in enumerate(report.equation_values):
        residuals[f"equation_{i}_re"] = float(v.real)
        residuals[f"equation_{i}_im"] = float(v.imag)
    for i, r in enumerate(report.jf0_residuals):
        residuals[f"jf0_{i}"] = float(r)
    hyps = (
        {"name": f"verdict_{report.verdict}", "ok": passed, "residual": 0.0},
        {"name": "nonneg_pairings", "ok": bool(report.nonneg_ok),
         "residual": 0.0},
    )
    return JobResult(
        job_id=job.id,
        theorem_id="rigidity_certificate",
        passed=passed,
        margin=None,
        quantities=quantities,
        hypotheses=hyps,
        residuals=residuals,
        note=report.reason,
    )


def _row_from_error(job: JobSpec, exc: Exception) -> JobResult:
    name = type(exc).__name__
    passed = job.expect == f"raises:{name}"
    hyps = ({"name": f"raised_{name}", "ok": passed, "residual": 0.0},)
    return JobResult(
        job_id=job.id,
        theorem_id=job.check,
        passed=passed,
        margin=None,
        quantities={},
        hypotheses=hyps,
        residuals={},
        note=str(exc),
    )


def _rigidity_instance(job: JobSpec) -> RigidityInstance:
    e = as_exponent(job.params["exponent"])
    anchors = tuple(
        BoundaryPoint(_want_vector(a, f"anchors/{i}"), e, tolerance=1e-8)
        for i, a in enumerate(job.params["anchors"])
    )
    return RigidityInstance(_job_map(job), anchors, e, job.params["variant"])


def _attainment_verdict(theorem_id: str, closed: float, out, membership: float,
                        tol: float) -> Verdict:
    from .verify import HypothesisCheck

    gap = closed - out.value
    margin = min(tol - gap, gap + 1e-9)
    checks = (
        HypothesisCheck("competitors_map_into_disk", membership <= 1.0 + 1e-9,
                        max(0.0, membership - 1.0)),
        HypothesisCheck("optimizer_converged", bool(out.converged), 0.0),
    )
    quantities = {
        "closed_form": closed,
        "optimized": out.value,
        "gap": gap,
        "evaluations": float(out.evaluations),
    }
    return Verdict(theorem_id, checks, quantities, margin, tolerance=0.0)


def _run_caratheodory_metric(job: JobSpec, ctx: _RunContext) -> JobResult:
    p = as_exponent(job.params["exponent"])
    direction = _want_vector(job.params["direction"], "direction")
    n = direction.shape[0]
    base = (_want_vector(job.params["base"], "base")
            if "base" in job.params else np.zeros(n, dtype=complex))
    if np.any(base):
        raise SchwarzLabError(
            "metric check compares against the origin closed form; base must be 0")
    family = CompetitorFamily(job.params.get("family", "linear_dual"))
    budget = OptBudget(starts=job.params.get("starts", 24),
                       iters=job.params.get("iters", 150),
                       seed=_job_seed(ctx.seed, job.id))
    out = metric_lower_bound_opt(MetricQuery(base, direction, p), family, budget)
    membership = competitor_membership_max(family, out.params, base, p)
    closed = metric_origin_closed(direction, p)
    verdict = _attainment_verdict("caratheodory_metric_origin", closed, out,
                                  membership, ctx.attain_tol())
    return _row_from_verdict(job, verdict)


def _run_caratheodory_distance(job: JobSpec, ctx: _RunContext) -> JobResult:
    p = as_exponent(job.params["exponent"])
    z = _want_vector(job.params["z"], "z")
    w = np.zeros_like(z)
    budget = OptBudget(starts=job.params.get("starts", 24),
                       iters=job.params.get("iters", 150),
                       seed=_job_seed(ctx.seed, job.id))
    out = distance_lower_bound_opt(z, w, p, budget=budget)
    membership = competitor_membership_max(CompetitorFamily("linear_moebius"),
                                           out.params, w, p)
    closed = distance_origin_closed(z, p)
    verdict = _attainment_verdict("caratheodory_distance_origin", closed, out,
                                  membership, ctx.attain_tol())
    return _row_from_verdict(job, verdict)


def _run_job(job: JobSpec, ctx: _RunContext) -> JobResult:
    if job.check == "schwarz_pick":
        v = verify_schwarz_pick(_job_map(job), job.params["exponent"],
                                samples=job.params.get("samples"),
                                cfg=ctx.verify_cfg(job))
        return _row_from_verdict(job, v)
    if job.check == "zhu":
        return _row_from_verdict(job, verify_zhu(_job_map(job),
                                                 ctx.verify_cfg(job)))
    if job.check == "kalaj":
        return _row_from_verdict(job, verify_kalaj(
            _job_map(job), job.params["exponent"], ctx.verify_cfg(job)))
    if job.check == "lp_boundary_schwarz":
        v, _cert = verify_lp_boundary_schwarz(_job_map(job), _job_point(job),
                                              ctx.verify_cfg(job))
        return _row_from_verdict(job, v)
    if job.check == "liu_wang":
        vec = _want_vector(job.params["point"], "point")
        z0 = BoundaryPoint(vec, 2, tolerance=1e-8)
        return _row_from_verdict(job, verify_liu_wang(_job_map(job), z0,
                                                      ctx.verify_cfg(job)))
    if job.check == "product_slice":
        extra = ({"samples": job.params["samples"]}
                 if "samples" in job.params else {})
        v = verify_product_slice(
            _job_map(job), _job_map(job, "phi"),
            _want_vector(job.params["z_fix"], "z_fix"),
            job.params["exponent"], job.params["n"], job.params["m"],
            ctx.verify_cfg(job, **extra))
        return _row_from_verdict(job, v)
    if job.check == "pluriharmonic_boundary":
        v = verify_pluriharmonic_boundary(_job_map(job), _job_point(job),
                                          ctx.verify_cfg(job))
        return _row_from_verdict(job, v)
    if job.check == "rigidity":
        report = check_rigidity(_rigidity_instance(job), ctx.rigidity_cfg(job))
        return _row_from_rigidity(job, report)
    if job.check == "proof_chain":
        v = check_proof_chain(_rigidity_instance(job), ctx.rigidity_cfg(job))
        return _row_from_verdict(job, v)
    if job.check == "equality_1d":
        v = equality_case_1d(_job_map(job), ctx.rigidity_cfg(job))
        return _row_from_verdict(job, v)
    if job.check == "polydisk_counterexample":
        v = counterexample_polydisk_eigen(job.params["n"],
                                          ctx.rigidity_cfg(job))
        return _row_from_verdict(job, v)
    if job.check == "caratheodory_metric":
        return _run_caratheodory_metric(job, ctx)
    if job.check == "caratheodory_distance":
        return _run_caratheodory_distance(job, ctx)
    raise SchwarzLabError(f"no runner for check {job.check!r}")


def run_suite(config: SuiteConfig, workers: int = 1) -> list:
    """Execute all jobs, collecting one JobResult per job in job order.

    Job errors are captured in that job's result and never abort the suite;
    a raised error counts as passed only when the job expects it by name.
    """
    ctx = _RunContext(config.seed, dict(config.tolerance_overrides))

    def one(job: JobSpec) -> JobResult:
        try:
            return _run_job(job, ctx)
        except Exception as exc:  # noqa: BLE001 - captured per contract
            return _row_from_error(job, exc)

    if workers > 1 and len(config.jobs) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(one, config.jobs))
    return [one(job) for job in config.jobs]


def suite_passed(results) -> bool:
    return all(r.passed for r in results)


# ---------------------------------------------------------------------------
# reporting


def _dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"),
                      allow_nan=False)


def _fmt_float(x) -> str:
    if x is None or not math.isfinite(x):
        return ""
    return repr(float(x))


def _emit_jsonl(results) -> bytes:
    lines = [_dumps(r.to_json()) for r in results]
    return ("\n".join(lines) + "\n" if lines else "").encode()


def _emit_csv(results) -> bytes:
    keys = sorted({k for r in results for k in r.quantities})
    header = ["id", "theorem_id", "passed", "margin"] + keys
    rows = [",".join(header)]
    for r in results:
        cells = [r.job_id, r.theorem_id, "true" if r.passed else "false",
                 _fmt_float(r.margin)]
        cells += [_fmt_float(r.quantities.get(k)) for k in keys]
        rows.append(",".join(cells))
    return ("\n".join(rows) + "\n").encode()


def _emit_text(results) -> bytes:
    ordered = ([r for r in results if not r.passed]
               + [r for r in results if r.passed])
    id_w = max([len(r.job_id) for r in results], default=2)
    th_w = max([len(r.theorem_id) for r in results], default=2)
    lines = []
    for r in ordered:
        margin = ("n/a" if r.margin is None or not math.isfinite(r.margin)
                  else format(r.margin, ".3g"))
        line = (f"{'PASS' if r.passed else 'FAIL'}  {r.job_id:<{id_w}}  "
                f"{r.theorem_id:<{th_w}}  margin={margin}")
        if r.note:
            line += f"  ({r.note})"
        lines.append(line)
    npass = sum(1 for r in results if r.passed)
    lines.append(f"{npass} passed, {len(results) - npass} failed, "
                 f"{len(results)} total")
    return ("\n".join(lines) + "\n").encode()


def emit_report(results, format: str = "jsonl") -> bytes:
    """Render executed jobs: jsonl (frozen keys), csv (flattened), or text."""
    if format == "jsonl":
        return _emit_jsonl(results)
    if format == "csv":
        return _emit_csv(results)
    if format == "text":
        return _emit_text(results)
    raise SchwarzLabError(f"unknown report format {format!r}")
