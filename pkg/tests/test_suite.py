"""Suite parsing, execution, report emission, and the shipped suite file."""

import json
import pathlib

import pytest

from schwarz_lab import SchemaError
from schwarz_lab.suite import (
    emit_report,
    parse_suite,
    run_suite,
    serialize_suite,
    suite_passed,
)

SUITE_DIR = pathlib.Path(__file__).resolve().parent.parent / "suites"


def small_config(**kw):
    doc = {
        "suite_name": "unit",
        "seed": 7,
        "jobs": [
            {"id": "zhu", "check": "zhu",
             "map": {"gallery": "zhu_extremal", "params": {"a": 0.3, "d": 0.2}}},
            {"id": "pick", "check": "schwarz_pick",
             "map": {"gallery": "scaled_identity", "params": {"n": 2, "t": 0.5}},
             "exponent": 2, "samples": 200},
        ],
    }
    doc.update(kw)
    return doc


def test_empty_job_list_passes():
    config = parse_suite(small_config(jobs=[]))
    results = run_suite(config)
    assert results == []
    assert suite_passed(results)


def test_schema_round_trip_idempotent():
    config = parse_suite(small_config())
    normalized = serialize_suite(config)
    assert serialize_suite(parse_suite(normalized)) == normalized
    assert serialize_suite(parse_suite(json.dumps(normalized))) == normalized
    # defaults are filled in
    assert normalized["jobs"][0]["expect"] == "pass"
    assert normalized["tolerance_overrides"] == {}


@pytest.mark.parametrize("mutate, pointer", [
    (lambda d: d.pop("seed"), "/seed"),
    (lambda d: d.update(seed=-1), "/seed"),
    (lambda d: d.update(seed=True), "/seed"),
    (lambda d: d.update(suite_name=3), "/suite_name"),
    (lambda d: d.update(extra=1), "/"),
    (lambda d: d.update(tolerance_overrides={"bogus": 1e-6}),
     "/tolerance_overrides/bogus"),
    (lambda d: d.update(tolerance_overrides={"margin_tol": -1.0}),
     "/tolerance_overrides/margin_tol"),
    (lambda d: d["jobs"][0].pop("map"), "/jobs/0"),
    (lambda d: d["jobs"][0].update(check="frobnicate"), "/jobs/0/check"),
    (lambda d: d["jobs"][0].update(map={"gallery": "nope"}), "/jobs/0/map/gallery"),
    (lambda d: d["jobs"][0].update(map={"node": "bogus"}), "/jobs/0/map"),
    (lambda d: d["jobs"].append(
        {"id": "lw", "check": "liu_wang",
         "map": {"gallery": "identity", "params": {"n": 2}},
         "point": [[0.0, 0.0], ["x", 0.0]]}),
     "/jobs/2/point/1"),
    (lambda d: d["jobs"][1].update(id="zhu"), "/jobs/1/id"),
    (lambda d: d["jobs"][0].update(expect="maybe"), "/jobs/0/expect"),
    (lambda d: d["jobs"][1].update(exponent=1.0), "/jobs/1/exponent"),
    (lambda d: d["jobs"][1].update(samples=0), "/jobs/1/samples"),
])
def test_schema_errors_carry_json_pointers(mutate, pointer):
    doc = small_config()
    mutate(doc)
    with pytest.raises(SchemaError) as err:
        parse_suite(doc)
    assert str(err.value).startswith(pointer + ":"), str(err.value)


def test_invalid_json_text_is_schema_error():
    with pytest.raises(SchemaError) as err:
        parse_suite("{not json")
    assert str(err.value).startswith("/:")


def test_dimension_consistency_checked_at_parse():
    doc = small_config()
    doc["jobs"] = [{
        "id": "bad", "check": "lp_boundary_schwarz",
        "map": {"gallery": "identity", "params": {"n": 2}},
        "point": [[1.0, 0.0], [0.0, 0.0], [0.0, 0.0]],
        "exponent": 3,
    }]
    with pytest.raises(SchemaError) as err:
        parse_suite(doc)
    assert "/jobs/0" in str(err.value)


def test_job_error_is_captured_not_raised():
    doc = small_config()
    doc["jobs"] = [
        {"id": "boom", "check": "lp_boundary_schwarz",
         "map": {"gallery": "identity", "params": {"n": 2}},
         "point": [[0.5, 0.0], [0.0, 0.0]], "exponent": 3},
        {"id": "fine", "check": "zhu",
         "map": {"gallery": "identity", "params": {"n": 1}}},
    ]
    results = run_suite(parse_suite(doc))
    assert len(results) == 2
    assert not results[0].passed
    assert results[0].theorem_id == "lp_boundary_schwarz"
    assert results[0].hypotheses[0]["name"].startswith("raised_")
    assert results[1].passed


def test_expected_error_counts_as_pass():
    doc = small_config()
    doc["jobs"] = [{
        "id": "rejected", "check": "schwarz_pick",
        "map": {"gallery": "moebius_fix1", "params": {"a": 0.3}},
        "exponent": 2, "expect": "raises:HypothesisFailed",
    }]
    results = run_suite(parse_suite(doc))
    assert results[0].passed
    assert suite_passed(results)


def test_inverted_expectation_fails_suite():
    doc = small_config()
    doc["jobs"] = [{
        "id": "inverted", "check": "polydisk_counterexample", "n": 3,
        "expect": "fail",
    }]
    results = run_suite(parse_suite(doc))
    assert not results[0].passed
    assert not suite_passed(results)


def test_tolerance_override_reaches_runner():
    doc = small_config()
    doc["jobs"] = [doc["jobs"][0]]
    baseline = run_suite(parse_suite(doc))
    assert baseline[0].passed
    doc["tolerance_overrides"] = {"margin_tol": 1e-16}
    tightened = run_suite(parse_suite(doc))
    # the extremal margin sits at roundoff, far above 1e-16
    assert not tightened[0].passed


def test_jsonl_frozen_keys_and_validity():
    results = run_suite(parse_suite(small_config()))
    payload = emit_report(results, "jsonl").decode()
    lines = payload.splitlines()
    assert len(lines) == len(results)
    for line in lines:
        row = json.loads(line)
        assert set(row) == {"id", "theorem_id", "passed", "margin",
                            "quantities", "hypotheses", "residuals",
                            "runtime_ms"}
        assert row["runtime_ms"] is None


def test_csv_header_and_rows():
    results = run_suite(parse_suite(small_config()))
    text = emit_report(results, "csv").decode()
    lines = text.splitlines()
    assert lines[0].startswith("id,theorem_id,passed,margin")
    assert len(lines) == 1 + len(results)


def test_text_report_puts_failures_first():
    doc = small_config()
    doc["jobs"].append({"id": "flip", "check": "zhu",
                        "map": {"gallery": "identity", "params": {"n": 1}},
                        "expect": "fail"})
    results = run_suite(parse_suite(doc))
    lines = emit_report(results, "text").decode().splitlines()
    assert lines[0].startswith("FAIL  flip")
    assert lines[-1] == "2 passed, 1 failed, 3 total"


def test_unknown_format_rejected():
    results = run_suite(parse_suite(small_config(jobs=[])))
    with pytest.raises(Exception):
        emit_report(results, "yaml")


def test_determinism_across_worker_counts():
    config = parse_suite(small_config())
    one = emit_report(run_suite(config, workers=1), "jsonl")
    four = emit_report(run_suite(config, workers=4), "jsonl")
    assert one == four


def test_seed_changes_samples_not_stability():
    base = parse_suite(small_config())
    other = parse_suite(small_config(seed=8))
    row_a = run_suite(base)[1]
    row_b = run_suite(other)[1]
    assert row_a.passed and row_b.passed
    assert row_a.margin != row_b.margin


def test_shipped_suite_all_pass():
    config = parse_suite((SUITE_DIR / "paper.json").read_bytes())
    results = run_suite(config, workers=2)
    failed = [r.job_id for r in results if not r.passed]
    assert failed == []
    assert len(results) == len(config.jobs)
