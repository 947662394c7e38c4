"""End-to-end command line behavior."""

import json

import pytest

from schwarz_lab.cli import main


@pytest.fixture()
def suite_file(tmp_path):
    doc = {
        "suite_name": "cli-test",
        "seed": 11,
        "jobs": [
            {"id": "zhu", "check": "zhu",
             "map": {"gallery": "zhu_extremal", "params": {"a": 0.2, "d": 0.1}}},
            {"id": "eq", "check": "equality_1d",
             "map": {"gallery": "identity", "params": {"n": 1}}},
        ],
    }
    path = tmp_path / "suite.json"
    path.write_text(json.dumps(doc))
    return path


def test_run_subcommand_ok(suite_file, capsys):
    code = main(["run", str(suite_file), "--format", "jsonl"])
    out = capsys.readouterr().out
    assert code == 0
    rows = [json.loads(line) for line in out.splitlines()]
    assert [r["id"] for r in rows] == ["zhu", "eq"]
    assert all(r["passed"] for r in rows)


def test_run_reports_failure_exit_code(tmp_path, capsys):
    doc = {"suite_name": "f", "seed": 0, "jobs": [
        {"id": "nope", "check": "polydisk_counterexample", "n": 3,
         "expect": "fail"}]}
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(doc))
    assert main(["run", str(path)]) == 1
    assert "FAIL" in capsys.readouterr().out


def test_run_schema_error_exit_code(tmp_path, capsys):
    path = tmp_path / "broken.json"
    path.write_text('{"suite_name": "x", "jobs": []}')  # no seed
    assert main(["run", str(path)]) == 2
    assert "/seed" in capsys.readouterr().err


def test_run_parallel_matches_serial(suite_file, capsys):
    main(["run", str(suite_file), "--format", "jsonl"])
    serial = capsys.readouterr().out
    main(["run", str(suite_file), "--format", "jsonl", "--jobs", "3"])
    parallel = capsys.readouterr().out
    assert serial == parallel


def test_tolerance_flag_overrides(suite_file, capsys):
    assert main(["run", str(suite_file)]) == 0
    capsys.readouterr()
    assert main(["run", str(suite_file), "--tolerance",
                 "margin_tol=1e-16"]) == 1
    out = capsys.readouterr().out
    assert "FAIL  zhu" in out


def test_gallery_list(capsys):
    assert main(["gallery", "list"]) == 0
    names = capsys.readouterr().out.split()
    assert "identity" in names
    assert "zhu_extremal" in names


def test_check_subcommand(capsys):
    code = main(["check", "zhu", "--map", "zhu_extremal",
                 "--map-params", '{"a": 0.0, "d": 0.5}', "--format", "jsonl"])
    out = capsys.readouterr().out
    assert code == 0
    row = json.loads(out)
    assert row["theorem_id"] == "zhu_boundary_disk"
    assert row["passed"]


def test_check_with_point_and_exponent(capsys):
    code = main(["check", "lp_boundary_schwarz",
                 "--map", '{"gallery": "identity", "params": {"n": 2}}',
                 "--point", "[[1.0, 0.0], [0.0, 0.0]]", "-p", "3",
                 "--format", "jsonl"])
    out = capsys.readouterr().out
    assert code == 0
    row = json.loads(out)
    assert row["quantities"]["lambda"] == pytest.approx(1.0, abs=1e-8)


def test_check_unknown_map_is_schema_error(capsys):
    assert main(["check", "zhu", "--map", "frobnicate"]) == 2
    assert "schema error" in capsys.readouterr().err


def test_caratheodory_metric(capsys):
    code = main(["caratheodory", "--dir", "0.3,0.4", "-p", "2",
                 "--starts", "6", "--iters", "80", "--format", "jsonl"])
    out = capsys.readouterr().out
    assert code == 0
    row = json.loads(out)
    assert row["quantities"]["closed_form"] == pytest.approx(0.5)
    assert row["quantities"]["optimized"] == pytest.approx(0.5, abs=1e-3)


def test_caratheodory_distance(capsys):
    code = main(["caratheodory", "--to", "[[0.5, 0.0]]", "-p", "2",
                 "--starts", "6", "--iters", "80", "--format", "jsonl"])
    out = capsys.readouterr().out
    assert code == 0
    row = json.loads(out)
    assert row["theorem_id"] == "caratheodory_distance_origin"
    assert row["passed"]
