"""End-to-end pipeline, report format, CLI behavior."""

import json
import math
import os
import subprocess
import sys

import pytest

from curvebraid.errors import InputError
from curvebraid.pipeline import CurveSpec, analyze, report_json
from tests.conftest import fixture_path

GOLDEN = os.path.join(os.path.dirname(__file__), "data", "fixture_report.json")


def run_cli(*args):
    return subprocess.run(
        [sys.executable, "-m", "curvebraid.cli", *args],
        capture_output=True, text=True,
    )


# --- curve spec parsing --------------------------------------------------


def test_spec_rejects_wrong_schema(tmp_path):
    p = tmp_path / "c.json"
    p.write_text(json.dumps({"schema": 2, "terms": []}))
    with pytest.raises(InputError):
        CurveSpec.load(str(p))


def test_spec_rejects_constant_in_w(tmp_path):
    p = tmp_path / "c.json"
    p.write_text(json.dumps(
        {"schema": 1, "terms": [{"zdeg": 1, "wdeg": 0, "re": 1.0}]}
    ))
    with pytest.raises(InputError):
        CurveSpec.load(str(p))


def test_spec_tolerance_overrides(tmp_path):
    p = tmp_path / "c.json"
    p.write_text(json.dumps({
        "schema": 1,
        "terms": [{"zdeg": 0, "wdeg": 2, "re": 1.0},
                  {"zdeg": 1, "wdeg": 0, "re": -1.0}],
        "tolerances": {"grid_step": 0.02, "hom_budget": 12345},
    }))
    spec = CurveSpec.load(str(p))
    assert spec.cfg.grid_step == 0.02
    assert spec.cfg.hom_budget == 12345


# --- analyze -------------------------------------------------------------


def test_fixture_report_headline():
    spec = CurveSpec.load(fixture_path())
    report, _, _ = analyze(spec)
    assert report["verdict"] == "knotted-certified"
    assert len(report["branch_points"]) == 8
    assert report["bplus"]["arc_count"] == 8
    assert report["regions"]["count"] == 4
    assert report["regions"]["edge_count"] == 5
    assert report["regions"]["terminal_count"] == 2
    assert report["braid"]["chi"] == 1
    assert report["braid"]["surface_components"] == 1
    assert report["braid"]["closure_components"] == 1
    assert report["braid"]["exponent_sum"] == 2
    assert report["certificate"]["certified"]
    assert report["certificate"]["target"] == "S3"
    assert all(report["consistency"].values())


def test_fixture_report_matches_golden():
    spec = CurveSpec.load(fixture_path())
    report, _, _ = analyze(spec)
    with open(GOLDEN) as fh:
        golden = json.load(fh)

    def close(a, b, path=""):
        assert type(a) is type(b) or (
            isinstance(a, (int, float)) and isinstance(b, (int, float))
        ), path
        if isinstance(a, dict):
            assert set(a) == set(b), path
            for k in a:
                close(a[k], b[k], f"{path}.{k}")
        elif isinstance(a, list):
            assert len(a) == len(b), path
            for i, (x, y) in enumerate(zip(a, b)):
                close(x, y, f"{path}[{i}]")
        elif isinstance(a, float):
            assert math.isclose(a, b, rel_tol=1e-8, abs_tol=1e-8), path
        else:
            assert a == b, path

    close(report, golden)


def test_report_determinism_byte_identical():
    spec = CurveSpec.load(fixture_path())
    r1, _, _ = analyze(spec)
    r2, _, _ = analyze(CurveSpec.load(fixture_path()))
    assert report_json(r1) == report_json(r2)


def test_parabola_disc_is_inconclusive(tmp_path):
    # w^2 - z over a disc around the branch point: an embedded disc whose
    # boundary is unknotted, so no noncyclicity certificate exists
    p = tmp_path / "c.json"
    p.write_text(json.dumps({
        "schema": 1,
        "terms": [{"zdeg": 0, "wdeg": 2, "re": 1.0},
                  {"zdeg": 1, "wdeg": 0, "re": -1.0}],
        "loop": {"circle": {"center": [0.0, 0.0], "radius": 0.5,
                            "samples": 96, "phase": 0.4}},
        "window": [-1.0, 1.0, -1.0, 1.0],
    }))
    report, _, _ = analyze(CurveSpec.load(str(p)))
    assert report["braid"]["chi"] == 1
    assert report["braid"]["surface_components"] == 1
    assert report["abelianization"] == {"free_rank": 1, "torsion": []}
    assert not report["certificate"]["certified"]
    assert report["verdict"] == "inconclusive"


def test_empty_loop_is_not_a_disc(tmp_path):
    p = tmp_path / "c.json"
    p.write_text(json.dumps({
        "schema": 1,
        "terms": [{"zdeg": 0, "wdeg": 3, "re": 1.0},
                  {"zdeg": 0, "wdeg": 1, "re": -3.0},
                  {"zdeg": 4, "wdeg": 0, "re": 2.0}],
        "loop": {"circle": {"center": [0.0, 0.0], "radius": 0.2,
                            "samples": 64}},
        "window": [-1.6, 1.6, -1.6, 1.6],
    }))
    report, _, _ = analyze(CurveSpec.load(str(p)))
    assert report["braid"]["surface_components"] == 3
    assert report["verdict"] == "inconclusive"
    assert "not a disc" in report["notes"]


# --- CLI -----------------------------------------------------------------


def test_cli_analyze_ok(tmp_path):
    out = tmp_path / "r.json"
    r = run_cli("analyze", fixture_path(), "--out", str(out))
    assert r.returncode == 0, r.stderr
    report = json.loads(out.read_text())
    assert report["verdict"] == "knotted-certified"


def test_cli_input_error_exit_2(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    r = run_cli("analyze", str(bad))
    assert r.returncode == 2
    assert "input-error" in r.stderr


def test_cli_budget_exit_4():
    r = run_cli("homs", fixture_path(), "--hom-budget", "3")
    assert r.returncode == 4
    assert "budget" in r.stderr


def test_cli_bplus_artifacts(tmp_path):
    svg = tmp_path / "o.svg"
    csv = tmp_path / "o.csv"
    r = run_cli("bplus", fixture_path(), "--svg", str(svg), "--csv", str(csv))
    assert r.returncode == 0, r.stderr
    assert svg.read_text().startswith("<svg")
    header, first = csv.read_text().splitlines()[:2]
    assert header == "arc,label,idx,x,y"
    assert len(first.split(",")) == 5


def test_cli_branch_points():
    r = run_cli("branch-points", fixture_path())
    assert r.returncode == 0, r.stderr
    pts = json.loads(r.stdout)
    assert len(pts) == 8
    for rec in pts:
        assert abs(complex(rec["re"], rec["im"]) ** 8 - 1) <= 1e-9


def test_cli_targets_flag():
    r = run_cli("homs", fixture_path(), "--targets", "S3")
    assert r.returncode == 0, r.stderr
    out = json.loads(r.stdout)
    assert out["S3"]["surjective"] >= 1
