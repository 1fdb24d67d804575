"""CLI contract tests: subcommands, output shapes and the exit-code table
(0 success, 1 validation/verification failure, 2 infeasible geometry,
3 I/O, schema or usage error)."""

import json
import os
import pathlib
import re
import subprocess

import pytest

CLI = os.environ.get("SHADOWHEIGHT_CLI")
DATA = pathlib.Path(os.environ.get("SHADOWHEIGHT_DATA", "data"))

pytestmark = pytest.mark.skipif(CLI is None, reason="SHADOWHEIGHT_CLI not set")


def run(*args, **kwargs):
    return subprocess.run([CLI, *args], capture_output=True, text=True, **kwargs)


def value_of(output, key):
    match = re.search(rf"^{key}: (.+)$", output, re.MULTILINE)
    assert match, f"{key} missing in output:\n{output}"
    return match.group(1)


def test_sun_declination_only():
    result = run("sun", "--date", "2017-01-15", "--time", "12:00")
    assert result.returncode == 0
    assert float(value_of(result.stdout, "declination_deg")) == pytest.approx(
        -21.13, abs=0.05
    )
    assert "hour_angle_deg" not in result.stdout


def test_sun_with_azimuth():
    result = run("sun", "--date", "2017-06-15", "--time", "12:00", "--lat", "45",
                 "--solar-azimuth", "180")
    assert result.returncode == 0
    assert float(value_of(result.stdout, "hour_angle_deg")) == 0.0


def test_sun_almanac_cross_check():
    result = run("sun", "--date", "2017-01-08", "--time", "00:00")
    assert result.returncode == 0
    # Independent almanac value for that instant: -22.2393.
    assert float(value_of(result.stdout, "declination_deg")) == pytest.approx(
        -22.2393, abs=0.1
    )


def test_sun_infeasible_geometry_exits_2():
    result = run("sun", "--date", "2017-06-15", "--time", "09:00", "--lat", "10",
                 "--solar-azimuth", "89", "--half-day", "morning")
    assert result.returncode == 2


def test_tables_match_reference_grids():
    t1 = run("tables", "--which", "1")
    assert t1.returncode == 0
    lines = t1.stdout.strip().splitlines()
    assert lines[0] == "slope_deg,20,30,40,50,60,70"
    assert lines[1] == "1.0,0.02,0.02,0.02,0.02,0.02,0.02"
    assert lines[6] == "3.5,0.05,0.05,0.06,0.06,0.06,0.05"

    t2 = run("tables", "--which", "2")
    assert t2.returncode == 0
    lines = t2.stdout.strip().splitlines()
    assert lines[5] == "3.0,0.06,0.06,0.06,0.06,0.06,0.06"


def test_table3_noon_column():
    result = run("tables", "--which", "3", "--year", "2017", "--utc-offset", "2")
    assert result.returncode == 0
    published_noon = {"1.15": -21.13, "3.15": -2.19, "5.15": 18.84,
                      "7.15": 21.54, "9.15": 3.07, "11.15": -18.44}
    lines = result.stdout.strip().splitlines()
    assert lines[0].startswith("date,decl_09_deg,decl_12_deg,decl_15_deg")
    for line in lines[1:]:
        cells = line.split(",")
        assert float(cells[2]) == pytest.approx(published_noon[cells[0]], abs=0.05)


def test_table3_requires_year():
    assert run("tables", "--which", "3").returncode == 3


def test_estimate_case_study_text_and_csv():
    text = run("estimate", "--scene", str(DATA / "case_study.json"))
    assert text.returncode == 0
    assert "ratio_cs_published: mean=5.61" in text.stdout
    assert "declination_override_mismatch" in text.stdout

    csv = run("estimate", "--scene", str(DATA / "case_study.json"), "--format", "csv")
    assert csv.returncode == 0
    lines = csv.stdout.splitlines()
    assert lines[0] == "structure_id,L_A2B_m,L_A1A2_m,H_m,R_CS,R_HS,flags"
    assert len(lines) == 6  # header + tower + 4 neighbors
    assert lines[1].startswith("cairo-tower,9.49,3.2,")
    assert "infeasible_discriminant" in lines[1]


def test_estimate_missing_file_exits_3():
    result = run("estimate", "--scene", "/no/such/file.json")
    assert result.returncode == 3
    assert "/no/such/file.json" in result.stderr


def test_estimate_validation_gate_and_force(tmp_path):
    scene = json.loads((DATA / "case_study.json").read_text())
    scene["observation"]["validation"]["vertical_edge_visible"] = False
    scene["notes"] = []
    path = tmp_path / "gated.json"
    path.write_text(json.dumps(scene))

    gated = run("estimate", "--scene", str(path))
    assert gated.returncode == 1
    assert "vertical_edge_not_visible" in gated.stderr

    forced = run("estimate", "--scene", str(path), "--force")
    assert forced.returncode == 0
    assert "forced" in forced.stdout


def test_estimate_strict_vs_lenient(tmp_path):
    scene = json.loads((DATA / "case_study.json").read_text())
    scene["surprise"] = 1
    path = tmp_path / "unknown.json"
    path.write_text(json.dumps(scene))

    strict = run("estimate", "--scene", str(path))
    assert strict.returncode == 3
    assert "surprise" in strict.stderr

    lenient = run("estimate", "--scene", str(path), "--lenient")
    assert lenient.returncode == 0
    assert "surprise" in lenient.stderr  # warned, not fatal


def test_synth_feeds_estimate(tmp_path):
    path = tmp_path / "synth.json"
    synth = run("synth", "--seed", "7", "--count", "4", "--out", str(path))
    assert synth.returncode == 0

    scene = json.loads(path.read_text())
    truth = scene["observation"]["truth_height_m"]

    est = run("estimate", "--scene", str(path), "--format", "csv")
    assert est.returncode == 0
    primary_row = est.stdout.splitlines()[1].split(",")
    assert float(primary_row[3]) == pytest.approx(truth, rel=1e-9)


def test_synth_deterministic(tmp_path):
    a = run("synth", "--seed", "99")
    b = run("synth", "--seed", "99")
    assert a.returncode == 0
    assert a.stdout == b.stdout


def test_propagate():
    result = run("propagate", "--ratio-cs", "5.61", "--shadow-len", "3.20")
    assert result.returncode == 0
    assert float(value_of(result.stdout, "height_m")) == pytest.approx(17.952)

    both = run("propagate", "--ratio-cs", "1", "--shadow-len", "1",
               "--ratio-hs", "1", "--edge-len", "1")
    assert both.returncode == 3


def test_slope_gate():
    result = run("slope-gate", "--target-error", "0.05", "--elevation", "45")
    assert result.returncode == 0
    assert float(value_of(result.stdout, "max_pos_slope_deg")) == pytest.approx(
        3.101, abs=1e-3
    )
    assert float(value_of(result.stdout, "max_neg_slope_deg")) == pytest.approx(
        2.667, abs=1e-3
    )


def test_verify_pass_and_usage_error():
    ok = run("verify", "--seeds", "1000")
    assert ok.returncode == 0
    assert "result: pass" in ok.stdout
    assert float(value_of(ok.stdout, "worst_height_rel_error")) < 1e-9

    zero = run("verify", "--seeds", "0")
    assert zero.returncode == 3


def test_help_exits_0():
    assert run("--help").returncode == 0
    assert run("sun", "--help").returncode == 0
