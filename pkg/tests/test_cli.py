"""CLI behaviour: output format, determinism, config handling, exit codes."""

import csv
import filecmp
import json
import math

import numpy as np
import pytest

from jcsum.cli import RunConfig, main
from jcsum.exceptions import InvalidParameterError


def run(args):
    return main(list(args))


def read_csv(path):
    meta, header, rows = {}, None, []
    with open(path, newline="") as fh:
        for line in fh:
            if line.startswith("# "):
                key, _, value = line[2:].rstrip("\n").partition("=")
                meta[key] = value
            elif header is None:
                header = line.rstrip("\n").split(",")
            else:
                rows.append([float(v) for v in line.rstrip("\n").split(",")])
    return meta, header, rows


def test_inversion_csv_roundtrip(tmp_path):
    out = tmp_path / "inv.csv"
    assert run([
        "inversion", "--alpha", "5", "--methods", "exact,collapse",
        "--t-start", "0", "--t-stop", "2", "--t-count", "5", "--out", str(out),
    ]) == 0
    meta, header, rows = read_csv(out)
    assert meta["alpha"] == "5"
    assert meta["methods"] == "exact,collapse"
    assert header == ["time", "exact", "collapse"]
    assert len(rows) == 5
    assert rows[0][1] == pytest.approx(-1.0, abs=1e-12)
    assert rows[0][2] == -1.0
    # values carry 17 significant digits
    raw = out.read_text()
    assert "\r" not in raw


def test_determinism(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    args = [
        "inversion", "--alpha", "5", "--methods", "exact,saddle", "--branches", "0,1",
        "--t-start", "0", "--t-stop", "40", "--t-count", "11",
    ]
    assert run(args + ["--out", str(a)]) == 0
    assert run(args + ["--out", str(b)]) == 0
    assert filecmp.cmp(a, b, shallow=False)


def test_json_format(tmp_path):
    out = tmp_path / "inv.json"
    assert run([
        "inversion", "--alpha", "2", "--methods", "exact", "--format", "json",
        "--t-start", "0", "--t-stop", "1", "--t-count", "3", "--out", str(out),
    ]) == 0
    doc = json.loads(out.read_text())
    assert doc["columns"] == ["time", "exact"]
    assert len(doc["rows"]) == 3
    assert float(doc["rows"][0][1]) == pytest.approx(-1.0, abs=1e-12)


def test_saddle_per_branch_columns(tmp_path):
    out = tmp_path / "s.csv"
    assert run([
        "inversion", "--alpha", "5", "--methods", "saddle", "--branches", "0,1",
        "--t-start", "0", "--t-stop", "35", "--t-count", "4", "--out", str(out),
    ]) == 0
    _, header, rows = read_csv(out)
    assert header == ["time", "saddle", "saddle_k0", "saddle_k1"]
    for row in rows:
        assert row[1] == pytest.approx(row[2] + row[3], abs=1e-12)


def test_unit_conversion(tmp_path):
    # t-over-alpha grids are alpha times denser in lambda-t
    out_l = tmp_path / "l.csv"
    out_a = tmp_path / "a.csv"
    run(["inversion", "--alpha", "5", "--methods", "exact",
         "--t-start", "0", "--t-stop", "10", "--t-count", "3", "--out", str(out_l)])
    run(["inversion", "--alpha", "5", "--methods", "exact", "--unit", "t-over-alpha",
         "--t-start", "0", "--t-stop", "2", "--t-count", "3", "--out", str(out_a)])
    _, _, rows_l = read_csv(out_l)
    _, _, rows_a = read_csv(out_a)
    for rl, ra in zip(rows_l, rows_a):
        assert ra[1] == pytest.approx(rl[1], abs=1e-12)


def test_times_command(tmp_path):
    out = tmp_path / "t.csv"
    assert run([
        "times", "--alpha", "5", "--branches", "1,2", "--unit", "t-over-alpha",
        "--out", str(out),
    ]) == 0
    meta, header, rows = read_csv(out)
    assert header == ["n", "revival_time", "crossing_formula", "crossing_refined"]
    assert rows[0][1] == pytest.approx(2.0 * math.pi)
    assert rows[1][3] == pytest.approx(rows[1][2], abs=0.5)
    assert float(meta["collapse-width"]) == pytest.approx(1.0 / 5.0)


def test_trajectory_command(tmp_path):
    out = tmp_path / "traj.csv"
    assert run([
        "trajectory", "--alpha", "5", "--branches", "0,1",
        "--t-start", "0.01", "--t-stop", "100", "--t-count", "20", "--out", str(out),
    ]) == 0
    _, header, rows = read_csv(out)
    assert header == ["branch", "tau", "re_F", "im_F", "re_phi", "im_phi"]
    assert len(rows) == 40
    assert all(r[4] <= 1e-12 for r in rows)


def test_config_file_with_flag_override(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"alpha": 3.0, "t_count": 4, "t_stop": 2.0}))
    out = tmp_path / "o.csv"
    assert run([
        "inversion", "--config", str(cfg), "--alpha", "2", "--methods", "exact",
        "--out", str(out),
    ]) == 0
    meta, _, rows = read_csv(out)
    assert meta["alpha"] == "2"  # flag wins
    assert len(rows) == 4  # config survives where no flag given


def test_unknown_config_key_is_an_error(tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"alfa": 3.0}))
    assert run(["inversion", "--config", str(cfg)]) == 2
    assert "unknown config keys" in capsys.readouterr().err


def test_invalid_parameters_exit_2(capsys):
    assert run(["inversion", "--alpha", "-1"]) == 2
    assert run(["inversion", "--t-start", "5", "--t-stop", "1"]) == 2
    assert run(["inversion", "--methods", "magic"]) == 2
    assert capsys.readouterr().err.count("jcsum: error:") == 3


def test_selftest_subset_and_negative_control(capsys):
    # criterion 1 passes at its stated tolerance ...
    assert run(["selftest", "--criteria", "1"]) == 0
    out = capsys.readouterr().out
    assert "[PASS]" in out and "1/1 criteria passed" in out
    # ... and fails when tolerances are squeezed to the impossible
    assert run(["selftest", "--criteria", "1", "--tolerance-scale", "1e-12"]) == 1
    out = capsys.readouterr().out
    assert "[FAIL]" in out


def test_runconfig_validation():
    with pytest.raises(InvalidParameterError):
        RunConfig(alpha=0.0)
    with pytest.raises(InvalidParameterError):
        RunConfig(t_count=1)
    with pytest.raises(InvalidParameterError):
        RunConfig(methods=())
    with pytest.raises(InvalidParameterError):
        RunConfig(static_mode="auto")
