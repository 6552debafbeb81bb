import csv
import io
import json
import subprocess
import sys

import pytest

from superwishart.cli import main, read_config
from superwishart.report import FIELDS


def run(argv, capsys):
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def test_verify_pass_exit_zero(capsys):
    code, _, err = run(["verify", "circular", "--beta", "2", "--d", "1", "--a", "2", "--format", "json"], capsys)
    assert code == 0
    assert "PASS" in err


def test_verify_tolerance_failure_exit_one(capsys):
    code, _, _ = run(["verify", "theorem1", "--tol", "1e-30", "--nodes", "4"], capsys)
    assert code == 1


@pytest.mark.parametrize(
    "argv",
    [
        ["verify", "nope"],
        ["verify", "duality", "--beta", "3"],
        ["verify", "theorem1", "--a", "1", "--c", "2"],
        ["report"],
        ["report", "--only", ""],
        ["report", "--only", "bogus"],
        ["verify", "calibration", "--config", "/nonexistent/cfg"],
    ],
)
def test_configuration_errors_exit_two(argv, capsys):
    code, _, err = run(argv, capsys)
    assert code == 2
    assert err


def test_empty_only_reports_no_checks(capsys):
    code, _, err = run(["report", "--only", ","], capsys)
    assert code == 2
    assert "no checks selected" in err


def test_json_schema(tmp_path, capsys):
    out = tmp_path / "r.json"
    code, _, _ = run(["verify", "duality", "--m-max", "2", "--draws", "3", "--out", str(out)], capsys)
    assert code == 0
    doc = json.loads(out.read_text())
    assert set(doc) == {"version", "seed", "checks", "summary"}
    assert doc["summary"] == {"pass": 1, "fail": 0}
    rec = doc["checks"][0]
    assert list(rec) == list(FIELDS)
    assert rec["identity_id"] == "duality"
    assert rec["runtime_ms"] == 0


def test_csv_header(capsys):
    code, out, _ = run(["verify", "ingham_siegel", "--a", "2", "--rho", "1", "--format", "csv"], capsys)
    assert code == 0
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0] == list(FIELDS)
    assert len(rows) == 2


def test_config_file_and_flag_precedence(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# laguerre run\nd = 2\nxi = 1\nformat = json\n")
    assert read_config(cfg) == {"d": "2", "xi": "1", "format": "json"}
    out = tmp_path / "r.json"
    code, _, _ = run(["verify", "laguerre_selberg", "--config", str(cfg), "--xi", "2", "--out", str(out)], capsys)
    assert code == 0
    rec = json.loads(out.read_text())["checks"][0]
    assert rec["d"] == 2
    assert "xi=2" in rec["label"]


def test_bad_config_line(tmp_path, capsys):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("just words\n")
    code, _, _ = run(["verify", "calibration", "--config", str(cfg)], capsys)
    assert code == 2


def test_constants_table(capsys):
    code, out, _ = run(["constants", "--beta", "2", "--max-diff", "1", "--max-c", "1", "--max-d", "1",
                        "--format", "json"], capsys)
    assert code == 0
    rows = json.loads(out)
    assert len(rows) == 1 * 2 * 2 * 2
    assert {r["beta"] for r in rows} == {2}


def test_jobs_do_not_change_the_report(tmp_path, capsys):
    paths = []
    for jobs in ("1", "2"):
        p = tmp_path / f"r{jobs}.json"
        code, _, _ = run(["report", "--only", "circular,ingham_siegel", "--seed", "3", "--jobs", jobs,
                          "--out", str(p)], capsys)
        assert code == 0
        paths.append(p)
    assert paths[0].read_bytes() == paths[1].read_bytes()


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "superwishart", "--version"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert proc.stdout.startswith("superwishart ")
