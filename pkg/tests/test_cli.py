import csv
import json
import subprocess
import sys
from pathlib import Path

import pytest

from fharmonic import cli
from fharmonic.errors import ConfigurationError, NumericError
from fharmonic.scenario import load_suite

SUITE = Path(__file__).resolve().parents[1] / "scenarios" / "liouville_suite.yaml"


@pytest.fixture(scope="module")
def suite_run(tmp_path_factory):
    out = tmp_path_factory.mktemp("suite")
    status = cli.run(["--suite", str(SUITE), "--out", str(out)])
    return status, out, json.loads((out / "report.json").read_text())


def test_suite_passes(suite_run):
    status, _, report = suite_run
    assert status == 0
    assert all(entry["expectation_met"] for entry in report.values())


def test_required_verdicts(suite_run):
    _, _, report = suite_run
    assert report["bernstein_minimal_graph_m3"]["verdict"] == "CONSTANT_FORCED"
    assert report["hyperbolic_harmonic_m3"]["failing"] == ["f2"]
    assert report["catenoid_annulus_m3"]["failing"] == ["pole_smooth"]
    assert report["annulus_harmonic_m3"]["failing"] == ["pole_smooth"]


def test_curves_written(suite_run):
    _, out, report = suite_run
    name = report["catenoid_annulus_m3"]["curves_file"]
    with (out / name).open() as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == ["R", "E", "Z", "M", "K", "eta"]
    # IEEE round trip: every field parses back to the same double
    for field in rows[1]:
        assert repr(float(field)) == field


def test_rerun_is_bit_identical(suite_run, tmp_path):
    _, out, _ = suite_run
    ids = ["catenoid_annulus_m3", "hyperbolic_harmonic_m3"]
    args = ["--suite", str(SUITE), "--out", str(tmp_path)] + sum((["--scenario", i] for i in ids), [])
    assert cli.run(args + ["--workers", "2"]) == 0
    full = json.loads((out / "report.json").read_text())
    part = json.loads((tmp_path / "report.json").read_text())
    assert part == {i: full[i] for i in ids}
    assert (tmp_path / "catenoid_annulus_m3_curves.csv").read_bytes() == \
        (out / "catenoid_annulus_m3_curves.csv").read_bytes()


def test_emit_curves_off(tmp_path):
    args = ["--suite", str(SUITE), "--out", str(tmp_path), "--scenario", "annulus_harmonic_m3",
            "--emit-curves", "off"]
    assert cli.run(args) == 0
    assert not list(tmp_path.glob("*.csv"))


def _write(tmp_path, text):
    p = tmp_path / "s.yaml"
    p.write_text(text)
    return str(p)


BASE = """
scenarios:
  - id: a
    profile: {name: %s}
    manifold: {kind: euclidean, m: 3}
    theorem: bernstein
    granted: [K_decay]
    expect: {verdict: %s}
"""


def test_unknown_profile_exit_2(tmp_path, capsys):
    assert cli.run(["--suite", _write(tmp_path, BASE % ("nope", "CONSTANT_FORCED")),
                    "--out", str(tmp_path)]) == 2
    assert "scenarios[0]" in capsys.readouterr().err


def test_parse_error_reports_location(tmp_path, capsys):
    assert cli.run(["--suite", _write(tmp_path, "scenarios: [\n  {id: a,\n"), "--out", str(tmp_path)]) == 2
    assert "s.yaml:" in capsys.readouterr().err


def test_unknown_scenario_id_exit_2(tmp_path):
    assert cli.run(["--suite", str(SUITE), "--out", str(tmp_path), "--scenario", "missing"]) == 2


def test_unmet_expectation_exit_1(tmp_path):
    assert cli.run(["--suite", _write(tmp_path, BASE % ("minimal_graph", "INCONSISTENT")),
                    "--out", str(tmp_path)]) == 1


def test_numeric_failure_exit_3(tmp_path, monkeypatch, capsys):
    def boom(*a, **k):
        raise NumericError("quadrature diverged")
    monkeypatch.setattr(cli, "run_scenario", boom)
    assert cli.run(["--suite", _write(tmp_path, BASE % ("minimal_graph", "CONSTANT_FORCED")),
                    "--out", str(tmp_path)]) == 3
    assert "scenario a" in capsys.readouterr().err
    assert json.loads((tmp_path / "report.json").read_text())["a"]["error"] == "numeric"


def test_duplicate_and_unknown_keys(tmp_path):
    dup = BASE % ("minimal_graph", "CONSTANT_FORCED")
    dup += dup.split("scenarios:")[1]
    with pytest.raises(ConfigurationError, match="duplicate"):
        load_suite(_write(tmp_path, dup))
    with pytest.raises(ConfigurationError, match="unknown keys"):
        load_suite(_write(tmp_path, BASE % ("minimal_graph", "X") + "    colour: red\n"))


def test_module_entry_point(tmp_path):
    proc = subprocess.run([sys.executable, "-m", "fharmonic", "--suite", str(SUITE), "--out", str(tmp_path),
                           "--scenario", "bernstein_minimal_graph_m3"], capture_output=True, text=True)
    assert proc.returncode == 0, proc.stderr
    assert "CONSTANT_FORCED" in proc.stdout
