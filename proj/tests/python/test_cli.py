import json
import os
import subprocess
from pathlib import Path

import pytest

CLI = os.environ.get("HDISTLAB_CLI")
CONFIGS = Path(os.environ.get("HDISTLAB_CONFIGS", "configs"))

pytestmark = pytest.mark.skipif(not CLI, reason="HDISTLAB_CLI not set")


def run(*args):
    return subprocess.run([CLI, *args], capture_output=True, text=True)


def test_list_shows_catalogs():
    res = run("list")
    assert res.returncode == 0
    assert "divcurl" in res.stdout
    assert "riesz:K" in res.stdout
    assert "plateau-defect" in res.stdout


def test_run_counterexample(tmp_path):
    out = tmp_path / "run1"
    res = run("run", str(CONFIGS / "counterexample.json"), "--output", str(out))
    assert res.returncode == 0, res.stderr + res.stdout
    assert "counterexample-reproduced" in res.stdout

    report = json.loads((out / "report.json").read_text())
    assert report["schema"] == "hdistlab-report-v1"
    assert report["verdict"] == "counterexample-reproduced"

    csvs = sorted((out / "ladders").glob("*.csv"))
    assert csvs
    header = csvs[0].read_text().splitlines()[0]
    assert header == "r,l,phi,psi,re,im,err"


@pytest.mark.parametrize(
    "config,needle",
    [
        ("divcurl.json", "confirms-equality"),
        ("oscillation.json", "confirms-inequality"),
        ("parabolic.json", "confirms-equality"),
    ],
)
def test_shipped_configs_reach_definite_verdicts(tmp_path, config, needle):
    out = tmp_path / "run"
    res = run("run", str(CONFIGS / config), "--output", str(out))
    assert res.returncode == 0, res.stderr + res.stdout
    assert needle in res.stdout


def test_optimal_variant_mode(tmp_path):
    out = tmp_path / "opt"
    res = run("run", str(CONFIGS / "counterexample-optimal.json"), "--output", str(out))
    assert res.returncode == 0, res.stderr + res.stdout
    report = json.loads((out / "report.json").read_text())
    assert report["kind"] == "optimal-variant"
    assert report["rows"]


def test_reports_are_byte_deterministic(tmp_path):
    a = tmp_path / "a"
    b = tmp_path / "b"
    assert run("run", str(CONFIGS / "counterexample.json"), "--output", str(a)).returncode == 0
    assert run("run", str(CONFIGS / "counterexample.json"), "--output", str(b)).returncode == 0
    assert (a / "report.json").read_bytes() == (b / "report.json").read_bytes()


def test_malformed_configs_exit_one(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{ not json")
    res = run("run", str(bad))
    assert res.returncode == 1
    assert "error" in res.stderr.lower()

    wrong = tmp_path / "wrong.json"
    wrong.write_text(
        json.dumps(
            {"schema": "hdistlab-config-v1", "experiment": "nope", "schedule": [8]}
        )
    )
    res = run("run", str(wrong))
    assert res.returncode == 1


def test_verify_filtered():
    res = run("verify", "--filter", "projection")
    assert res.returncode == 0
    assert "[PASS] projection-invariants" in res.stdout
