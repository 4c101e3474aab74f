"""End-to-end smoke against real simulator output.

Prefers the sweep CSV left in ../artifacts by the simulator's acceptance
run; otherwise generates fresh files through the `hyperdec` command line.
Only the documented file formats cross the package boundary.
"""

import csv
import shutil
import subprocess
import sys
from pathlib import Path

import pytest

from hyperdec_plots.figures import plot_decay, plot_threshold

ARTIFACT_CSV = Path(__file__).resolve().parents[2] / "artifacts" / "a7_sweep.csv"


def simulator_available() -> bool:
    return shutil.which("hyperdec") is not None


def run_simulator(args: list[str]) -> None:
    subprocess.run(["hyperdec", *args], check=True, timeout=600,
                   stdout=subprocess.DEVNULL, stderr=subprocess.DEVNULL)


@pytest.fixture(scope="module")
def sweep_csv(tmp_path_factory) -> Path:
    if ARTIFACT_CSV.exists():
        return ARTIFACT_CSV
    if not simulator_available():
        pytest.skip("no sweep artifact and no simulator CLI on PATH")
    path = tmp_path_factory.mktemp("smoke") / "sweep.csv"
    run_simulator(["sweep", "--dim", "3", "--Ls", "3",
                   "--ps", "0.005,0.02", "--tau", "4", "--trials", "10",
                   "--seed", "11", "--out", str(path)])
    return path


def distinct_L(path: Path) -> int:
    with open(path, newline="") as fh:
        rows = [r for r in csv.reader(fh) if r and not r[0].startswith("#")]
    header = rows[0]
    i = header.index("L")
    return len({r[i] for r in rows[1:]})


def test_threshold_from_real_sweep(sweep_csv, tmp_path):
    res = plot_threshold([sweep_csv], tmp_path / "threshold.png")
    assert res.curves == distinct_L(sweep_csv)
    assert len(res.paths) == 2
    for p in res.paths:
        assert p.stat().st_size > 0


@pytest.mark.skipif(not simulator_available(),
                    reason="simulator CLI not on PATH")
def test_decay_from_real_weights(tmp_path):
    weights = tmp_path / "weights.csv"
    # noise heavy enough that the weight trace spans several rounds
    run_simulator(["memory-sim", "--dim", "3", "--L", "3", "--tau", "6",
                   "--p", "0.3", "--q", "0.3", "--trials", "5",
                   "--seed", "3", "--weights-out", str(weights)])
    assert weights.exists()
    res = plot_decay(weights, tmp_path / "decay.png")
    assert res.curves == 1
    assert res.ratio is not None
    for p in res.paths:
        assert p.stat().st_size > 0


def test_cli_runs_as_module(write_sweep, tmp_path):
    path = write_sweep([
        {"L": "3", "p": "0.01", "q": "0.01", "r_dec": "2",
         "scheme": "deterministic", "trials": "50", "successes": "49",
         "logical_failures": "1", "timeouts": "0", "mean_rounds": "1.2",
         "mean_max_component": "1.5", "wall_ms": "0", "seed": "1"},
    ])
    proc = subprocess.run(
        [sys.executable, "-m", "hyperdec_plots.cli", "threshold", str(path),
         "--out", str(tmp_path / "t.png")],
        capture_output=True, text=True, timeout=120)
    assert proc.returncode == 0, proc.stderr
    assert (tmp_path / "t.svg").exists()
