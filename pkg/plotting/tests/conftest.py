"""Shared fixtures: real CSVs produced by the simulator's own command line.

The plotting package is tested strictly against the simulator's public
surface, so every input here comes out of `polarsim run` in a subprocess.
"""

import subprocess
import sys

import pytest

EXPERIMENT_IDS = [
    "fig4_convergence",
    "fig5_dpa",
    "fig6_single_sided",
    "fig7_rate_vs_snr",
    "fig8_antennas",
    "fig9_xpd",
    "fig10_xpi",
    "fig11_correlation",
]


def run_simulator(experiment_id, out_dir, realizations=5):
    cmd = [
        sys.executable,
        "-m",
        "polarsim.cli",
        "run",
        experiment_id,
        "--out",
        str(out_dir),
        "--seed",
        "7",
        "--realizations",
        str(realizations),
        "--override",
        "restarts=1",
    ]
    proc = subprocess.run(cmd, capture_output=True, text=True)
    assert proc.returncode == 0, proc.stderr
    return out_dir / f"{experiment_id}.csv"


@pytest.fixture(scope="session")
def csv_dir(tmp_path_factory):
    out = tmp_path_factory.mktemp("csvs")
    for experiment_id in EXPERIMENT_IDS:
        run_simulator(experiment_id, out)
    return out
