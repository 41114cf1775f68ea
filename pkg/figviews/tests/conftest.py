"""Fixtures produce real sweep CSVs through the simulator's public CLI, the
only interface figviews consumes."""

import subprocess

import pytest

from cli_helpers import TINY_CONFIG, polarsim_cmd


@pytest.fixture(scope="session")
def sweep_dir(tmp_path_factory):
    root = tmp_path_factory.mktemp("tiny_sweep")
    cfg = root / "config.yaml"
    cfg.write_text(TINY_CONFIG)
    out = root / "out"
    subprocess.run([*polarsim_cmd(), "sweep", "--config", str(cfg),
                    "--out-dir", str(out), "--threads", "2"], check=True,
                   capture_output=True, text=True)
    return out
