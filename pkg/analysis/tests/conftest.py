"""Fixture artifacts produced by the simulator's own CLI.

The analysis package consumes files only, so the fixtures cross the same
boundary: one subprocess invocation of the simulator writes a comparison
directory (with per-policy run dirs inside), and the tests read from it.
"""

from __future__ import annotations

import subprocess

import pytest

POLICIES = ("static", "dns", "context", "semantic")


def _run(cmd, cwd):
    proc = subprocess.run(cmd, cwd=cwd, capture_output=True, text=True)
    assert proc.returncode == 0, proc.stderr
    return proc


@pytest.fixture(scope="session")
def comparison_dir(tmp_path_factory):
    root = tmp_path_factory.mktemp("artifacts")
    scenario = root / "scenario.json"
    _run(["semslice", "generate", "--ues", "3", "--duration", "100",
          "--t-accident", "30", "--seed", "7", "--out", str(scenario)], root)
    out = root / "cmp"
    _run(["semslice", "compare", "--scenario", str(scenario),
          "--out", str(out)], root)
    return out


@pytest.fixture(scope="session")
def semantic_run_dir(comparison_dir):
    return comparison_dir / "semantic"


@pytest.fixture(scope="session")
def static_run_dir(comparison_dir):
    return comparison_dir / "static"
