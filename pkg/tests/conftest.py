"""Shared fixtures: the generated default scenario and its policy runs."""

from __future__ import annotations

import pytest

from semslice import GeneratorParams, PolicyKind, generate_first_responder, run


@pytest.fixture(scope="session")
def default_scenario():
    return generate_first_responder(GeneratorParams())


@pytest.fixture(scope="session")
def default_runs(default_scenario):
    """One report per policy; run() is pure, so sharing across tests is safe."""
    return {kind: run(default_scenario, kind) for kind in PolicyKind}
