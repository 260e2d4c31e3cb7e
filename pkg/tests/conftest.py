import time

import pytest

from hodgkin import cli

_RUNS: dict = {}
_WALL: dict = {}


def _build(name: str) -> cli.PipelineRun:
    if name not in _RUNS:
        t0 = time.perf_counter()
        run = cli.run_pipeline(name)
        _WALL[name] = time.perf_counter() - t0
        assert run.failure is None, f"pipeline failed for {name}: {run.failure}"
        _RUNS[name] = run
    return _RUNS[name]


@pytest.fixture(scope="session")
def pipeline():
    """Memoized full pipeline runs, shared across the whole session."""
    return _build


@pytest.fixture(scope="session")
def wall_times():
    """Cold build time in seconds for every type built via ``pipeline``."""
    return _WALL
