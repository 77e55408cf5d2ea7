"""Shared fixtures: sampled waves are expensive, so build them once per session."""

import pytest

from vwave import AtomSpec, build_series
from vwave.wronskian import make_radial_grid, sample_wave


@pytest.fixture(scope="session")
def solutions():
    return {n: build_series(AtomSpec(1, n)) for n in (1, 2, 3)}


@pytest.fixture(scope="session")
def waves(solutions):
    return {
        n: sample_wave(sol, make_radial_grid(sol)) for n, sol in solutions.items()
    }
