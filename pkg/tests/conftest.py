"""Shared test setup: warm the jitted kernels once per session.

First use of a numba kernel pays compilation (or cache load); doing it here
keeps that cost out of the timed acceptance criteria.
"""

import pytest

from cubeboot.cube import CubeSpec, VertexSet
from cubeboot.engine import step


@pytest.fixture(scope="session", autouse=True)
def _warm_kernels():
    step(CubeSpec(6, 1), VertexSet.from_codes(6, [0]), 2)
    step(CubeSpec(6, 2), VertexSet.from_codes(6, [0]), 2)
