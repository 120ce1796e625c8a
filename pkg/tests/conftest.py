"""Shared fixtures: voxel domains and evaluation grids are costly to rebuild."""

import pytest

from curllambda.config import Tolerances
from curllambda.domain import Ball, Box, Grid, VoxelDomain, build_domain, interior_eval_grid


@pytest.fixture(scope="session")
def tolerances() -> Tolerances:
    """The default calibration table."""
    return Tolerances()


@pytest.fixture(scope="session")
def ball16() -> VoxelDomain:
    """Unit ball with 16 cells per axis."""
    return build_domain(Ball(1.0), 16)


@pytest.fixture(scope="session")
def grid16(ball16: VoxelDomain) -> Grid:
    """Interior evaluation grid of the unit ball, n_eval=16, margin 2."""
    return interior_eval_grid(ball16, 16, 2)


@pytest.fixture(scope="session")
def fine_grid(ball16: VoxelDomain) -> Grid:
    """Evaluation grid with h = 1/16 for finite-difference checks of analytic fields."""
    return interior_eval_grid(ball16, 32, 2)


@pytest.fixture(scope="session")
def cube_grid() -> Grid:
    """Full 20^3 lattice on [-1, 1]^3."""
    return build_domain(Box((-1.0, -1.0, -1.0), (1.0, 1.0, 1.0)), 20).grid


@pytest.fixture(scope="session")
def ball32() -> VoxelDomain:
    """Unit ball with 32 cells per axis."""
    return build_domain(Ball(1.0), 32)


@pytest.fixture(scope="session")
def ball32_grid(ball32: VoxelDomain) -> Grid:
    """Interior evaluation grid of the 32-cell ball, n_eval=16, margin 2."""
    return interior_eval_grid(ball32, 16, 2)
