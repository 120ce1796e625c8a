"""Tests for the domain module."""

import math

import numpy as np
import pytest

from curllambda.domain import (
    Ball,
    Box,
    Ellipsoid,
    Field,
    FieldKind,
    FieldSample,
    Grid,
    VoxelDomain,
    build_domain,
    interior_eval_grid,
    sample,
)
from curllambda.errors import DomainError, EmptyGridError, PreconditionError


class TestShapes:
    """Tests for Ball, Box and Ellipsoid."""

    def test_invalid_parameters(self) -> None:
        """Degenerate shapes raise DomainError."""
        with pytest.raises(DomainError):
            Ball(0.0)
        with pytest.raises(DomainError):
            Box((0, 0, 0), (1, 0, 1))
        with pytest.raises(DomainError):
            Ellipsoid((1.0, -1.0, 1.0))

    def test_ball_depth_is_distance(self) -> None:
        """Ball depth is the exact distance to the sphere."""
        ball = Ball(2.0, (1.0, 0.0, 0.0))
        assert ball.depth(np.array([[1.0, 0.5, 0.0]]))[0] == pytest.approx(1.5)

    def test_ellipsoid_depth_is_lower_bound(self) -> None:
        """Ellipsoid depth never exceeds the true distance along the short axis."""
        e = Ellipsoid((2.0, 1.0, 1.0))
        depth = e.depth(np.array([[0.0, 0.5, 0.0]]))[0]
        assert depth <= 0.5 + 1e-12
        assert depth > 0

    def test_ellipsoid_volume(self) -> None:
        """Ellipsoid volume is 4 pi abc / 3."""
        assert Ellipsoid((1.0, 2.0, 3.0)).volume == pytest.approx(8 * math.pi)


class TestBuildDomain:
    """Tests for build_domain."""

    def test_ball_volume_converges(self) -> None:
        """The voxel volume of the unit ball is within 5% at n=16."""
        domain = build_domain(Ball(1.0), 16)
        assert domain.volume == pytest.approx(4 * math.pi / 3, rel=0.05)

    def test_cube_is_filled(self) -> None:
        """Every cell of a box's bounding cube lies inside a cube domain."""
        domain = build_domain(Box((-1, -1, -1), (1, 1, 1)), 8)
        assert domain.size == 512
        assert domain.h == pytest.approx(0.25)
        assert domain.volume == pytest.approx(8.0)

    def test_centers_in_c_order(self) -> None:
        """Centers come out in lexicographic index order."""
        domain = build_domain(Ball(1.0), 8)
        assert np.all(np.diff(domain.grid.linear) > 0)

    def test_too_coarse(self) -> None:
        """n below 4 is rejected."""
        with pytest.raises(DomainError, match="at least 4"):
            build_domain(Ball(1.0), 3)

    def test_ellipsoid_inside(self) -> None:
        """All ellipsoid cells are inside the ellipsoid."""
        shape = Ellipsoid((1.0, 0.5, 0.5))
        domain = build_domain(shape, 12)
        assert np.all(shape.contains(domain.centers))


class TestInteriorEvalGrid:
    """Tests for interior_eval_grid."""

    def test_margin_respected(self, ball16: VoxelDomain) -> None:
        """Every kept point is (margin + 1) eval cells inside."""
        grid = interior_eval_grid(ball16, 16, 2)
        assert np.all(Ball(1.0).depth(grid.points) >= 3 * grid.h - 1e-12)

    def test_margin_must_be_positive(self, ball16: VoxelDomain) -> None:
        """margin 0 leaves no room for the stencil."""
        with pytest.raises(PreconditionError, match="margin"):
            interior_eval_grid(ball16, 16, 0)

    def test_empty_grid(self, ball16: VoxelDomain) -> None:
        """A margin that swallows the domain raises EmptyGridError."""
        with pytest.raises(EmptyGridError, match="refine"):
            interior_eval_grid(ball16, 6, 3)

    def test_refined_splits_cells(self, grid16: Grid) -> None:
        """Each cell becomes eight whose centers average to the parent center."""
        fine = grid16.refined(2)
        assert fine.size == 8 * grid16.size
        assert fine.h == pytest.approx(grid16.h / 2)
        parents = fine.index // 2
        np.testing.assert_array_equal(np.unique(parents, axis=0), grid16.index)
        np.testing.assert_allclose(fine.points.mean(axis=0), grid16.points.mean(axis=0))


class TestFieldSample:
    """Tests for FieldSample alignment and arithmetic."""

    def test_kind_layout_enforced(self) -> None:
        """A scalar sample may not carry vector parts."""
        values = np.zeros((2, 4), dtype=complex)
        values[0, 1] = 1.0
        with pytest.raises(ValueError, match="scalar"):
            FieldSample(np.zeros((2, 3)), values, FieldKind.SCALAR)

    def test_restrict_to_subgrid(self, cube_grid: Grid) -> None:
        """Restricting to a sub-grid picks values by lattice index."""
        f = sample(Field.scalar(lambda p: p[:, 0]), cube_grid)
        sub = cube_grid.subset(cube_grid.points[:, 1] > 0.5)
        r = f.restrict(sub)
        np.testing.assert_allclose(r.scalar, sub.points[:, 0])

    def test_addition_aligns(self, cube_grid: Grid) -> None:
        """Adding samples on nested grids works on the common points."""
        f = sample(Field.scalar(lambda p: p[:, 0]), cube_grid)
        sub = cube_grid.subset(cube_grid.points[:, 2] < 0.0)
        g = sample(Field.vector(lambda p: p), sub)
        total = f + g
        assert len(total) == sub.size
        assert total.kind is FieldKind.FULL
        np.testing.assert_allclose(total.scalar, sub.points[:, 0])

    def test_misaligned_rejected(self, cube_grid: Grid) -> None:
        """Samples on different lattices cannot be combined."""
        other = build_domain(Box((-1, -1, -1), (1, 1, 1)), 10).grid
        a = sample(Field.scalar(lambda p: p[:, 0]), cube_grid)
        b = sample(Field.scalar(lambda p: p[:, 0]), other)
        with pytest.raises(ValueError, match="lattice"):
            _ = a + b

    def test_scaling(self, cube_grid: Grid) -> None:
        """Samples scale by complex numbers and per-point arrays."""
        f = sample(Field.vector(lambda p: p), cube_grid)
        np.testing.assert_allclose((f * 2j).vector, 2j * cube_grid.points)
        weights = np.arange(len(f), dtype=float)
        np.testing.assert_allclose((f * weights).vector, weights[:, None] * cube_grid.points)
        np.testing.assert_allclose((f / 2).vector, cube_grid.points / 2)

    def test_same_kind_arithmetic(self, cube_grid: Grid) -> None:
        """Scalar and vector samples keep their kind under + - * / and negation."""
        s = sample(Field.scalar(lambda p: p[:, 0] + 1j), cube_grid)
        v = sample(Field.vector(lambda p: p), cube_grid)

        for result in (s + s, s - s * 0.5, -s, s / 2j):
            assert result.kind is FieldKind.SCALAR
            np.testing.assert_array_equal(result.vector, 0.0)
        for result in (v + v, v - v * 2, -v, v / 3):
            assert result.kind is FieldKind.VECTOR
            np.testing.assert_array_equal(result.scalar, 0.0)
        np.testing.assert_allclose((v - v * 2).vector, -cube_grid.points)
        np.testing.assert_allclose((s + s).scalar, 2 * (cube_grid.points[:, 0] + 1j))

    def test_with_values_layouts(self, cube_grid: Grid) -> None:
        """with_values takes the kind's own layout or the full one."""
        v = sample(Field.vector(lambda p: p), cube_grid)
        own = v.with_values(2 * cube_grid.points)
        full = v.with_values(2 * v.values)
        np.testing.assert_array_equal(own.values, full.values)
        scalar = v.with_values(np.ones(len(v)), FieldKind.SCALAR)
        assert scalar.kind is FieldKind.SCALAR
        np.testing.assert_array_equal(scalar.scalar, 1.0)


class TestField:
    """Tests for analytic and interpolated fields."""

    def test_sum_of_kinds(self) -> None:
        """scalar + vector is a full field."""
        f = Field.scalar(lambda p: np.ones(len(p))) + Field.vector(lambda p: p)
        assert f.kind is FieldKind.FULL
        np.testing.assert_allclose(f(np.array([[1.0, 2.0, 3.0]])), [[1, 1, 2, 3]])

    def test_modulated(self) -> None:
        """modulated multiplies pointwise by a scalar function."""
        f = Field.vector(lambda p: p).modulated(lambda p: p[:, 0])
        np.testing.assert_allclose(f.vector_values(np.array([[2.0, 1.0, 0.0]])), [[4, 2, 0]])

    def test_zero(self) -> None:
        """Field.zero evaluates to zeros of its kind."""
        z = Field.zero(FieldKind.SCALAR)
        assert z(np.zeros((3, 3))).shape == (3, 4)
        assert not np.any(z(np.zeros((3, 3))))

    def test_from_sample_reproduces_linear_fields(self, cube_grid: Grid) -> None:
        """Interpolation is exact for linear fields inside the hull."""
        f = Field.vector(lambda p: p @ np.array([[1.0, 2, 0], [0, 1, 0], [3, 0, 1]]).T)
        interp = Field.from_sample(sample(f, cube_grid))
        x = np.array([[0.1, -0.2, 0.33], [0.5, 0.5, -0.5]])
        np.testing.assert_allclose(interp(x), f(x), atol=1e-10)

    def test_from_sample_outside_hull(self, cube_grid: Grid) -> None:
        """Outside the hull the nearest sample value is used."""
        interp = Field.from_sample(sample(Field.scalar(lambda p: p[:, 0]), cube_grid))
        value = interp.scalar_values(np.array([[5.0, 0.0, 0.0]]))
        assert value[0] == pytest.approx(cube_grid.points[:, 0].max())
