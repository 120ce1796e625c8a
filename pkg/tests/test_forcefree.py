"""Tests for the forcefree module."""

import numpy as np
import pytest

from curllambda.config import Tolerances
from curllambda.domain import Field, FieldKind, Grid, sample
from curllambda.errors import PreconditionError, ZeroWavenumberError
from curllambda.forcefree import (
    Axis,
    beltrami_plane_wave,
    beltrami_shear,
    polarization,
    superpose,
    verify_forcefree,
    verify_forcefree_field,
)


class TestShear:
    """Tests for beltrami_shear."""

    def test_z_profile(self) -> None:
        """u = (sin(lam z), -cos(lam z), 0)."""
        u = beltrami_shear(2.0)
        value = u.vector_values(np.array([[0.3, -0.1, 0.25]]))[0]
        np.testing.assert_allclose(value, [np.sin(0.5), -np.cos(0.5), 0.0])

    @pytest.mark.parametrize("axis", ["x", "y", "z"])
    @pytest.mark.parametrize("lam", [2.0, 1.0 + 0.5j])
    def test_force_free(self, fine_grid: Grid, axis: Axis, lam: complex) -> None:
        """Every rotation passes the verifier."""
        report = verify_forcefree(sample(beltrami_shear(lam, axis, 0.3), fine_grid), lam, 0.02)
        assert report.passed
        assert not report.degenerate

    def test_unknown_axis(self) -> None:
        """Only x, y and z are axes."""
        with pytest.raises(ValueError, match="axis"):
            beltrami_shear(1.0, "w")  # pyright: ignore[reportArgumentType]

    def test_zero_lambda(self) -> None:
        """lambda = 0 gives no Beltrami shear."""
        with pytest.raises(ZeroWavenumberError):
            beltrami_shear(0.0)


class TestPlaneWave:
    """Tests for polarization and beltrami_plane_wave."""

    def test_z_polarization(self) -> None:
        """khat = z gives (1, -i, 0)."""
        np.testing.assert_allclose(polarization([0.0, 0.0, 1.0]), [1.0, -1j, 0.0], atol=1e-12)

    def test_eigenvector(self) -> None:
        """khat x p = i p with |p| = sqrt(2)."""
        k = np.array([1.0, -2.0, 2.0]) / 3.0
        p = polarization(k)
        np.testing.assert_allclose(np.cross(k, p), 1j * p, atol=1e-12)
        assert np.linalg.norm(p) == pytest.approx(np.sqrt(2.0))

    def test_non_unit_rejected(self) -> None:
        """khat must be a unit vector."""
        with pytest.raises(PreconditionError, match="unit"):
            polarization([1.0, 1.0, 0.0])

    def test_force_free(self, fine_grid: Grid) -> None:
        """The plane wave satisfies curl u = -lam u and div u = 0."""
        u = beltrami_plane_wave(2.0, np.array([1.0, -2.0, 2.0]) / 3.0)
        assert verify_forcefree(sample(u, fine_grid), 2.0, 0.02).passed


class TestSuperpose:
    """Tests for superpose."""

    def test_linear_combination(self, fine_grid: Grid) -> None:
        """Combinations of force-free fields with one lambda stay force-free."""
        wave = beltrami_plane_wave(2.0, np.array([0.0, 1.0, 1.0]) / np.sqrt(2.0))
        u = superpose([wave, beltrami_shear(2.0, "x")], [1.0, 0.5j])
        assert verify_forcefree(sample(u, fine_grid), 2.0, 0.02).passed

    def test_default_weights(self) -> None:
        """Weights default to one."""
        a = beltrami_shear(1.0, "z")
        x = np.array([[0.1, 0.2, 0.3]])
        np.testing.assert_allclose(superpose([a, a]).vector_values(x), 2 * a.vector_values(x))

    def test_errors(self) -> None:
        """Empty lists and mismatched weights are rejected."""
        with pytest.raises(ValueError):
            superpose([])
        with pytest.raises(ValueError, match="length"):
            superpose([beltrami_shear(1.0)], [1.0, 2.0])


class TestVerify:
    """Tests for verify_forcefree."""

    def test_wrong_sign_detected(self, fine_grid: Grid) -> None:
        """A field for lam fails the check at -lam."""
        report = verify_forcefree(sample(beltrami_shear(2.0), fine_grid), -2.0, 0.02)
        assert not report.passed
        assert report.curl_residual > 1.0

    def test_divergence_detected(self, fine_grid: Grid) -> None:
        """A pure gradient field fails on the divergence."""
        u = sample(Field.vector(lambda p: p), fine_grid)
        report = verify_forcefree(u, 1.0, 0.02)
        assert report.div_residual > 0.02
        assert not report.passed

    def test_zero_is_degenerate(self, fine_grid: Grid) -> None:
        """The zero field passes but is flagged."""
        report = verify_forcefree(sample(Field.zero(FieldKind.VECTOR), fine_grid), 1.0, 0.02)
        assert report.passed
        assert report.degenerate


class TestVerifyField:
    """Tests for verify_forcefree_field."""

    @pytest.mark.parametrize("axis", ["x", "y", "z"])
    @pytest.mark.parametrize("lam", [2.0, -2.5, 5.0 / 3.0])
    def test_exact_fields_pass_on_coarse_grid(
        self, grid16: Grid, tolerances: Tolerances, axis: Axis, lam: float
    ) -> None:
        """Analytic Beltrami fields pass at n_eval=16 with the default tolerance."""
        u = beltrami_shear(lam, axis)
        report = verify_forcefree_field(u, lam, grid16, tolerances.forcefree)
        assert report.passed, report.curl_residual

    def test_refinement_shrinks_truncation_error(self, grid16: Grid) -> None:
        """Halving the spacing cuts the curl residual about fourfold."""
        u = beltrami_shear(2.5, "z")
        coarse = verify_forcefree(sample(u, grid16), 2.5, 0.02)
        fine = verify_forcefree_field(u, 2.5, grid16, 0.02)
        assert fine.curl_residual < coarse.curl_residual / 3

    def test_wrong_sign_detected(self, grid16: Grid) -> None:
        """Refinement does not hide a wrong wave number."""
        report = verify_forcefree_field(beltrami_shear(2.0), -2.0, grid16, 0.02)
        assert not report.passed
        assert report.curl_residual > 1.0
