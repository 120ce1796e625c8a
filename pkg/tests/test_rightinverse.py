"""Tests for the rightinverse module."""

import numpy as np
import pytest

from curllambda.config import Tolerances
from curllambda.domain import Field, Grid, VoxelDomain, sample
from curllambda.errors import ForceFreeError, ZeroWavenumberError
from curllambda.fielddiff import div_fd, relative_l2
from curllambda.forcefree import beltrami_shear
from curllambda.rightinverse import (
    compatibility_scalar,
    curl_residual,
    gauge_residual,
    gauge_solve,
    general_solution,
    r_lambda,
    r_lambda_alt,
    r_lambda_normal_trace,
)
from curllambda.sources import trig


@pytest.fixture(scope="module")
def g() -> Field:
    """Smooth right-hand side with nonzero divergence."""
    return trig(1.0)


class TestRLambda:
    """Tests for r_lambda and r_lambda_alt."""

    @pytest.mark.parametrize("lam", [2.0, 1.0 + 0.5j])
    def test_solves_curl_equation(
        self, ball16: VoxelDomain, grid16: Grid, tolerances: Tolerances, g: Field, lam: complex
    ) -> None:
        """(curl + lam) R[g] = g."""
        w = r_lambda(ball16, g, lam, grid16)
        assert curl_residual(w, g, lam) < tolerances.right_inverse

    def test_divergence(
        self, ball16: VoxelDomain, grid16: Grid, tolerances: Tolerances, g: Field
    ) -> None:
        """div R[g] = div g / lam."""
        lam = 2.0
        w = r_lambda(ball16, g, lam, grid16)
        div_w = div_fd(w)
        div_g = div_fd(sample(g, grid16)) / lam
        assert relative_l2(div_w - div_g, div_g) < tolerances.right_inverse

    def test_minus_sign(
        self, ball16: VoxelDomain, grid16: Grid, tolerances: Tolerances, g: Field
    ) -> None:
        """sign=-1 inverts curl - lam."""
        w = r_lambda(ball16, g, 2.0, grid16, -1)
        assert curl_residual(w, g, -2.0) < tolerances.right_inverse

    def test_kernel_form_agrees(
        self, ball16: VoxelDomain, grid16: Grid, tolerances: Tolerances, g: Field
    ) -> None:
        """The grad-div form gives the same field."""
        w = r_lambda(ball16, g, 2.0, grid16)
        alt = r_lambda_alt(ball16, g, 2.0, grid16)
        assert relative_l2(alt - w, w) < tolerances.right_inverse

    def test_zero_lambda(self, ball16: VoxelDomain, grid16: Grid, g: Field) -> None:
        """lambda = 0 is refused before any quadrature."""
        with pytest.raises(ZeroWavenumberError, match="lambda != 0"):
            r_lambda(ball16, g, 0.0, grid16)
        with pytest.raises(ZeroWavenumberError):
            r_lambda_alt(ball16, g, 0, grid16)

    def test_normal_trace_matches_grid(self, ball16: VoxelDomain, grid16: Grid, g: Field) -> None:
        """The pointwise normal trace equals R[g].n on grid points."""
        w = r_lambda(ball16, g, 2.0, grid16)
        points = w.points[:5]
        normals = np.tile(np.array([1.0, 2.0, 2.0]) / 3.0, (5, 1))
        trace = r_lambda_normal_trace(ball16, g, 2.0, points, normals, step=grid16.h)
        expected = np.sum(w.vector[:5] * normals, axis=1)
        np.testing.assert_allclose(trace, expected, rtol=1e-8, atol=1e-10)


class TestGeneralSolution:
    """Tests for general_solution and compatibility_scalar."""

    def test_adds_force_free_field(
        self, ball16: VoxelDomain, grid16: Grid, tolerances: Tolerances, g: Field
    ) -> None:
        """R[g] + u still solves the equation."""
        w = general_solution(ball16, g, 2.0, grid16, beltrami_shear(2.0, "y"))
        assert curl_residual(w, g, 2.0) < tolerances.right_inverse

    def test_rejects_non_force_free(self, ball16: VoxelDomain, grid16: Grid, g: Field) -> None:
        """A u that is not force-free is refused."""
        with pytest.raises(ForceFreeError, match="'u'"):
            general_solution(ball16, g, 2.0, grid16, trig(1.0))

    def test_compatibility_scalar(self, grid16: Grid, g: Field) -> None:
        """div g + lam g0 = 0 for the returned g0."""
        gs = sample(g, grid16)
        g0 = compatibility_scalar(gs, 2.0)
        defect = div_fd(gs) + g0 * 2.0
        assert defect.norm() < 1e-12 * div_fd(gs).norm()

    def test_compatibility_scalar_zero_lambda(self, grid16: Grid, g: Field) -> None:
        """compatibility_scalar needs lambda != 0."""
        with pytest.raises(ZeroWavenumberError):
            compatibility_scalar(sample(g, grid16), 0.0)


class TestGauge:
    """Tests for gauge_solve."""

    def test_gauge_equation(
        self, ball16: VoxelDomain, grid16: Grid, tolerances: Tolerances, g: Field
    ) -> None:
        """curl v + lam v + grad(phi) x v = h."""
        phi = Field.scalar(lambda p: 0.3 * p[:, 0] - 0.2 * p[:, 1] * p[:, 2])
        v = gauge_solve(ball16, g, phi, 2.0, grid16)
        assert gauge_residual(v, g, phi, 2.0) < tolerances.gauge

    def test_zero_phi_is_r_lambda(self, ball16: VoxelDomain, grid16: Grid, g: Field) -> None:
        """phi = 0 reduces to R[h]."""
        zero = Field.scalar(lambda p: np.zeros(len(p)))
        v = gauge_solve(ball16, g, zero, 2.0, grid16)
        w = r_lambda(ball16, g, 2.0, grid16)
        np.testing.assert_allclose(v.vector, w.vector, rtol=1e-10, atol=1e-12)
