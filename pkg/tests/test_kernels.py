"""Tests for the kernels module."""

import math

import numpy as np
import pytest
from scipy import integrate

from curllambda.errors import SingularityError
from curllambda.kernels import (
    equal_volume_radius,
    fundamental_E,
    grad_theta,
    selfcell_gradtheta,
    selfcell_theta,
    selfdisk_theta,
    theta,
)


class TestTheta:
    """Tests for theta and its gradient."""

    def test_closed_form(self) -> None:
        """theta(x) = -exp(i lam r) / (4 pi r)."""
        x = np.array([0.0, 3.0, 4.0])
        expected = -np.exp(2j * 5.0) / (4 * math.pi * 5.0)
        assert complex(theta(x, 2.0)) == pytest.approx(expected)

    def test_laplace_limit(self) -> None:
        """At lam = 0 theta is the Laplace kernel -1/(4 pi r)."""
        x = np.array([[0.5, 0.0, 0.0]])
        assert theta(x, 0.0)[0] == pytest.approx(-1 / (2 * math.pi))

    def test_decays_for_positive_imaginary_part(self) -> None:
        """Im lam > 0 gives exponential decay on top of 1/r."""
        lam = 1.0 + 0.5j
        near = abs(complex(theta(np.array([1.0, 0.0, 0.0]), lam)))
        far = abs(complex(theta(np.array([2.0, 0.0, 0.0]), lam)))
        assert far / near == pytest.approx(0.5 * math.exp(-0.5))

    def test_gradient_matches_differences(self) -> None:
        """grad_theta agrees with central differences of theta."""
        x = np.array([0.3, -0.2, 0.5])
        lam = 1.0 + 0.5j
        step = 1e-5
        fd = np.array(
            [
                complex(theta(x + step * d, lam) - theta(x - step * d, lam)) / (2 * step)
                for d in np.eye(3)
            ]
        )
        np.testing.assert_allclose(grad_theta(x, lam), fd, rtol=1e-7)

    def test_gradient_is_odd(self) -> None:
        """grad theta(-x) = -grad theta(x)."""
        x = np.array([[0.1, 0.7, -0.4], [1.0, 2.0, 3.0]])
        np.testing.assert_allclose(grad_theta(-x, 2.0), -grad_theta(x, 2.0))

    def test_origin_is_singular(self) -> None:
        """Both kernels refuse x = 0."""
        with pytest.raises(SingularityError, match="self-cell"):
            theta(np.zeros(3), 1.0)
        with pytest.raises(SingularityError):
            grad_theta(np.array([[1.0, 0, 0], [0, 0, 0]]), 1.0)


class TestFundamentalE:
    """Tests for E_{+-lam}."""

    def test_components(self) -> None:
        """E = sign lam theta - grad theta."""
        x = np.array([[0.4, -0.1, 0.2]])
        lam = 1.5
        for sign in (1, -1):
            e = fundamental_E(x, lam, sign)
            np.testing.assert_allclose(e[:, 0], sign * lam * theta(x, lam))
            np.testing.assert_allclose(e[:, 1:], -grad_theta(x, lam))

    def test_bad_sign(self) -> None:
        """Only +1 and -1 are accepted."""
        with pytest.raises(ValueError, match="sign"):
            fundamental_E(np.ones(3), 1.0, 2)


class TestSelfCell:
    """Tests for the singular-cell integrals."""

    def test_laplace_value(self) -> None:
        """The unit-ball integral of theta at lam = 0 is -1/2."""
        assert selfcell_theta(1.0, 0.0) == pytest.approx(-0.5)

    def test_matches_quadrature(self) -> None:
        """The closed form equals -int_0^r s exp(i lam s) ds."""
        r, lam = 0.1, 1.0
        re = integrate.quad(lambda s: -s * np.cos(lam * s), 0.0, r, epsabs=1e-14)[0]
        im = integrate.quad(lambda s: -s * np.sin(lam * s), 0.0, r, epsabs=1e-14)[0]
        assert selfcell_theta(r, lam) == pytest.approx(complex(re, im), abs=1e-12)

    def test_series_joins_closed_form(self) -> None:
        """The small-argument series and the closed form agree at the switch-over."""
        r = 0.1
        below = selfcell_theta(r, 0.0999)
        above = selfcell_theta(r, 0.1001)
        assert below == pytest.approx(above, rel=1e-3)
        assert selfcell_theta(r, 1e-6) == pytest.approx(-(r**2) / 2, rel=1e-5)

    def test_small_cell_limit(self) -> None:
        """For small lam r the integral behaves like -r^2/2 even at complex lam."""
        r = 0.2
        assert selfcell_theta(r, 0.1 + 0.05j) == pytest.approx(-0.02, rel=0.05)

    def test_gradient_vanishes(self) -> None:
        """grad theta integrates to zero over a centered ball."""
        np.testing.assert_array_equal(selfcell_gradtheta(0.3, 2.0), np.zeros(3))

    def test_equal_volume_radius(self) -> None:
        """The ball has the cell's volume."""
        h = 0.1
        r = equal_volume_radius(h)
        assert 4 * math.pi * r**3 / 3 == pytest.approx(h**3)

    def test_disk_limit(self) -> None:
        """The disk integral is -rho/2 at lam = 0 and continuous in lam."""
        assert selfdisk_theta(0.4, 0.0) == pytest.approx(-0.2)
        assert selfdisk_theta(0.4, 1e-4) == pytest.approx(-0.2, rel=1e-3)
        z = 2j * 0.4
        assert selfdisk_theta(0.4, 2.0) == pytest.approx(-(np.exp(z) - 1) / 4j)

    def test_rejects_nonpositive_radius(self) -> None:
        """Radii must be positive."""
        with pytest.raises(ValueError):
            selfcell_theta(0.0, 1.0)
        with pytest.raises(ValueError):
            selfdisk_theta(-1.0, 1.0)
