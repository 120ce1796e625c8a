"""Helmholtz kernel theta, its gradient, E_{+-lambda} and singular-cell integrals."""

from __future__ import annotations

import math

import numpy as np
from numpy.typing import ArrayLike, NDArray

from .errors import SingularityError
from .quaternion import ComplexArray, embed

# |i lambda r| below this switches closed forms to their Taylor series
_SERIES_CUTOFF = 1e-2


def _radius(x: ArrayLike, kernel: str) -> tuple[NDArray[np.float64], NDArray[np.float64]]:
    arr = np.asarray(x, dtype=np.float64)
    r = np.sqrt(np.sum(arr * arr, axis=-1))
    if np.any(r == 0.0):
        raise SingularityError(kernel)
    return arr, r


def theta(x: ArrayLike, lam: complex) -> ComplexArray:
    """``-exp(i lam |x|) / (4 pi |x|)`` for ``(..., 3)`` points ``x``."""
    _, r = _radius(x, "theta")
    return -np.exp(1j * lam * r) / (4.0 * math.pi * r)


def grad_theta(x: ArrayLike, lam: complex) -> ComplexArray:
    """Gradient of ``theta``: ``theta(x) (i lam x/|x| - x/|x|^2)``."""
    arr, r = _radius(x, "grad_theta")
    th = -np.exp(1j * lam * r) / (4.0 * math.pi * r)
    factor = th * (1j * lam / r - 1.0 / r**2)
    return factor[..., None] * arr


def fundamental_E(x: ArrayLike, lam: complex, sign: int = 1) -> ComplexArray:
    """Fundamental solution ``E_{sign lam} = sign*lam*theta - grad theta`` of ``D + sign*lam``."""
    check_sign(sign)
    return embed(sign * lam * theta(x, lam), -grad_theta(x, lam))


def equal_volume_radius(h: float) -> float:
    """Radius of the ball with the volume of an ``h``-cube."""
    return (3.0 * h**3 / (4.0 * math.pi)) ** (1.0 / 3.0)


def selfcell_theta(r_eq: float, lam: complex) -> complex:
    """Integral of theta over the origin-centered ball of radius ``r_eq``.

    ``(exp(i lam r)(i lam r - 1) + 1) / lam^2``, with ``-r^2/2`` at ``lam = 0``.
    """
    if not r_eq > 0:
        raise ValueError(f"r_eq must be positive, got {r_eq}")
    if lam == 0:
        return complex(-(r_eq**2) / 2.0)
    z = 1j * lam * r_eq
    if abs(z) < _SERIES_CUTOFF:
        # sum_{m>=2} z^m (m-1)/m!, divided by lam^2 = -z^2/r^2
        series = 0.5 + z / 3.0 + z**2 / 8.0 + z**3 / 30.0 + z**4 / 144.0
        return complex(-(r_eq**2) * series)
    return complex((np.exp(z) * (z - 1.0) + 1.0) / lam**2)


def selfcell_gradtheta(r_eq: float, lam: complex) -> ComplexArray:
    """Integral of grad theta over the same ball; zero by odd symmetry."""
    if not r_eq > 0:
        raise ValueError(f"r_eq must be positive, got {r_eq}")
    return np.zeros(3, dtype=np.complex128)


def selfdisk_theta(rho: float, lam: complex) -> complex:
    """Integral of theta over a flat disk of radius ``rho`` centered at the origin.

    ``-(exp(i lam rho) - 1) / (2 i lam)``, with ``-rho/2`` at ``lam = 0``.
    """
    if not rho > 0:
        raise ValueError(f"rho must be positive, got {rho}")
    if lam == 0:
        return complex(-rho / 2.0)
    z = 1j * lam * rho
    if abs(z) < _SERIES_CUTOFF:
        return complex(-(rho / 2.0) * (1.0 + z / 2.0 + z**2 / 6.0 + z**3 / 24.0))
    return complex(-(np.exp(z) - 1.0) / (2j * lam))


def check_sign(sign: int) -> None:
    if sign not in (1, -1):
        raise ValueError(f"sign must be +1 or -1, got {sign}")
