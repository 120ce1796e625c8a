"""Analytic force-free (Beltrami) fields and a finite-difference verifier."""

from __future__ import annotations

import logging
from collections.abc import Sequence
from dataclasses import dataclass
from typing import Literal

import numpy as np
from numpy.typing import ArrayLike

from .domain import Field, FieldSample, FloatArray, Grid, sample
from .errors import PreconditionError, ZeroWavenumberError
from .fielddiff import curl_fd, div_fd, relative_l2
from .quaternion import ComplexArray

logger = logging.getLogger(__name__)

Axis = Literal["x", "y", "z"]

# (coordinate the profile depends on, component carrying sin, component carrying -cos)
_SHEAR_LAYOUT: dict[str, tuple[int, int, int]] = {"z": (2, 0, 1), "x": (0, 1, 2), "y": (1, 2, 0)}


def beltrami_shear(lam: complex, axis: Axis = "z", phase: float = 0.0) -> Field:
    """Shear field with ``curl u = -lam u``.

    For ``axis="z"``: ``u = (sin(lam z + phase), -cos(lam z + phase), 0)``;
    ``x`` and ``y`` are the cyclic rotations of that profile.
    """
    if lam == 0:
        raise ZeroWavenumberError("beltrami_shear")
    if axis not in _SHEAR_LAYOUT:
        raise ValueError(f"axis must be one of x, y, z, got {axis!r}")
    coord, i_sin, i_cos = _SHEAR_LAYOUT[axis]

    def func(p: FloatArray) -> ComplexArray:
        s = lam * p[:, coord] + phase
        out = np.zeros((p.shape[0], 3), dtype=np.complex128)
        out[:, i_sin] = np.sin(s)
        out[:, i_cos] = -np.cos(s)
        return out

    return Field.vector(func, name=f"beltrami-shear-{axis}")


def polarization(khat: ArrayLike) -> ComplexArray:
    """Vector ``p`` with ``khat x p = i p``, normalized to ``|p| = sqrt(2)``.

    The phase makes the first component of magnitude above half the largest
    one real and positive, so ``khat = z`` gives ``(1, -i, 0)``.
    """
    k = np.asarray(khat, dtype=np.float64)
    if k.shape != (3,) or not np.isclose(np.linalg.norm(k), 1.0, atol=1e-12):
        raise PreconditionError(f"khat must be a real unit 3-vector, got {khat!r}")
    cross = np.array([[0.0, -k[2], k[1]], [k[2], 0.0, -k[0]], [-k[1], k[0], 0.0]])
    eigvals, eigvecs = np.linalg.eig(cross)
    best = int(np.argmin(np.abs(eigvals - 1j)))
    if abs(eigvals[best] - 1j) > 1e-8:
        raise PreconditionError(f"no circular polarization found for khat={khat!r}")
    p = eigvecs[:, best].astype(np.complex128)
    mags = np.abs(p)
    lead = int(np.argmax(mags > 0.5 * mags.max()))
    p = p * (abs(p[lead]) / p[lead])
    return p * (np.sqrt(2.0) / np.linalg.norm(p))


def beltrami_plane_wave(lam: complex, khat: ArrayLike = (0.0, 0.0, 1.0)) -> Field:
    """Circularly polarized ``u = p exp(i lam khat.x)`` with ``curl u = -lam u``."""
    if lam == 0:
        raise ZeroWavenumberError("beltrami_plane_wave")
    k = np.asarray(khat, dtype=np.float64)
    p = polarization(k)

    def func(x: FloatArray) -> ComplexArray:
        return np.exp(1j * lam * (x @ k))[:, None] * p[None, :]

    return Field.vector(func, name="beltrami-plane-wave")


def superpose(fields: Sequence[Field], weights: Sequence[complex] | None = None) -> Field:
    """Linear combination of vector fields (unit weights by default)."""
    if not fields:
        raise ValueError("superpose needs at least one field")
    coeffs = list(weights) if weights is not None else [1.0] * len(fields)
    if len(coeffs) != len(fields):
        raise ValueError("weights and fields differ in length")
    total = fields[0].scaled(coeffs[0])
    for f, c in zip(fields[1:], coeffs[1:], strict=True):
        total = total + f.scaled(c)
    return total


@dataclass(frozen=True)
class ForceFreeReport:
    """Relative residuals of ``curl u + lam u = 0`` and ``div u = 0``."""

    curl_residual: float
    div_residual: float
    tol: float
    passed: bool
    degenerate: bool = False


def verify_forcefree(u: FieldSample, lam: complex, tol: float) -> ForceFreeReport:
    """Check a gridded sample for force-freeness by central differences.

    Both residuals are relative to ``||u||`` on the stencil interior. A zero
    sample passes with ``degenerate=True``.
    """
    if u.norm() == 0.0:
        return ForceFreeReport(0.0, 0.0, tol, passed=True, degenerate=True)
    curl = curl_fd(u)
    inner = u.restrict(curl).vector_part()
    curl_res = relative_l2(curl + inner * lam, inner)
    div_res = relative_l2(div_fd(u), inner)
    passed = curl_res <= tol and div_res <= tol
    logger.debug(
        "force-free check: curl %.3e, div %.3e, tol %.3e, %s",
        curl_res,
        div_res,
        tol,
        "pass" if passed else "fail",
    )
    return ForceFreeReport(curl_res, div_res, tol, passed)


def verify_forcefree_field(
    u: Field, lam: complex, grid: Grid, tol: float, refine: int = 2
) -> ForceFreeReport:
    """``verify_forcefree`` for an analytic field, sampled ``refine`` times finer than ``grid``.

    The central-difference truncation error for wave number ``lam`` is about
    ``(|lam| h)^2 / 6`` on the sampling grid.
    """
    return verify_forcefree(sample(u, grid.refined(refine)).vector_part(), lam, tol)
