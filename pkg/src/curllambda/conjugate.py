"""Metaharmonic conjugates: completing a Helmholtz solution to a lambda-monogenic field."""

from __future__ import annotations

import logging

import numpy as np

from .domain import Field, FieldKind, FieldSample, sample
from .errors import HelmholtzConditionError, ZeroWavenumberError
from .fielddiff import curl_fd, dirac_shift_fd, div_fd, grad_fd, laplacian_fd, relative_l2

logger = logging.getLogger(__name__)


def helmholtz_residual(f: FieldSample, lam: complex) -> float:
    """``||(Laplacian + lam^2) f|| / ||lam^2 f||`` with the compact stencil."""
    lap = laplacian_fd(f)
    return relative_l2(lap + f.restrict(lap) * lam**2, f.restrict(lap) * lam**2)


def curlcurl_residual(w: FieldSample, lam: complex) -> float:
    """``||curl (curl w + lam w)|| / ||lam^2 w||``."""
    curl = curl_fd(w)
    outer = curl_fd(curl + w.restrict(curl).vector_part() * lam)
    return relative_l2(outer, w.restrict(outer).vector_part() * lam**2)


def monogenic_residual(w0: FieldSample, w: FieldSample, lam: complex) -> float:
    """``||(D + lam)(w0 + w)|| / ||lam (w0 + w)||`` on the common stencil interior."""
    full = w0 + w
    residual = dirac_shift_fd(full, lam)
    return relative_l2(residual, full.restrict(residual) * lam)


def _check(failures: dict[str, float], tol: float, unsafe: bool) -> None:
    bad = {name: value for name, value in failures.items() if not value <= tol}
    if not bad:
        return
    if unsafe:
        logger.warning("precondition bypassed (unsafe): %s", bad)
        return
    raise HelmholtzConditionError(bad, tol)


def conjugate_from_scalar(
    w0: FieldSample,
    lam: complex,
    *,
    tol: float = 0.02,
    unsafe: bool = False,
    grad: Field | None = None,
) -> FieldSample:
    """Vector conjugate ``w = -grad(w0) / lam`` of a Helmholtz solution ``w0``.

    Args:
        w0: Gridded scalar sample.
        lam: Nonzero wave number.
        tol: Tolerance of the Helmholtz precondition.
        unsafe: Skip the precondition check (logged).
        grad: Analytic gradient of ``w0``. Used instead of finite differences,
            which then only serve as a cross-check.

    Returns:
        Vector sample; on the grid of ``w0`` when ``grad`` is given, else on
        its stencil interior.

    Raises:
        HelmholtzConditionError: ``w0`` is not a Helmholtz solution.
    """
    if lam == 0:
        raise ZeroWavenumberError("conjugate_from_scalar")
    scalar = w0.scalar_part()
    if scalar.norm() == 0.0:
        return scalar.with_values(np.zeros((len(scalar), 3)), FieldKind.VECTOR)
    _check({"helmholtz": helmholtz_residual(scalar, lam)}, tol, unsafe)
    fd = grad_fd(scalar)
    if grad is None:
        return -fd / lam
    analytic = sample(grad, scalar.grid if scalar.grid is not None else scalar.points)
    mismatch = relative_l2(fd - analytic.restrict(fd), analytic.restrict(fd))
    if mismatch > tol:
        logger.warning("analytic and finite-difference gradients differ by %.3e", mismatch)
    return -analytic.vector_part() / lam


def conjugate_from_vector(
    w: FieldSample,
    lam: complex,
    *,
    tol: float = 0.02,
    unsafe: bool = False,
    div: Field | None = None,
) -> FieldSample:
    """Scalar conjugate ``w0 = div(w) / lam`` of a vector Helmholtz solution.

    ``w`` must satisfy ``(Laplacian + lam^2) w = 0`` and
    ``curl(curl w + lam w) = 0``; the result is unique.

    Raises:
        HelmholtzConditionError: naming each condition that failed.
    """
    if lam == 0:
        raise ZeroWavenumberError("conjugate_from_vector")
    vector = w.vector_part()
    if vector.norm() == 0.0:
        return vector.with_values(np.zeros(len(vector)), FieldKind.SCALAR)
    _check(
        {
            "helmholtz": helmholtz_residual(vector, lam),
            "curl(curl + lambda)": curlcurl_residual(vector, lam),
        },
        tol,
        unsafe,
    )
    fd = div_fd(vector)
    if div is None:
        return fd / lam
    analytic = sample(div, vector.grid if vector.grid is not None else vector.points)
    mismatch = relative_l2(fd - analytic.restrict(fd), analytic.restrict(fd))
    if mismatch > tol:
        logger.warning("analytic and finite-difference divergences differ by %.3e", mismatch)
    return analytic.scalar_part() / lam
