"""Right inverse R_lambda of curl + lambda and the solutions built on it."""

from __future__ import annotations

import logging

import numpy as np

from .domain import Field, FieldKind, FieldSample, FloatArray, Grid, VoxelDomain, sample
from .errors import ForceFreeError, ZeroWavenumberError
from .fielddiff import curl_fd, div_fd, grad_fd, relative_l2
from .forcefree import verify_forcefree, verify_forcefree_field
from .kernels import check_sign
from .potentials import newton_L, t2
from .quaternion import ComplexArray

logger = logging.getLogger(__name__)


def _vector_source(domain: VoxelDomain, g: Field) -> FieldSample:
    gs = sample(g, domain.grid)
    return gs if gs.kind is FieldKind.VECTOR else gs.vector_part()


def _require_nonzero(lam: complex, operation: str) -> None:
    if lam == 0:
        raise ZeroWavenumberError(operation)


def r_lambda(
    domain: VoxelDomain,
    g: Field,
    lam: complex,
    grid: Grid,
    sign: int = 1,
    *,
    threads: int | None = None,
) -> FieldSample:
    """Right inverse of ``curl + sign*lam`` applied to ``g``.

    ``(1/(sign*lam)) (g - curl T2_{sign lam}[g])`` with the curl taken by
    central differences on ``grid``; ``sign=+1`` is ``R_lambda``.

    Args:
        domain: Source domain carrying ``g``.
        g: Vector field (analytic, or interpolated from a sample).
        lam: Nonzero wave number; also the kernel wave number.
        grid: Evaluation grid.
        sign: +1 for ``curl + lam``, -1 for ``curl - lam``.
        threads: Worker threads for the quadrature.

    Returns:
        Vector sample on the stencil-interior part of ``grid``.
    """
    _require_nonzero(lam, "R_lambda")
    check_sign(sign)
    potential = t2(domain, _vector_source(domain, g), lam, sign, grid, threads=threads)
    curl = curl_fd(potential)
    g_here = sample(g, curl.grid).vector_part()
    return (g_here - curl) / (sign * lam)


def r_lambda_alt(
    domain: VoxelDomain,
    g: Field,
    lam: complex,
    grid: Grid,
    *,
    threads: int | None = None,
) -> FieldSample:
    """Kernel form ``(1/lam) grad div L[g] + lam L[g] - curl L[g]``."""
    _require_nonzero(lam, "R_lambda")
    potential = newton_L(domain, _vector_source(domain, g), lam, grid, threads=threads)
    graddiv = grad_fd(div_fd(potential))
    return graddiv / lam + (potential * lam - curl_fd(potential))


def curl_residual(w: FieldSample, g: Field | FieldSample, lam: complex) -> float:
    """``||curl w + lam w - g|| / ||g||`` on the stencil interior of ``w``."""
    curl = curl_fd(w)
    target = g.restrict(curl) if isinstance(g, FieldSample) else sample(g, curl.grid)
    target = target.vector_part()
    return relative_l2(curl + w.restrict(curl) * lam - target, target)


def general_solution(
    domain: VoxelDomain,
    g: Field,
    lam: complex,
    grid: Grid,
    u: Field | FieldSample | None = None,
    *,
    tol: float = 0.02,
    threads: int | None = None,
) -> FieldSample:
    """``R_lambda[g] + u`` with ``u`` checked to be force-free.

    Raises:
        ForceFreeError: ``u`` fails ``verify_forcefree`` at ``tol``.
    """
    particular = r_lambda(domain, g, lam, grid, threads=threads)
    if u is None:
        return particular
    if isinstance(u, FieldSample):
        u_grid = u
        report = verify_forcefree(u, lam, tol)
    else:
        u_grid = sample(u, grid)
        report = verify_forcefree_field(u, lam, grid, tol)
    if not report.passed:
        raise ForceFreeError("u", report.curl_residual, report.div_residual, tol)
    return particular + u_grid.restrict(particular).vector_part()


def compatibility_scalar(g: FieldSample, lam: complex) -> FieldSample:
    """``g0 = -div g / lam`` so that ``g0 + g`` satisfies ``div g + lam g0 = 0``."""
    _require_nonzero(lam, "compatibility_scalar")
    return -div_fd(g) / lam


def gauge_solve(
    domain: VoxelDomain,
    h: Field,
    phi: Field,
    lam: complex,
    grid: Grid,
    *,
    threads: int | None = None,
) -> FieldSample:
    """Solve ``curl v + lam v + grad(phi) x v = h``.

    ``w = exp(phi) v`` solves ``curl w + lam w = exp(phi) h``.
    """
    _require_nonzero(lam, "gauge_solve")
    weighted = h.modulated(lambda p: np.exp(phi.scalar_values(p)), name=f"exp(phi)*{h.name}")
    w = general_solution(domain, weighted, lam, grid, threads=threads)
    return w * np.exp(-phi.scalar_values(w.points))


def gauge_residual(v: FieldSample, h: Field, phi: Field, lam: complex) -> float:
    """``||curl v + lam v + grad(phi) x v - h|| / ||h||`` by central differences."""
    curl = curl_fd(v)
    grad_phi = grad_fd(sample(phi, v.grid).scalar_part()).restrict(curl)
    v_here = v.restrict(curl)
    cross = np.cross(grad_phi.vector, v_here.vector)
    target = sample(h, curl.grid).vector_part()
    residual = curl + v_here * lam + curl.with_values(cross, FieldKind.VECTOR) - target
    return relative_l2(residual, target)


def r_lambda_normal_trace(
    domain: VoxelDomain,
    g: Field,
    lam: complex,
    points: FloatArray,
    normals: FloatArray,
    step: float | None = None,
    *,
    threads: int | None = None,
) -> ComplexArray:
    """Normal component ``R_lambda[g] . n`` at arbitrary (boundary) points.

    ``curl T2[g]`` comes from a centered six-point stencil of spacing ``step``
    (default: the source spacing) around each point. The normal component of
    ``curl T2`` is continuous across the boundary, so the stencil may straddle it.
    """
    _require_nonzero(lam, "R_lambda")
    step = domain.h if step is None else step
    pts = np.asarray(points, dtype=np.float64)
    offsets = np.concatenate([np.eye(3), -np.eye(3)]) * step
    stencil = (pts[:, None, :] + offsets[None, :, :]).reshape(-1, 3)
    potential = t2(domain, _vector_source(domain, g), lam, 1, stencil, threads=threads)
    t = potential.vector.reshape(pts.shape[0], 6, 3)
    # d[:, j, k] = d T_k / d x_j
    d = (t[:, :3, :] - t[:, 3:, :]) / (2.0 * step)
    curl = np.stack(
        [d[:, 1, 2] - d[:, 2, 1], d[:, 2, 0] - d[:, 0, 2], d[:, 0, 1] - d[:, 1, 0]], axis=-1
    )
    g_here = g.vector_values(pts)
    n = np.asarray(normals, dtype=np.float64)
    return (np.sum(g_here * n, axis=-1) - np.sum(curl * n, axis=-1)) / lam
