"""Volume potentials: Newton potential, Teodorescu transform and its components."""

from __future__ import annotations

import logging
import os
import time
from collections.abc import Callable
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from .domain import FieldKind, FieldSample, FloatArray, Grid, VoxelDomain
from .errors import DomainError
from .kernels import check_sign, equal_volume_radius, grad_theta, selfcell_theta, theta
from .quaternion import ComplexArray, embed, mul

logger = logging.getLogger(__name__)

# Evaluation points per work item. Fixed so that every point is always summed
# inside the same block, whatever the number of threads.
CHUNK_SIZE = 32

THREADS_ENV = "CURL_LAMBDA_THREADS"

# combine(theta_weighted (C, M), grad_weighted (C, M, 3)) -> (C, width)
Combiner = Callable[[ComplexArray, ComplexArray], ComplexArray]


def resolve_threads(threads: int | None = None) -> int:
    """Worker count: explicit value, else ``CURL_LAMBDA_THREADS``, else all cores.

    Zero means "auto".
    """
    if threads is None:
        env = os.environ.get(THREADS_ENV, "").strip()
        threads = int(env) if env else 0
    if threads < 0:
        raise ValueError(f"thread count must be >= 0, got {threads}")
    return threads or (os.cpu_count() or 1)


def _contract(kernel: ComplexArray, values: ComplexArray) -> ComplexArray:
    """Row sums of ``kernel * values`` in source order."""
    return (kernel * values[None, :]).sum(axis=1)


def _points_of(at: Grid | FloatArray) -> FloatArray:
    return at.points if isinstance(at, Grid) else np.atleast_2d(np.asarray(at, dtype=np.float64))


def _block(
    domain: VoxelDomain, lam: complex, x: FloatArray
) -> tuple[ComplexArray, ComplexArray]:
    """Weighted kernel values for one block of evaluation points.

    Sources within half a cell of a point are replaced by the equal-volume
    ball integral of theta; their grad-theta contribution is zero.
    """
    d = x[:, None, :] - domain.centers[None, :, :]
    r = np.sqrt(np.sum(d * d, axis=-1))
    near = r < 0.5 * domain.h
    if np.any(near):
        d = d.copy()
        d[near] = (1.0, 0.0, 0.0)
    weight = domain.h**3
    th = theta(d, lam) * weight
    grad = grad_theta(d, lam) * weight
    if np.any(near):
        th[near] = selfcell_theta(equal_volume_radius(domain.h), lam)
        grad[near] = 0.0
    return th, grad


def volume_quadrature(
    domain: VoxelDomain,
    lam: complex,
    at: Grid | FloatArray,
    combine: Combiner,
    width: int,
    *,
    threads: int | None = None,
) -> ComplexArray:
    """Shared midpoint-rule quadrature against theta and grad theta.

    Args:
        domain: Source domain.
        lam: Kernel wave number.
        at: Evaluation grid or ``(N, 3)`` points, anywhere in space.
        combine: Maps the weighted kernel block to the per-point result.
        width: Number of output columns of ``combine``.
        threads: Worker threads (see ``resolve_threads``).

    Returns:
        ``(N, width)`` complex array.
    """
    if domain.size == 0:
        raise DomainError("source domain is empty")
    points = _points_of(at)
    starts = range(0, points.shape[0], CHUNK_SIZE)
    workers = resolve_threads(threads)
    started = time.perf_counter()

    def work(start: int) -> ComplexArray:
        th, grad = _block(domain, lam, points[start : start + CHUNK_SIZE])
        return combine(th, grad)

    if workers == 1 or len(starts) <= 1:
        parts = [work(s) for s in starts]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(work, starts))
    out = np.concatenate(parts, axis=0) if parts else np.zeros((0, width), np.complex128)
    logger.debug(
        "quadrature: %d points x %d sources, %d threads, %.3fs",
        points.shape[0],
        domain.size,
        workers,
        time.perf_counter() - started,
    )
    return out


def _result(at: Grid | FloatArray, values: ComplexArray, kind: FieldKind) -> FieldSample:
    grid = at if isinstance(at, Grid) else None
    return FieldSample(_points_of(at), values, kind, grid)


def _check_source(domain: VoxelDomain, w: FieldSample) -> None:
    if len(w) != domain.size:
        raise ValueError(
            f"source sample has {len(w)} points but the domain has {domain.size} cells"
        )


def newton_L(
    domain: VoxelDomain,
    w: FieldSample,
    lam: complex,
    at: Grid | FloatArray,
    *,
    threads: int | None = None,
) -> FieldSample:
    """Newton potential ``L_lam[w] = int theta(x - y) w(y) dy``, componentwise."""
    _check_source(domain, w)
    values = w.values

    def combine(th: ComplexArray, _grad: ComplexArray) -> ComplexArray:
        return np.stack([_contract(th, values[:, k]) for k in range(4)], axis=-1)

    out = volume_quadrature(domain, lam, at, combine, 4, threads=threads)
    if w.kind is FieldKind.SCALAR:
        out[:, 1:] = 0.0
    elif w.kind is FieldKind.VECTOR:
        out[:, 0] = 0.0
    return _result(at, out, w.kind)


def teodorescu_T(
    domain: VoxelDomain,
    w: FieldSample,
    lam: complex,
    at: Grid | FloatArray,
    sign: int = 1,
    *,
    threads: int | None = None,
) -> FieldSample:
    """Teodorescu transform ``T_{sign lam}[w] = int E_{sign lam}(x - y) w(y) dy``."""
    check_sign(sign)
    _check_source(domain, w)
    values = w.values

    def combine(th: ComplexArray, grad: ComplexArray) -> ComplexArray:
        kernel = embed(sign * lam * th, -grad)
        return mul(kernel, values[None, :, :]).sum(axis=1)

    out = volume_quadrature(domain, lam, at, combine, 4, threads=threads)
    return FieldSample.on(at, out, FieldKind.FULL)


def t0(
    domain: VoxelDomain,
    w: FieldSample,
    lam: complex,
    sign: int,
    at: Grid | FloatArray,
    *,
    threads: int | None = None,
) -> FieldSample:
    """Scalar component ``int sign*lam*theta w0 + grad theta . w``."""
    check_sign(sign)
    _check_source(domain, w)
    w0, wv = w.scalar, w.vector

    def combine(th: ComplexArray, grad: ComplexArray) -> ComplexArray:
        dot = sum(_contract(grad[..., i], wv[:, i]) for i in range(3))
        return (sign * lam * _contract(th, w0) + dot)[:, None]

    out = volume_quadrature(domain, lam, at, combine, 1, threads=threads)
    return FieldSample.on(at, out[:, 0], FieldKind.SCALAR)


def t1(
    domain: VoxelDomain,
    w0: FieldSample,
    lam: complex,
    at: Grid | FloatArray,
    sign: int = 1,
    *,
    threads: int | None = None,
) -> FieldSample:
    """Irrotational component ``-int grad theta w0``; the same for both signs."""
    check_sign(sign)
    _check_source(domain, w0)
    s = w0.scalar

    def combine(_th: ComplexArray, grad: ComplexArray) -> ComplexArray:
        return np.stack([-_contract(grad[..., i], s) for i in range(3)], axis=-1)

    out = volume_quadrature(domain, lam, at, combine, 3, threads=threads)
    return FieldSample.on(at, out, FieldKind.VECTOR)


def t2(
    domain: VoxelDomain,
    w: FieldSample,
    lam: complex,
    sign: int,
    at: Grid | FloatArray,
    *,
    threads: int | None = None,
) -> FieldSample:
    """Vector component ``int sign*lam*theta w - grad theta x w``."""
    check_sign(sign)
    _check_source(domain, w)
    wv = w.vector

    def combine(th: ComplexArray, grad: ComplexArray) -> ComplexArray:
        cross = _cross_contract(grad, wv)
        lin = np.stack([_contract(th, wv[:, i]) for i in range(3)], axis=-1)
        return sign * lam * lin - cross

    out = volume_quadrature(domain, lam, at, combine, 3, threads=threads)
    return FieldSample.on(at, out, FieldKind.VECTOR)


def _cross_contract(grad: ComplexArray, wv: ComplexArray) -> ComplexArray:
    """Row sums of ``grad x w``."""
    gx, gy, gz = grad[..., 0], grad[..., 1], grad[..., 2]
    wx, wy, wz = wv[:, 0], wv[:, 1], wv[:, 2]
    return np.stack(
        [
            _contract(gy, wz) - _contract(gz, wy),
            _contract(gz, wx) - _contract(gx, wz),
            _contract(gx, wy) - _contract(gy, wx),
        ],
        axis=-1,
    )


def curl_newton(
    domain: VoxelDomain,
    w: FieldSample,
    lam: complex,
    at: Grid | FloatArray,
    *,
    threads: int | None = None,
) -> FieldSample:
    """``curl L_lam[w] = int grad theta x w`` by direct quadrature."""
    _check_source(domain, w)
    wv = w.vector

    def combine(_th: ComplexArray, grad: ComplexArray) -> ComplexArray:
        return _cross_contract(grad, wv)

    out = volume_quadrature(domain, lam, at, combine, 3, threads=threads)
    return FieldSample.on(at, out, FieldKind.VECTOR)


def grad_newton(
    domain: VoxelDomain,
    w0: FieldSample,
    lam: complex,
    at: Grid | FloatArray,
    *,
    threads: int | None = None,
) -> FieldSample:
    """``grad L_lam[w0] = int grad theta w0`` by direct quadrature."""
    return -t1(domain, w0, lam, at, threads=threads)
