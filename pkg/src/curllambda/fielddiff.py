"""Central finite-difference operators on grid-sampled fields."""

from __future__ import annotations

from typing import Literal

import numpy as np
from numpy.typing import NDArray

from .domain import FieldKind, FieldSample, Grid
from .errors import EmptyGridError
from .quaternion import ComplexArray, embed

Mask = NDArray[np.bool_]


def _grid_of(sample: FieldSample) -> Grid:
    if sample.grid is None:
        raise ValueError("finite differences need a gridded FieldSample")
    return sample.grid


def _dense(sample: FieldSample) -> tuple[ComplexArray, Mask]:
    grid = _grid_of(sample)
    arr = np.zeros((*grid.shape, 4), dtype=np.complex128)
    arr[tuple(grid.index.T)] = sample.values
    return arr, grid.mask()


def _shifted(a: NDArray, axis: int, step: int) -> NDArray:
    """``out[i] = a[i + step]`` along ``axis``, zero (or False) past the edge."""
    out = np.zeros_like(a)
    src: list[slice] = [slice(None)] * a.ndim
    dst: list[slice] = [slice(None)] * a.ndim
    if step > 0:
        src[axis], dst[axis] = slice(step, None), slice(None, -step)
    else:
        src[axis], dst[axis] = slice(None, step), slice(-step, None)
    out[tuple(dst)] = a[tuple(src)]
    return out


def _interior(mask: Mask) -> Mask:
    inner = mask.copy()
    for axis in range(3):
        inner &= _shifted(mask, axis, 1) & _shifted(mask, axis, -1)
    return inner


def _partial(arr: ComplexArray, axis: int, h: float) -> ComplexArray:
    return (_shifted(arr, axis, 1) - _shifted(arr, axis, -1)) / (2.0 * h)


def _gather(
    arr: ComplexArray, mask: Mask, like: Grid, kind: FieldKind
) -> FieldSample:
    if not np.any(mask):
        raise EmptyGridError("grid too small: no point has a full central stencil")
    grid = Grid.from_mask(like.origin, like.h, mask)
    return FieldSample(grid.points, arr[tuple(grid.index.T)], kind, grid)


def _grad(f: ComplexArray, h: float) -> ComplexArray:
    return np.stack([_partial(f, axis, h) for axis in range(3)], axis=-1)


def _div(v: ComplexArray, h: float) -> ComplexArray:
    return _partial(v[..., 0], 0, h) + _partial(v[..., 1], 1, h) + _partial(v[..., 2], 2, h)


def _curl(v: ComplexArray, h: float) -> ComplexArray:
    return np.stack(
        [
            _partial(v[..., 2], 1, h) - _partial(v[..., 1], 2, h),
            _partial(v[..., 0], 2, h) - _partial(v[..., 2], 0, h),
            _partial(v[..., 1], 0, h) - _partial(v[..., 0], 1, h),
        ],
        axis=-1,
    )


def grad_fd(f: FieldSample) -> FieldSample:
    """Gradient of the scalar part."""
    arr, mask = _dense(f)
    grid = _grid_of(f)
    out = embed(np.zeros(grid.shape), _grad(arr[..., 0], grid.h))
    return _gather(out, _interior(mask), grid, FieldKind.VECTOR)


def div_fd(v: FieldSample) -> FieldSample:
    """Divergence of the vector part."""
    arr, mask = _dense(v)
    grid = _grid_of(v)
    out = embed(_div(arr[..., 1:], grid.h), np.zeros((*grid.shape, 3)))
    return _gather(out, _interior(mask), grid, FieldKind.SCALAR)


def curl_fd(v: FieldSample) -> FieldSample:
    """Curl of the vector part."""
    arr, mask = _dense(v)
    grid = _grid_of(v)
    out = embed(np.zeros(grid.shape), _curl(arr[..., 1:], grid.h))
    return _gather(out, _interior(mask), grid, FieldKind.VECTOR)


def laplacian_fd(
    f: FieldSample, stencil: Literal["compact", "composed"] = "compact"
) -> FieldSample:
    """Componentwise Laplacian.

    ``compact`` is the 7-point stencil. ``composed`` applies the central first
    difference twice per axis (``div_fd(grad_fd(.))``), which is the stencil
    under which the Dirac factorization holds exactly.
    """
    arr, mask = _dense(f)
    grid = _grid_of(f)
    h = grid.h
    inner = _interior(mask)
    if stencil == "compact":
        out = sum(
            (_shifted(arr, axis, 1) - 2.0 * arr + _shifted(arr, axis, -1)) / h**2
            for axis in range(3)
        )
    elif stencil == "composed":
        out = sum(_partial(_partial(arr, axis, h), axis, h) for axis in range(3))
        inner = _interior(inner)
    else:
        raise ValueError(f"unknown stencil {stencil!r}")
    return _gather(np.asarray(out), inner, grid, f.kind)


def dirac_fd(w: FieldSample) -> FieldSample:
    """Moisil-Teodorescu operator ``Dw = -div w + grad w0 + curl w``."""
    arr, mask = _dense(w)
    grid = _grid_of(w)
    h = grid.h
    scalar = -_div(arr[..., 1:], h)
    vector = _grad(arr[..., 0], h) + _curl(arr[..., 1:], h)
    return _gather(embed(scalar, vector), _interior(mask), grid, FieldKind.FULL)


def dirac_shift_fd(w: FieldSample, lam: complex) -> FieldSample:
    """``(D + lam) w`` on the stencil-interior points."""
    d = dirac_fd(w)
    return d + w.restrict(d).as_full() * lam


def relative_l2(residual: FieldSample, reference: FieldSample) -> float:
    """``||residual|| / ||reference||`` over the points the two samples share."""
    a, b = residual.common(reference)
    ref = b.norm()
    if ref == 0.0:
        return a.norm()
    return a.norm() / ref
