"""Voxel quadrature domains, uniform grids and sampled fields."""

from __future__ import annotations

import logging
import math
from collections.abc import Callable
from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property
from typing import Any

import numpy as np
from numpy.typing import ArrayLike, NDArray

from .errors import DomainError, EmptyGridError, PreconditionError
from .quaternion import ComplexArray, embed

logger = logging.getLogger(__name__)

FloatArray = NDArray[np.float64]


def _vec3(value: ArrayLike, name: str) -> FloatArray:
    arr = np.asarray(value, dtype=np.float64)
    if arr.shape != (3,):
        raise DomainError(f"{name} must be a 3-vector, got shape {arr.shape}")
    return arr


@dataclass(frozen=True, eq=False)
class Ball:
    """Ball of given radius and center."""

    radius: float = 1.0
    center: tuple[float, float, float] = (0.0, 0.0, 0.0)

    def __post_init__(self) -> None:
        if not self.radius > 0:
            raise DomainError(f"ball radius must be positive, got {self.radius}")

    @property
    def kind(self) -> str:
        return "ball"

    def contains(self, points: FloatArray) -> NDArray[np.bool_]:
        d = np.asarray(points) - _vec3(self.center, "center")
        return np.sum(d * d, axis=-1) <= self.radius**2

    def depth(self, points: FloatArray) -> FloatArray:
        d = np.asarray(points) - _vec3(self.center, "center")
        return self.radius - np.sqrt(np.sum(d * d, axis=-1))

    def bounds(self) -> tuple[FloatArray, FloatArray]:
        c = _vec3(self.center, "center")
        return c - self.radius, c + self.radius

    @property
    def volume(self) -> float:
        return 4.0 * math.pi * self.radius**3 / 3.0


@dataclass(frozen=True, eq=False)
class Box:
    """Axis-aligned box ``[lo, hi]``."""

    lo: tuple[float, float, float] = (0.0, 0.0, 0.0)
    hi: tuple[float, float, float] = (1.0, 1.0, 1.0)

    def __post_init__(self) -> None:
        if not np.all(_vec3(self.hi, "hi") > _vec3(self.lo, "lo")):
            raise DomainError(f"box needs hi > lo on every axis, got lo={self.lo}, hi={self.hi}")

    @property
    def kind(self) -> str:
        return "box"

    def contains(self, points: FloatArray) -> NDArray[np.bool_]:
        p = np.asarray(points)
        return np.all((p >= _vec3(self.lo, "lo")) & (p <= _vec3(self.hi, "hi")), axis=-1)

    def depth(self, points: FloatArray) -> FloatArray:
        p = np.asarray(points)
        to_lo = p - _vec3(self.lo, "lo")
        to_hi = _vec3(self.hi, "hi") - p
        return np.min(np.minimum(to_lo, to_hi), axis=-1)

    def bounds(self) -> tuple[FloatArray, FloatArray]:
        return _vec3(self.lo, "lo"), _vec3(self.hi, "hi")

    @property
    def volume(self) -> float:
        return float(np.prod(_vec3(self.hi, "hi") - _vec3(self.lo, "lo")))


@dataclass(frozen=True, eq=False)
class Ellipsoid:
    """Axis-aligned ellipsoid with the given semi-axes."""

    semiaxes: tuple[float, float, float] = (1.0, 1.0, 1.0)
    center: tuple[float, float, float] = (0.0, 0.0, 0.0)

    def __post_init__(self) -> None:
        if not np.all(_vec3(self.semiaxes, "semiaxes") > 0):
            raise DomainError(f"ellipsoid semi-axes must be positive, got {self.semiaxes}")

    @property
    def kind(self) -> str:
        return "ellipsoid"

    def _rho(self, points: FloatArray) -> FloatArray:
        d = (np.asarray(points) - _vec3(self.center, "center")) / _vec3(self.semiaxes, "semiaxes")
        return np.sum(d * d, axis=-1)

    def contains(self, points: FloatArray) -> NDArray[np.bool_]:
        return self._rho(points) <= 1.0

    def depth(self, points: FloatArray) -> FloatArray:
        # lower bound: the scaled copy through the point plus a ball of this radius fits inside
        return (1.0 - np.sqrt(self._rho(points))) * float(np.min(self.semiaxes))

    def bounds(self) -> tuple[FloatArray, FloatArray]:
        c = _vec3(self.center, "center")
        a = _vec3(self.semiaxes, "semiaxes")
        return c - a, c + a

    @property
    def volume(self) -> float:
        return 4.0 * math.pi * float(np.prod(self.semiaxes)) / 3.0


Shape = Ball | Box | Ellipsoid


def bounding_cube(shape: Shape) -> tuple[FloatArray, float]:
    """Return ``(origin, edge)`` of the smallest cube containing the shape's box."""
    lo, hi = shape.bounds()
    edge = float(np.max(hi - lo))
    origin = (lo + hi) / 2.0 - edge / 2.0
    return origin, edge


@dataclass(frozen=True, eq=False)
class Grid:
    """Subset of a uniform cell-centered lattice.

    Points are ``origin + (index + 0.5) * h``; ``index`` rows are kept in C
    (lexicographic) order so that sub-grids of one lattice align by index.
    """

    origin: FloatArray
    h: float
    shape: tuple[int, int, int]
    index: NDArray[np.int64]

    @classmethod
    def from_mask(cls, origin: FloatArray, h: float, mask: NDArray[np.bool_]) -> Grid:
        index = np.argwhere(mask).astype(np.int64)
        nx, ny, nz = mask.shape
        return cls(np.asarray(origin, dtype=np.float64), float(h), (nx, ny, nz), index)

    @cached_property
    def points(self) -> FloatArray:
        return self.origin + (self.index + 0.5) * self.h

    @cached_property
    def linear(self) -> NDArray[np.int64]:
        return np.ravel_multi_index(self.index.T, self.shape).astype(np.int64)

    @property
    def size(self) -> int:
        return int(self.index.shape[0])

    def mask(self) -> NDArray[np.bool_]:
        dense = np.zeros(self.shape, dtype=bool)
        dense[tuple(self.index.T)] = True
        return dense

    def compatible(self, other: Grid) -> bool:
        return (
            self.shape == other.shape
            and self.h == other.h
            and bool(np.array_equal(self.origin, other.origin))
        )

    def subset(self, keep: NDArray[np.bool_]) -> Grid:
        return Grid(self.origin, self.h, self.shape, self.index[keep])

    def refined(self, factor: int = 2) -> Grid:
        """The same cells split ``factor`` times per axis."""
        if factor < 1:
            raise ValueError(f"refinement factor must be at least 1, got {factor}")
        fine = self.mask().repeat(factor, 0).repeat(factor, 1).repeat(factor, 2)
        return Grid.from_mask(self.origin, self.h / factor, fine)


class FieldKind(Enum):
    """Which parts of a biquaternion field may be nonzero."""

    SCALAR = "scalar"
    VECTOR = "vector"
    FULL = "full"

    def combine(self, other: FieldKind) -> FieldKind:
        return self if self is other else FieldKind.FULL


@dataclass(frozen=True, eq=False)
class FieldSample:
    """A biquaternion-valued field sampled on a point set, optionally gridded."""

    points: FloatArray
    values: ComplexArray
    kind: FieldKind
    grid: Grid | None = field(default=None)

    __array_ufunc__ = None

    def __post_init__(self) -> None:
        if self.points.ndim != 2 or self.points.shape[1] != 3:
            raise ValueError(f"points must have shape (N, 3), got {self.points.shape}")
        if self.values.shape != (self.points.shape[0], 4):
            raise ValueError(
                f"values must have shape ({self.points.shape[0]}, 4), got {self.values.shape}"
            )
        if self.kind is FieldKind.SCALAR and np.any(self.values[:, 1:] != 0):
            raise ValueError("scalar field sample has nonzero vector parts")
        if self.kind is FieldKind.VECTOR and np.any(self.values[:, 0] != 0):
            raise ValueError("vector field sample has nonzero scalar parts")
        if self.grid is not None and self.grid.size != self.points.shape[0]:
            raise ValueError("grid and points disagree in length")

    @classmethod
    def on(cls, where: Grid | FloatArray, values: ArrayLike, kind: FieldKind) -> FieldSample:
        """Build a sample from values in ``kind``'s layout or the full ``(N, 4)`` layout."""
        grid = where if isinstance(where, Grid) else None
        points = where.points if isinstance(where, Grid) else np.asarray(where, dtype=np.float64)
        vals = np.asarray(values, dtype=np.complex128)
        n = points.shape[0]
        if vals.shape == (n, 4):
            full = vals.copy()
        elif kind is FieldKind.SCALAR:
            full = embed(vals.reshape(n), np.zeros((n, 3)))
        elif kind is FieldKind.VECTOR:
            full = embed(np.zeros(n), vals.reshape(n, 3))
        else:
            full = vals.reshape(n, 4).copy()
        return cls(points, full, kind, grid)

    def __len__(self) -> int:
        return int(self.points.shape[0])

    @property
    def scalar(self) -> ComplexArray:
        return self.values[:, 0]

    @property
    def vector(self) -> ComplexArray:
        return self.values[:, 1:]

    def scalar_part(self) -> FieldSample:
        return FieldSample.on(self._where(), self.scalar, FieldKind.SCALAR)

    def vector_part(self) -> FieldSample:
        return FieldSample.on(self._where(), self.vector, FieldKind.VECTOR)

    def as_full(self) -> FieldSample:
        return FieldSample(self.points, self.values, FieldKind.FULL, self.grid)

    def _where(self) -> Grid | FloatArray:
        return self.grid if self.grid is not None else self.points

    def with_values(self, values: ArrayLike, kind: FieldKind | None = None) -> FieldSample:
        return FieldSample.on(self._where(), values, kind or self.kind)

    def restrict(self, target: Grid | FieldSample) -> FieldSample:
        """Values of this sample on the points of ``target`` (a sub-grid of the same lattice)."""
        grid = target.grid if isinstance(target, FieldSample) else target
        if grid is None or self.grid is None or not self.grid.compatible(grid):
            if isinstance(target, FieldSample) and np.array_equal(target.points, self.points):
                return self
            raise ValueError("samples do not share a lattice and cannot be aligned")
        if grid.size == self.grid.size and np.array_equal(grid.linear, self.grid.linear):
            return self
        pos = np.searchsorted(self.grid.linear, grid.linear)
        pos = np.clip(pos, 0, self.grid.size - 1)
        if not np.array_equal(self.grid.linear[pos], grid.linear):
            raise ValueError("target grid is not a subset of this sample's grid")
        return FieldSample(grid.points, self.values[pos], self.kind, grid)

    def common(self, other: FieldSample) -> tuple[FieldSample, FieldSample]:
        """Restrict both samples to their common points."""
        if self.grid is not None and other.grid is not None and self.grid.compatible(other.grid):
            _, ia, _ = np.intersect1d(
                self.grid.linear, other.grid.linear, assume_unique=True, return_indices=True
            )
            shared = self.grid.subset(np.sort(ia))
            return self.restrict(shared), other.restrict(shared)
        if len(self) == len(other) and np.array_equal(self.points, other.points):
            return self, other
        raise ValueError("samples do not share a lattice and cannot be aligned")

    def __add__(self, other: Any) -> FieldSample:
        if not isinstance(other, FieldSample):
            return NotImplemented
        a, b = self.common(other)
        return a.with_values(a.values + b.values, a.kind.combine(b.kind))

    def __sub__(self, other: Any) -> FieldSample:
        if not isinstance(other, FieldSample):
            return NotImplemented
        a, b = self.common(other)
        return a.with_values(a.values - b.values, a.kind.combine(b.kind))

    def __neg__(self) -> FieldSample:
        return self.with_values(-self.values)

    def __mul__(self, factor: Any) -> FieldSample:
        if isinstance(factor, int | float | complex | np.number):
            return self.with_values(self.values * factor)
        if isinstance(factor, np.ndarray) and factor.shape == (len(self),):
            return self.with_values(self.values * factor[:, None])
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, divisor: Any) -> FieldSample:
        if isinstance(divisor, int | float | complex | np.number):
            return self.with_values(self.values / divisor)
        return NotImplemented

    def norm(self) -> float:
        """Discrete L2 norm (unweighted; grids are uniform)."""
        return float(np.sqrt(np.sum(np.abs(self.values) ** 2)))


@dataclass(frozen=True)
class Field:
    """An analytic field specification that can be sampled anywhere."""

    kind: FieldKind
    func: Callable[[FloatArray], ComplexArray]
    name: str = "field"

    @classmethod
    def scalar(cls, func: Callable[[FloatArray], Any], name: str = "scalar") -> Field:
        return cls(FieldKind.SCALAR, func, name)

    @classmethod
    def vector(cls, func: Callable[[FloatArray], Any], name: str = "vector") -> Field:
        return cls(FieldKind.VECTOR, func, name)

    @classmethod
    def full(cls, func: Callable[[FloatArray], Any], name: str = "full") -> Field:
        return cls(FieldKind.FULL, func, name)

    @classmethod
    def zero(cls, kind: FieldKind = FieldKind.VECTOR) -> Field:
        width = {FieldKind.SCALAR: (), FieldKind.VECTOR: (3,), FieldKind.FULL: (4,)}[kind]
        return cls(kind, lambda p: np.zeros((p.shape[0], *width), dtype=np.complex128), "zero")

    def __call__(self, points: ArrayLike) -> ComplexArray:
        pts = np.atleast_2d(np.asarray(points, dtype=np.float64))
        raw = np.asarray(self.func(pts), dtype=np.complex128)
        n = pts.shape[0]
        if self.kind is FieldKind.SCALAR:
            return embed(np.broadcast_to(raw, (n,)), np.zeros((n, 3)))
        if self.kind is FieldKind.VECTOR:
            return embed(np.zeros(n), np.broadcast_to(raw, (n, 3)))
        return np.broadcast_to(raw, (n, 4)).copy()

    def scalar_values(self, points: ArrayLike) -> ComplexArray:
        return self(points)[:, 0]

    def vector_values(self, points: ArrayLike) -> ComplexArray:
        return self(points)[:, 1:]

    def __add__(self, other: Field) -> Field:
        name = f"{self.name}+{other.name}"
        if self.kind is other.kind:
            return Field(
                self.kind, lambda p: np.asarray(self.func(p)) + np.asarray(other.func(p)), name
            )
        return Field(FieldKind.FULL, lambda p: self(p) + other(p), name)

    def scaled(self, factor: complex) -> Field:
        return Field(self.kind, lambda p: factor * np.asarray(self.func(p)), self.name)

    def modulated(self, weight: Callable[[FloatArray], Any], name: str | None = None) -> Field:
        """Pointwise product with a scalar function of position."""

        def func(p: FloatArray) -> ComplexArray:
            w = np.asarray(weight(p), dtype=np.complex128)
            raw = np.asarray(self.func(p), dtype=np.complex128)
            return w.reshape(-1, *([1] * (raw.ndim - 1))) * raw

        return Field(self.kind, func, name or self.name)

    @classmethod
    def from_sample(cls, sample: FieldSample) -> Field:
        """Interpolate a sample (piecewise linear, nearest neighbour outside the hull)."""
        from scipy.interpolate import LinearNDInterpolator, NearestNDInterpolator

        linear = LinearNDInterpolator(sample.points, sample.values)
        nearest = NearestNDInterpolator(sample.points, sample.values)

        def func(p: FloatArray) -> ComplexArray:
            out = np.asarray(linear(p), dtype=np.complex128)
            missing = np.isnan(out).any(axis=1)
            if np.any(missing):
                out[missing] = nearest(p[missing])
            if sample.kind is FieldKind.SCALAR:
                return out[:, 0]
            if sample.kind is FieldKind.VECTOR:
                return out[:, 1:]
            return out

        return cls(sample.kind, func, "interpolated")


@dataclass(frozen=True, eq=False)
class VoxelDomain:
    """Midpoint-rule quadrature model of a bounded domain."""

    shape: Shape
    n: int
    grid: Grid

    @property
    def h(self) -> float:
        return self.grid.h

    @property
    def centers(self) -> FloatArray:
        return self.grid.points

    @cached_property
    def weights(self) -> FloatArray:
        return np.full(self.grid.size, self.h**3)

    @property
    def size(self) -> int:
        return self.grid.size

    @property
    def volume(self) -> float:
        return float(np.sum(self.weights))


def build_domain(shape: Shape, n: int) -> VoxelDomain:
    """Voxelize ``shape`` with ``n`` cells per axis of its bounding cube.

    A cell belongs to the domain iff its center is inside the shape; every
    cell carries the weight ``h**3``.

    Args:
        shape: Ball, Box or Ellipsoid.
        n: Cells per axis of the bounding cube.

    Returns:
        The voxel domain with centers in deterministic C order.
    """
    if n < 4:
        raise DomainError(f"need at least 4 cells per axis, got n={n}")
    origin, edge = bounding_cube(shape)
    h = edge / n
    index = np.indices((n, n, n)).reshape(3, -1).T
    centers = origin + (index + 0.5) * h
    inside = shape.contains(centers).reshape(n, n, n)
    grid = Grid.from_mask(origin, h, inside)
    if grid.size == 0:
        raise DomainError(f"{shape.kind} domain has no cells at n={n}")
    logger.debug("built %s domain: n=%d, h=%.4g, cells=%d", shape.kind, n, h, grid.size)
    return VoxelDomain(shape, n, grid)


def interior_eval_grid(domain: VoxelDomain, n_eval: int, margin: int) -> Grid:
    """Uniform evaluation grid kept ``margin`` cells clear of the stencil reach.

    A point is kept when its distance to the boundary is at least
    ``(margin + 1) * h_eval``: one cell for the central stencil plus the margin.
    """
    if margin < 1:
        raise PreconditionError(f"margin must be at least 1 cell, got {margin}")
    if n_eval < 3:
        raise PreconditionError(f"n_eval must be at least 3, got {n_eval}")
    origin, edge = bounding_cube(domain.shape)
    h = edge / n_eval
    index = np.indices((n_eval,) * 3).reshape(3, -1).T
    points = origin + (index + 0.5) * h
    keep = domain.shape.depth(points) >= (margin + 1) * h
    if not np.any(keep):
        raise EmptyGridError(
            f"no evaluation points at n_eval={n_eval} with margin={margin}; refine the grid"
        )
    return Grid.from_mask(origin, h, keep.reshape((n_eval,) * 3))


def sample(f: Field, where: Grid | ArrayLike) -> FieldSample:
    """Evaluate an analytic field at the points of a grid or point set."""
    if isinstance(where, Grid):
        return FieldSample(where.points, f(where.points), f.kind, where)
    points = np.atleast_2d(np.asarray(where, dtype=np.float64))
    return FieldSample(points, f(points), f.kind)
