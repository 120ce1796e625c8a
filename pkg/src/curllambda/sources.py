"""Named builtin fields that configuration files can refer to."""

from __future__ import annotations

import inspect
from collections.abc import Callable
from dataclasses import dataclass
from typing import Any, cast

import numpy as np

from .config import SourceSpec, parse_complex
from .domain import Field, FieldKind, FloatArray
from .errors import ConfigError, PreconditionError
from .export import read_csv
from .forcefree import Axis, beltrami_plane_wave, beltrami_shear
from .quaternion import ComplexArray


def _constant(lam: complex, value: Any = (1.0, 0.0, 0.0)) -> Field:
    v = np.array([parse_complex(c, "value") for c in value], dtype=np.complex128)
    if v.shape != (3,):
        raise ConfigError("value", "expected 3 components")
    return Field.vector(lambda p: np.broadcast_to(v, (p.shape[0], 3)), name="constant")


def _scalar_plane_wave(lam: complex, khat: Any = (0.0, 0.0, 1.0)) -> Field:
    k = np.asarray(khat, dtype=np.float64)
    return Field.scalar(lambda p: np.exp(1j * lam * (p @ k)), name="scalar-plane-wave")


def _beltrami_shear(
    lam: complex, axis: str = "z", phase: float = 0.0, wavenumber: Any = None
) -> Field:
    kappa = lam if wavenumber is None else parse_complex(wavenumber, "wavenumber")
    return beltrami_shear(kappa, cast(Axis, axis), phase)


def _beltrami_plane_wave(
    lam: complex, khat: Any = (0.0, 0.0, 1.0), wavenumber: Any = None
) -> Field:
    kappa = lam if wavenumber is None else parse_complex(wavenumber, "wavenumber")
    return beltrami_plane_wave(kappa, khat)


def bump(
    center: Any = (0.0, 0.0, 0.0), radius: float = 0.8, direction: Any = (1.0, 0.0, 0.0)
) -> Field:
    """``(1 - |x - c|^2 / R^2)^4 p`` inside the ball of radius ``R``, zero outside."""
    c = np.asarray(center, dtype=np.float64)
    d = np.asarray(direction, dtype=np.complex128)

    def func(p: FloatArray) -> ComplexArray:
        s = 1.0 - np.sum((p - c) ** 2, axis=-1) / radius**2
        return (np.where(s > 0, s, 0.0) ** 4)[:, None] * d[None, :]

    return Field.vector(func, name="bump")


def _bump(
    lam: complex,
    center: Any = (0.0, 0.0, 0.0),
    radius: float = 0.8,
    direction: Any = (1.0, 0.0, 0.0),
) -> Field:
    return bump(center, radius, direction)


def _gaussian(
    lam: complex,
    center: Any = (0.0, 0.0, 0.0),
    width: float = 0.3,
    direction: Any = (0.0, 0.0, 1.0),
) -> Field:
    c = np.asarray(center, dtype=np.float64)
    d = np.asarray(direction, dtype=np.complex128)

    def func(p: FloatArray) -> ComplexArray:
        return np.exp(-np.sum((p - c) ** 2, axis=-1) / width**2)[:, None] * d[None, :]

    return Field.vector(func, name="gaussian")


def _linear(lam: complex, matrix: Any = None, offset: Any = (0.0, 0.0, 0.0)) -> Field:
    a = np.eye(3) if matrix is None else np.asarray(matrix, dtype=np.float64)
    b = np.asarray(offset, dtype=np.float64)
    if a.shape != (3, 3):
        raise ConfigError("matrix", f"expected a 3x3 matrix, got shape {a.shape}")
    return Field.vector(lambda p: p @ a.T + b, name="linear")


def trig(k: float = 1.0) -> Field:
    """Smooth test field with nonzero curl and divergence."""

    def func(p: FloatArray) -> ComplexArray:
        x, y, z = p[:, 0], p[:, 1], p[:, 2]
        return np.stack(
            [np.sin(k * (x + y)), np.cos(k * (y - z)), np.sin(k * z) * np.cos(k * x)], axis=-1
        )

    return Field.vector(func, name="trig")


def _trig(lam: complex, k: float = 1.0) -> Field:
    return trig(k)


@dataclass(frozen=True)
class Builtin:
    """A named field family."""

    name: str
    kind: FieldKind
    factory: Callable[..., Field]
    summary: str

    def parameters(self) -> list[str]:
        return list(inspect.signature(self.factory).parameters)[1:]


BUILTINS: dict[str, Builtin] = {
    b.name: b
    for b in (
        Builtin("constant", FieldKind.VECTOR, _constant, "constant vector 'value'"),
        Builtin(
            "scalar-plane-wave",
            FieldKind.SCALAR,
            _scalar_plane_wave,
            "exp(i lambda khat.x), a Helmholtz solution",
        ),
        Builtin("beltrami-shear", FieldKind.VECTOR, _beltrami_shear, "force-free shear field"),
        Builtin(
            "beltrami-plane-wave",
            FieldKind.VECTOR,
            _beltrami_plane_wave,
            "force-free circularly polarized plane wave",
        ),
        Builtin("bump", FieldKind.VECTOR, _bump, "smooth compactly supported vector field"),
        Builtin("gaussian", FieldKind.VECTOR, _gaussian, "Gaussian-profile vector field"),
        Builtin("linear", FieldKind.VECTOR, _linear, "affine vector field A x + b"),
        Builtin("trig", FieldKind.VECTOR, _trig, "smooth trigonometric vector field"),
    )
}


def make_builtin(name: str, params: dict[str, Any], lam: complex, key: str = "source") -> Field:
    """Instantiate a builtin; ``lam`` is the run's wave number."""
    if name not in BUILTINS:
        known = ", ".join(sorted(BUILTINS))
        raise ConfigError(f"{key}.builtin", f"unknown builtin {name!r} (known: {known})")
    builtin = BUILTINS[name]
    allowed = builtin.parameters()
    for param in params:
        if param not in allowed:
            raise ConfigError(f"{key}.params.{param}", f"not a parameter of {name!r}")
    try:
        return builtin.factory(lam, **params)
    except ConfigError as e:
        raise ConfigError(f"{key}.params.{e.key}", e.problem) from None
    except (TypeError, ValueError) as e:
        if isinstance(e, PreconditionError):
            raise
        raise ConfigError(f"{key}.params", str(e)) from None


def resolve_source(spec: SourceSpec, lam: complex, key: str = "source") -> Field:
    """Turn a configured source into an analytic or interpolated field."""
    if spec.csv is not None:
        if not spec.csv.exists():
            raise ConfigError(f"{key}.csv", f"file not found: {spec.csv}")
        return Field.from_sample(read_csv(spec.csv))
    assert spec.builtin is not None
    return make_builtin(spec.builtin, spec.params, lam, key)
