"""Biquaternion (complex quaternion) algebra."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any

import numpy as np
from numpy.typing import ArrayLike, NDArray

ComplexArray = NDArray[np.complex128]


def as_quaternion_array(a: ArrayLike) -> ComplexArray:
    """Coerce input to a complex array whose last axis holds (w0, w1, w2, w3)."""
    arr = np.asarray(a, dtype=np.complex128)
    if arr.shape[-1:] != (4,):
        raise ValueError(f"expected last axis of length 4, got shape {arr.shape}")
    return arr


def mul(a: ArrayLike, b: ArrayLike) -> ComplexArray:
    """Quaternion product of broadcastable ``(..., 4)`` arrays.

    The complex unit commutes with e1, e2, e3, so the product is the real
    quaternion product with complex coefficients:
    ``(a0 + a)(b0 + b) = a0 b0 - a.b + a0 b + b0 a + a x b``.
    """
    a = as_quaternion_array(a)
    b = as_quaternion_array(b)
    a0, av = a[..., 0], a[..., 1:]
    b0, bv = b[..., 0], b[..., 1:]
    scalar = a0 * b0 - np.sum(av * bv, axis=-1)
    vector = a0[..., None] * bv + b0[..., None] * av + np.cross(av, bv)
    return embed(scalar, vector)


def sc(a: ArrayLike) -> ComplexArray:
    """Scalar part."""
    return as_quaternion_array(a)[..., 0]


def vec(a: ArrayLike) -> ComplexArray:
    """Vector part as a ``(..., 3)`` array."""
    return as_quaternion_array(a)[..., 1:]


def embed(s: ArrayLike, v: ArrayLike) -> ComplexArray:
    """Assemble ``s + v`` from a scalar part and a ``(..., 3)`` vector part."""
    s_arr = np.asarray(s, dtype=np.complex128)
    v_arr = np.asarray(v, dtype=np.complex128)
    shape = np.broadcast_shapes(s_arr.shape, v_arr.shape[:-1])
    out = np.empty((*shape, 4), dtype=np.complex128)
    out[..., 0] = s_arr
    out[..., 1:] = v_arr
    return out


def conj(a: ArrayLike) -> ComplexArray:
    """Quaternionic conjugate (vector part negated, complex coefficients untouched)."""
    out = as_quaternion_array(a).copy()
    out[..., 1:] *= -1
    return out


def norm(a: ArrayLike) -> NDArray[np.float64]:
    """Square root of the sum of squared moduli of the four components."""
    return np.sqrt(np.sum(np.abs(as_quaternion_array(a)) ** 2, axis=-1))


@dataclass(frozen=True)
class Biquaternion:
    """A single biquaternion ``w0 + w1 e1 + w2 e2 + w3 e3``."""

    w0: complex = 0j
    w1: complex = 0j
    w2: complex = 0j
    w3: complex = 0j

    @classmethod
    def from_array(cls, arr: ArrayLike) -> Biquaternion:
        a = as_quaternion_array(arr)
        if a.shape != (4,):
            raise ValueError(f"expected shape (4,), got {a.shape}")
        return cls(complex(a[0]), complex(a[1]), complex(a[2]), complex(a[3]))

    @classmethod
    def from_parts(cls, s: complex, v: ArrayLike) -> Biquaternion:
        return cls.from_array(embed(s, v))

    def as_array(self) -> ComplexArray:
        return np.array([self.w0, self.w1, self.w2, self.w3], dtype=np.complex128)

    @property
    def sc(self) -> complex:
        return self.w0

    @property
    def vec(self) -> ComplexArray:
        return np.array([self.w1, self.w2, self.w3], dtype=np.complex128)

    def conj(self) -> Biquaternion:
        return Biquaternion(self.w0, -self.w1, -self.w2, -self.w3)

    def norm(self) -> float:
        return float(norm(self.as_array()))

    def _coerce(self, other: Any) -> ComplexArray | None:
        if isinstance(other, Biquaternion):
            return other.as_array()
        if isinstance(other, int | float | complex | np.number):
            return np.array([other, 0, 0, 0], dtype=np.complex128)
        return None

    def __add__(self, other: Any) -> Biquaternion:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return Biquaternion.from_array(self.as_array() + o)

    __radd__ = __add__

    def __sub__(self, other: Any) -> Biquaternion:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return Biquaternion.from_array(self.as_array() - o)

    def __rsub__(self, other: Any) -> Biquaternion:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return Biquaternion.from_array(o - self.as_array())

    def __neg__(self) -> Biquaternion:
        return Biquaternion(-self.w0, -self.w1, -self.w2, -self.w3)

    def __mul__(self, other: Any) -> Biquaternion:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return Biquaternion.from_array(mul(self.as_array(), o))

    def __rmul__(self, other: Any) -> Biquaternion:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return Biquaternion.from_array(mul(o, self.as_array()))


ONE = Biquaternion(1)
E1 = Biquaternion(0, 1)
E2 = Biquaternion(0, 0, 1)
E3 = Biquaternion(0, 0, 0, 1)
