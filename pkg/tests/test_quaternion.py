"""Tests for the quaternion module."""

import numpy as np
import pytest

from curllambda.quaternion import (
    E1,
    E2,
    E3,
    ONE,
    Biquaternion,
    as_quaternion_array,
    conj,
    embed,
    mul,
    norm,
    sc,
    vec,
)


def _random(rng: np.random.Generator, n: int) -> np.ndarray:
    return rng.standard_normal((n, 4)) + 1j * rng.standard_normal((n, 4))


class TestBasis:
    """Tests for the multiplication table of e1, e2, e3."""

    def test_squares_are_minus_one(self) -> None:
        """e_k e_k = -1 for each basis unit."""
        for e in (E1, E2, E3):
            assert e * e == Biquaternion(-1)

    def test_cyclic_products(self) -> None:
        """e1 e2 = e3, e2 e3 = e1, e3 e1 = e2."""
        assert E1 * E2 == E3
        assert E2 * E3 == E1
        assert E3 * E1 == E2

    def test_anticommutation(self) -> None:
        """e2 e1 = -e3."""
        assert E2 * E1 == -E3

    def test_one_is_identity(self) -> None:
        """ONE is the multiplicative identity."""
        q = Biquaternion(1 + 2j, -1, 0.5j, 3)
        assert ONE * q == q
        assert q * ONE == q


class TestArrayAlgebra:
    """Tests for the vectorised array functions."""

    def test_associativity(self) -> None:
        """(ab)c = a(bc) for random complex quaternions."""
        rng = np.random.default_rng(0)
        a, b, c = _random(rng, 50), _random(rng, 50), _random(rng, 50)
        np.testing.assert_allclose(mul(mul(a, b), c), mul(a, mul(b, c)), rtol=1e-12, atol=1e-12)

    def test_conjugate_reverses_products(self) -> None:
        """conj(ab) = conj(b) conj(a)."""
        rng = np.random.default_rng(1)
        a, b = _random(rng, 20), _random(rng, 20)
        np.testing.assert_allclose(conj(mul(a, b)), mul(conj(b), conj(a)), atol=1e-12)

    def test_embed_round_trip(self) -> None:
        """embed(sc(a), vec(a)) reproduces a."""
        rng = np.random.default_rng(2)
        a = _random(rng, 10)
        np.testing.assert_array_equal(embed(sc(a), vec(a)), a)

    def test_vector_product_formula(self) -> None:
        """For pure vectors ab = -a.b + a x b."""
        a = np.array([0, 1.0, 2.0, 3.0])
        b = np.array([0, -1.0, 0.5, 2.0])
        prod = mul(a, b)
        assert prod[0] == pytest.approx(-np.dot(a[1:], b[1:]))
        np.testing.assert_allclose(prod[1:], np.cross(a[1:], b[1:]))

    def test_complex_unit_commutes(self) -> None:
        """The imaginary unit commutes with the basis: (i e1) e2 = i e3."""
        prod = mul(1j * E1.as_array(), E2.as_array())
        np.testing.assert_allclose(prod, 1j * E3.as_array())

    def test_norm(self) -> None:
        """norm is the Euclidean norm of the four complex moduli."""
        assert norm(np.array([3, 0, 4j, 0]))[()] == pytest.approx(5.0)

    def test_rejects_wrong_shape(self) -> None:
        """Arrays without a length-4 last axis are rejected."""
        with pytest.raises(ValueError, match="length 4"):
            as_quaternion_array(np.zeros((3, 3)))

    def test_zero_divisor_exists(self) -> None:
        """Biquaternions have zero divisors: (1 + i e1)(1 - i e1) = 0."""
        a = Biquaternion(1, 1j)
        b = Biquaternion(1, -1j)
        assert (a * b).norm() == pytest.approx(0.0)


class TestBiquaternion:
    """Tests for the scalar dataclass wrapper."""

    def test_parts(self) -> None:
        """sc and vec split the components."""
        q = Biquaternion.from_parts(2j, [1, 2, 3])
        assert q.sc == 2j
        np.testing.assert_array_equal(q.vec, [1, 2, 3])

    def test_scalar_arithmetic(self) -> None:
        """Complex scalars act on the scalar part for + and on all parts for *."""
        q = Biquaternion(1, 2, 3, 4)
        assert q + 1 == Biquaternion(2, 2, 3, 4)
        assert 1 - q == Biquaternion(0, -2, -3, -4)
        assert 2j * q == Biquaternion(2j, 4j, 6j, 8j)

    def test_conj(self) -> None:
        """Conjugation negates the vector part only."""
        assert Biquaternion(1j, 2, 3j, 4).conj() == Biquaternion(1j, -2, -3j, -4)

    def test_from_array_shape(self) -> None:
        """from_array needs exactly four components."""
        with pytest.raises(ValueError):
            Biquaternion.from_array(np.zeros((2, 4)))
