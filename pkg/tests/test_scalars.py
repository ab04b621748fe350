"""Unit tests for the exact coefficient ring."""

import math
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from superdeform import RadicalNumber, Scalar, ScalarContext
from superdeform.scalars import (merge_odd_indices, squarefree_decompose,
                                 theta_divisibility)

from conftest import radical_float, scalar_float


def test_squarefree_decompose_small():
    assert squarefree_decompose(1) == (1, 1)
    assert squarefree_decompose(4) == (2, 1)
    assert squarefree_decompose(12) == (2, 3)
    assert squarefree_decompose(360) == (6, 10)
    with pytest.raises(ValueError):
        squarefree_decompose(0)


@given(st.integers(min_value=1, max_value=10_000))
def test_squarefree_decompose_property(n):
    outer, core = squarefree_decompose(n)
    assert outer * outer * core == n
    for d in range(2, int(math.isqrt(core)) + 1):
        assert core % (d * d) != 0


def test_radical_products_reduce():
    a = RadicalNumber.sqrt_int(2)
    b = RadicalNumber.sqrt_int(8)
    assert (a * b).rational_value() == 4
    assert RadicalNumber.sqrt_pi() * RadicalNumber.sqrt_pi() == \
        RadicalNumber.pi_power(1)


@given(st.integers(min_value=1, max_value=50),
       st.integers(min_value=1, max_value=50),
       st.fractions(min_value=-5, max_value=5),
       st.fractions(min_value=-5, max_value=5))
@settings(max_examples=60)
def test_radical_arithmetic_matches_floats(r1, r2, q1, q2):
    a = RadicalNumber.sqrt_int(r1, q1) + RadicalNumber.pi_power(1, q2)
    b = RadicalNumber.sqrt_int(r2, q2) + RadicalNumber.sqrt_pi(q1)
    assert radical_float(a * b) == pytest.approx(
        radical_float(a) * radical_float(b))
    assert radical_float(a + b) == pytest.approx(
        radical_float(a) + radical_float(b))
    assert radical_float(a - b) == pytest.approx(
        radical_float(a) - radical_float(b))


def test_merge_odd_indices_signs():
    assert merge_odd_indices((1,), (2,)) == (1, (1, 2))
    assert merge_odd_indices((2,), (1,)) == (-1, (1, 2))
    assert merge_odd_indices((1,), (1,)) == (0, None)
    assert merge_odd_indices((2, 3), (1,)) == (1, (1, 2, 3))


def test_theta_square_is_zero():
    ctx = ScalarContext(k=2, h_max=6)
    t1 = Scalar.theta(ctx, 1)
    t2 = Scalar.theta(ctx, 2)
    assert (t1 * t1).is_zero()
    assert t1 * t2 == -(t2 * t1)


def test_hbar_truncation():
    ctx = ScalarContext(k=0, h_max=4)
    h = Scalar.hbar(ctx)
    assert (h ** 5).is_zero()
    assert not (h ** 4).is_zero()
    assert (h ** 3).truncate(2).is_zero()


def test_parity_and_split():
    ctx = ScalarContext(k=2, h_max=6)
    s = Scalar.one(ctx) + Scalar.theta(ctx, 1) * Scalar.theta(ctx, 2)
    t = Scalar.theta(ctx, 1)
    assert s.parity() == 0
    assert t.parity() == 1
    assert (s + t).parity() is None
    even, odd = (s + t).split_theta_parity()
    assert even == s and odd == t


def test_theta_twist_sign():
    ctx = ScalarContext(k=1, h_max=6)
    t = Scalar.theta(ctx, 1)
    assert t.theta_twist(1) == -t
    assert t.theta_twist(2) == t
    assert Scalar.one(ctx).theta_twist(1) == Scalar.one(ctx)


def test_is_even_series():
    ctx = ScalarContext(k=0, h_max=6)
    h = Scalar.hbar(ctx)
    assert (h ** 2 + h ** 4).is_even_series(2)
    assert not (h ** 2).is_even_series(4)
    assert not (h ** 3).is_even_series(0)
    assert Scalar.zero(ctx).is_even_series(2)


def test_scalar_float_oracle():
    ctx = ScalarContext(k=0, h_max=6)
    s = Scalar.pi(ctx) * 2 + Scalar.hbar(ctx, 2, 3) * Scalar.sqrt(ctx, 2)
    assert scalar_float(s, hbar=0.5) == pytest.approx(
        2 * math.pi + 3 * 0.25 * math.sqrt(2))


def test_rational_value_errors():
    ctx = ScalarContext(k=1, h_max=6)
    assert Scalar.rational(ctx, Fraction(3, 2)).rational_value() == \
        Fraction(3, 2)
    with pytest.raises(ValueError):
        Scalar.hbar(ctx).rational_value()
    with pytest.raises(ValueError):
        Scalar.sqrt(ctx, 2).rational_value()


def test_theta_divisibility_witness():
    ctx = ScalarContext(k=2, h_max=6)
    t1, t2 = Scalar.theta(ctx, 1), Scalar.theta(ctx, 2)
    a = t1 * (Scalar.rational(ctx, 3) + t2)
    z = theta_divisibility(a, 1)
    assert z is not None and t1 * z == a
    assert theta_divisibility(Scalar.one(ctx), 1) is None


def test_render_basics():
    ctx = ScalarContext(k=2, h_max=6)
    assert Scalar.zero(ctx).render() == "0"
    assert Scalar.rational(ctx, -1).render() == "-1"
    assert (Scalar.hbar(ctx, 2) * Scalar.theta(ctx, 1)).render() == \
        "hbar^2*th1"
    s = Scalar.rational(ctx, 2) - Scalar.pi(ctx)
    assert s.render() == "2 - pi"
