"""Unit tests for the cochain calculus: forms, Jacobiator, differential."""

from fractions import Fraction

import pytest

from superdeform import (ArityError, Scalar, SuperFunction, anti_form, d_ad,
                         jacobiator, jzeta_form, m0_form, m1_form, m23_form,
                         m3_form, moyal_form, mu_form, mzeta_form,
                         poisson_bracket)
from superdeform.cochains import (EVEN, ODD, FunctionScaledCochain,
                                  ScaledCochain, SumCochain, grading_parity)

from conftest import random_superfunction, seeded


def rand_d(rng, ctx, terms=1):
    """A D-class sample (every term Gaussian-suppressed)."""
    return random_superfunction(rng, ctx, gauss_pool=(1, 2),
                                xi_degree=rng.randint(0, min(2, ctx.n_minus)),
                                terms=terms)


def test_leaf_metadata(ctx42):
    assert m0_form(ctx42).parity == 0
    assert m3_form(ctx42).parity == ctx42.n_minus % 2
    assert m1_form(ctx42).arity == 2
    assert mu_form(ctx42).parity == 0


def test_scaled_cochain_parity(ctx42):
    theta = Scalar.theta(ctx42.scalar_ctx, 1)
    scaled = ScaledCochain(theta, m3_form(ctx42))
    assert scaled.parity == (m3_form(ctx42).parity + 1) % 2
    f = SuperFunction.gauss(ctx42, 1)
    g = SuperFunction.term(ctx42, c=1, xi=(1, 2))
    assert scaled.evaluate(f, g) == \
        m3_form(ctx42).evaluate(f, g).scale_left(theta)


def test_sum_cochain_arity_mismatch(ctx42):
    with pytest.raises(ArityError):
        SumCochain(m0_form(ctx42), jacobiator(m0_form(ctx42)))


def test_arity_checked_on_evaluate(ctx42):
    f = SuperFunction.x(ctx42, 1)
    with pytest.raises(ArityError):
        m0_form(ctx42).evaluate(f)


def test_function_scaled_cochain(ctx42):
    eta = SuperFunction.x(ctx42, 1)
    form = FunctionScaledCochain(eta, mu_form(ctx42))
    f = SuperFunction.term(ctx42, c=1, xi=(1, 2))
    g = SuperFunction.term(ctx42, c=2, xi=(1, 2))
    value = mu_form(ctx42).evaluate(f, g)
    assert len(value.terms) == 1
    scalar = next(iter(value.terms.values()))
    # the mu value is a constant; the prefactor multiplies it from the left
    assert form.evaluate(f, g) == eta.scale_right(scalar)


def test_jacobiator_of_poisson_vanishes(ctx42):
    J = jacobiator(m0_form(ctx42))
    rng = seeded(43)
    for _ in range(8):
        f, g, h = (random_superfunction(
            rng, ctx42, xi_degree=rng.randint(0, 2), theta=True)
            for _ in range(3))
        assert J.evaluate(f, g, h).is_zero()


def test_jacobiator_matches_cyclic_sum(ctx42):
    # independent expansion of the single-sum Jacobiator
    J = jacobiator(m1_form(ctx42))
    m1 = m1_form(ctx42)
    rng = seeded(45)
    for _ in range(4):
        f, g, h = (rand_d(rng, ctx42) for _ in range(3))
        expect = SuperFunction.zero(ctx42)
        for a, b, c in ((f, g, h), (g, h, f), (h, f, g)):
            sign = (-1) ** (a.eps() * c.eps())
            expect = expect + m1.evaluate(m1.evaluate(a, b), c) * sign
        assert J.evaluate(f, g, h) == expect


def test_two_argument_jacobiator_symmetry(ctx42):
    p, q = m1_form(ctx42), m3_form(ctx42)
    rng = seeded(47)
    f, g, h = (rand_d(rng, ctx42) for _ in range(3))
    assert jacobiator(p, q).evaluate(f, g, h) == \
        jacobiator(q, p).evaluate(f, g, h)


def test_m3_is_a_cocycle(ctx42):
    d = d_ad(m3_form(ctx42))
    rng = seeded(49)
    for _ in range(6):
        assert d.evaluate(rand_d(rng, ctx42), rand_d(rng, ctx42),
                          rand_d(rng, ctx42)).is_zero()


def test_mzeta_is_a_cocycle(ctx42):
    zeta = SuperFunction.term(ctx42, (1, 1, 0, 0), scalar=2)
    d = d_ad(mzeta_form(ctx42, zeta))
    rng = seeded(51)
    for _ in range(5):
        assert d.evaluate(rand_d(rng, ctx42), rand_d(rng, ctx42),
                          rand_d(rng, ctx42)).is_zero()


def test_m23_is_an_antibracket_cocycle(ctx22):
    d = d_ad(m23_form(ctx22), bracket=anti_form(ctx22))
    rng = seeded(53)
    for _ in range(6):
        args = [random_superfunction(rng, ctx22,
                                     xi_degree=rng.randint(0, 2))
                for _ in range(3)]
        assert d.evaluate(*args).is_zero()


def test_cross_identity_many_cochains(ctx42):
    # -(-1)^{eps(f) eps(h)} J(p, m0) = d2_ad p, for assorted 2-cochains p
    m0 = m0_form(ctx42)
    zeta = SuperFunction.term(ctx42, (0, 1, 0, 0), scalar=3)
    cochains = [m1_form(ctx42), m3_form(ctx42), mu_form(ctx42),
                mzeta_form(ctx42, zeta), jzeta_form(ctx42, zeta),
                ScaledCochain(Scalar.hbar(ctx42.scalar_ctx, 2),
                              m3_form(ctx42))]
    rng = seeded(55)
    for p in cochains:
        J = jacobiator(p, m0)
        d = d_ad(p)
        for _ in range(4):
            f, g, h = (rand_d(rng, ctx42) for _ in range(3))
            lhs = J.evaluate(f, g, h) * (-((-1) ** (f.eps() * h.eps())))
            assert lhs == d.evaluate(f, g, h)


def test_d_squared_vanishes(ctx42):
    rng = seeded(57)
    dd = d_ad(d_ad(m3_form(ctx42)))
    for _ in range(2):
        args = [rand_d(rng, ctx42) for _ in range(4)]
        assert dd.evaluate(*args).is_zero()


def test_d_squared_vanishes_odd(ctx22):
    rng = seeded(59)
    anti = anti_form(ctx22)
    dd = d_ad(d_ad(m23_form(ctx22), bracket=anti), bracket=anti)
    for _ in range(2):
        args = [random_superfunction(rng, ctx22,
                                     xi_degree=rng.randint(0, 2))
                for _ in range(4)]
        assert dd.evaluate(*args).is_zero()


def test_moyal_form_jacobiator(ctx42):
    J = jacobiator(moyal_form(ctx42, 1))
    rng = seeded(61)
    f, g, h = (rand_d(rng, ctx42) for _ in range(3))
    assert J.evaluate(f, g, h).is_zero()


def test_grading_parity_helper(ctx42):
    f = SuperFunction.xi(ctx42, 1)
    assert grading_parity(f, EVEN) == 1
    assert grading_parity(f, ODD) == 0


def test_m23_spec_values(ctx22):
    # [xi1, x1]* contribution: (1-N_xi)xi1 = 0 so only the plain bracket
    m23 = m23_form(ctx22)
    one = SuperFunction.constant(ctx22, 1)
    assert m23.evaluate(one, one) == one
    xi1 = SuperFunction.xi(ctx22, 1)
    assert m23.evaluate(xi1, one).is_zero()


def test_evaluation_linearity(ctx42):
    rng = seeded(63)
    m3 = m3_form(ctx42)
    f, g, h = (rand_d(rng, ctx42) for _ in range(3))
    lhs = m3.evaluate(f + g * Fraction(2), h)
    assert lhs == m3.evaluate(f, h) + m3.evaluate(g, h) * 2
