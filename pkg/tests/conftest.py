"""Shared fixtures and independent oracles for the test suite."""

import itertools
import math
import random
from fractions import Fraction

import pytest

from superdeform import (Scalar, SuperFunction, SymplecticContext, sf_mul)


@pytest.fixture
def ctx42():
    """Canonical desk-scale context (n_plus=4, n_minus=2, k=1)."""
    return SymplecticContext(4, 2, (1, 1), 1, 6)


@pytest.fixture
def ctx22():
    """Antibracket context n = 2."""
    return SymplecticContext(2, 2, (1, 1), 1, 6)


@pytest.fixture
def ctx45():
    return SymplecticContext(4, 5, (1, 1, 1, 1, 1), 2, 6)


def radical_float(rad):
    """Independent numeric value of a RadicalNumber."""
    total = 0.0
    for (p, s, r), coeff in rad.terms.items():
        total += float(coeff) * math.pi ** (p + 0.5 * s) * math.sqrt(r)
    return total


def scalar_float(scalar, hbar=0.1):
    """Numeric value of a theta-free Scalar at a chosen hbar."""
    assert scalar.is_theta_free()
    return sum(radical_float(rad) * hbar ** m
               for (m, _), rad in scalar.terms.items())


def random_superfunction(rng, ctx, max_x_degree=2, xi_degree=None,
                         gauss_pool=(0, 1, 2), terms=1, theta=False):
    """A seeded random function, parity-homogeneous when xi_degree is set."""
    out = SuperFunction.zero(ctx)
    for _ in range(terms):
        xexp = tuple(rng.randint(0, max_x_degree)
                     for _ in range(ctx.n_plus))
        c = Fraction(rng.choice(gauss_pool))
        deg = xi_degree if xi_degree is not None \
            else rng.randint(0, min(2, ctx.n_minus))
        xi = tuple(sorted(rng.sample(range(1, ctx.n_minus + 1), deg)))
        s = Scalar.rational(ctx.scalar_ctx, rng.choice(
            [-3, -2, -1, 1, 2, 3]))
        if theta and rng.random() < 0.5:
            s = s * Scalar.theta(ctx.scalar_ctx, 1)
        out = out + SuperFunction(ctx, {(xexp, c, xi): s})
    return out


def naive_bidiff(f, g, p):
    """Word-by-word oracle for the p-th bidifferential power.

    Enumerates all channel words of length p with plain nested derivatives;
    exponential in p, used only on small inputs.
    """
    ctx = f.ctx
    out = SuperFunction.zero(ctx)
    for word in itertools.product(ctx.omega_channels(), repeat=p):
        F, G = f, g
        weight = 1
        alive = True
        for a, b, w in word:
            F = F.right_deriv(a)
            if F.is_zero():
                alive = False
                break
            G = G.left_deriv(b)
            if G.is_zero():
                alive = False
                break
            weight *= w
        if alive:
            out = out + sf_mul(F, G) * weight
    return out


def seeded(seed):
    return random.Random(seed)
