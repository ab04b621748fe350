"""Graded multilinear skew forms as evaluable trees.

A cochain knows its arity, its declared parity, and which grading its signs
use ('even' for the Poisson bracket parity, 'odd' for the reversed parity of
the antibracket).  Leaves are concrete bilinear forms; nodes are scalar
multiples (which is also how theta-prefixing is expressed), sums, and
function multiples.  Evaluation always decomposes arguments into
parity-homogeneous components first, since the sign factors are only
defined there.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import product

from .brackets import antibracket, bidiff_power, moyal_bracket, poisson_bracket
from .errors import ArityError
from .scalars import Scalar
from .superfunc import SuperFunction, sf_mul

EVEN, ODD = "even", "odd"


def grading_parity(f, grading):
    """The parity of a homogeneous function in the chosen grading."""
    return f.eps() if grading == EVEN else f.epsilon()


class Cochain:
    """Base class: a graded p-linear skew form."""

    def __init__(self, ctx, arity, parity, grading=EVEN, name=None):
        self.ctx = ctx
        self.arity = arity
        self.parity = parity
        self.grading = grading
        self.name = name or type(self).__name__
        self._cache = {}

    def evaluate(self, *args):
        if len(args) == 1 and isinstance(args[0], (list, tuple)):
            args = tuple(args[0])
        if len(args) != self.arity:
            raise ArityError(
                f"{self.name} expects {self.arity} arguments, got {len(args)}")
        key = tuple(arg.freeze() for arg in args)
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        out = SuperFunction.zero(self.ctx)
        pieces = [arg.homogeneous_components() for arg in args]
        for combo in product(*pieces):
            out = out + self._eval_homogeneous(combo)
        if len(self._cache) > 4096:
            self._cache.clear()
        self._cache[key] = out
        return out

    __call__ = evaluate

    def _eval_homogeneous(self, args):
        raise NotImplementedError

    # -- tree combinators --------------------------------------------------

    def __add__(self, other):
        return SumCochain(self, other)

    def __sub__(self, other):
        return SumCochain(self, ScaledCochain(-1, other))

    def __neg__(self):
        return ScaledCochain(-1, self)

    def scaled(self, scalar):
        """Left scalar multiple; with an odd scalar this is theta-prefixing."""
        return ScaledCochain(scalar, self)

    def __repr__(self):
        return f"<{self.name}: arity {self.arity}, parity {self.parity}>"


class LeafForm(Cochain):
    """Concrete form; ``fn`` receives parity-homogeneous arguments."""

    def __init__(self, ctx, arity, parity, fn, grading=EVEN, name=None):
        super().__init__(ctx, arity, parity, grading, name)
        self.fn = fn

    def _eval_homogeneous(self, args):
        return self.fn(*args)


class ScaledCochain(Cochain):
    def __init__(self, scalar, inner):
        if not isinstance(scalar, Scalar):
            scalar = Scalar.rational(inner.ctx.scalar_ctx, scalar)
        weight = scalar.parity()
        parity = None
        if inner.parity is not None and weight is not None:
            parity = (inner.parity + weight) % 2
        super().__init__(inner.ctx, inner.arity, parity, inner.grading,
                         name=f"scaled({inner.name})")
        self.scalar = scalar
        self.inner = inner

    def _eval_homogeneous(self, args):
        return self.inner._eval_homogeneous(args).scale_left(self.scalar)


class SumCochain(Cochain):
    def __init__(self, *parts):
        flat = []
        for part in parts:
            if isinstance(part, SumCochain):
                flat.extend(part.parts)
            else:
                flat.append(part)
        first = flat[0]
        if any(p.arity != first.arity for p in flat):
            raise ArityError("summands must share one arity")
        parities = {p.parity for p in flat}
        parity = parities.pop() if len(parities) == 1 else None
        super().__init__(first.ctx, first.arity, parity, first.grading,
                         name="+".join(p.name for p in flat))
        self.parts = flat

    def _eval_homogeneous(self, args):
        out = SuperFunction.zero(self.ctx)
        for part in self.parts:
            out = out + part._eval_homogeneous(args)
        return out


class FunctionScaledCochain(Cochain):
    """A fixed function times a form, as in eta(z) times the bar-pairing."""

    def __init__(self, prefactor, inner):
        parity = None
        pf = prefactor.eps()
        if inner.parity is not None and pf is not None:
            parity = (inner.parity + pf) % 2
        super().__init__(inner.ctx, inner.arity, parity, inner.grading,
                         name=f"({prefactor})*{inner.name}")
        self.prefactor = prefactor
        self.inner = inner

    def _eval_homogeneous(self, args):
        value = self.inner._eval_homogeneous(args)
        out = SuperFunction.zero(self.ctx)
        for part in value.homogeneous_components():
            # the value must pass to the right of the prefactor; for the
            # named forms it is a constant, so only scalars are supported
            zero_x = (0,) * self.ctx.n_plus
            for (xexp, c, xi), s in part.terms.items():
                if (xexp, c, xi) != (zero_x, Fraction(0), ()):
                    raise ValueError(
                        "function-scaled cochain needs a scalar-valued form")
                out = out + self.prefactor.scale_right(s)
        return out


def eval_form(form, args):
    return form.evaluate(*args)


# -- named leaves ----------------------------------------------------------

def m0_form(ctx):
    return LeafForm(ctx, 2, 0, poisson_bracket, EVEN, name="m0")


def anti_form(ctx):
    return LeafForm(ctx, 2, 0, antibracket, ODD, name="anti")


def moyal_form(ctx, kappa=1):
    return LeafForm(ctx, 2, 0,
                    lambda f, g: moyal_bracket(f, g, kappa),
                    EVEN, name="moyal")


def m1_form(ctx):
    """First deformation correction: one sixth of the cubic bidifferential."""
    return LeafForm(ctx, 2, 0,
                    lambda f, g: bidiff_power(f, g, 3) * Fraction(1, 6),
                    EVEN, name="m1")


def m3_form(ctx):
    n_minus = ctx.n_minus

    def fn(f, g):
        ef, eg = f.eps(), g.eps()
        fbar = f.integral_bar(mod_centralizer=True)
        gbar = g.integral_bar(mod_centralizer=True)
        left = f.euler_E().scale_right(gbar) * ((-1) ** (n_minus * ef))
        right = g.euler_E().scale_right(fbar) * (
            (-1) ** (ef * eg + n_minus * eg))
        return left - right

    return LeafForm(ctx, 2, n_minus % 2, fn, EVEN, name="m3")


def mzeta_form(ctx, zeta):
    n_minus = ctx.n_minus
    zp = zeta.eps()
    parity = None if zp is None else (zp + n_minus) % 2

    def fn(f, g):
        ef, eg = f.eps(), g.eps()
        fbar = f.integral_bar(mod_centralizer=True)
        gbar = g.integral_bar(mod_centralizer=True)
        left = poisson_bracket(zeta, f).scale_right(gbar) * (
            (-1) ** (n_minus * ef))
        right = poisson_bracket(zeta, g).scale_right(fbar) * (
            (-1) ** (ef * eg + n_minus * eg))
        return left - right

    return LeafForm(ctx, 2, parity, fn, EVEN, name="mzeta")


def m23_form(ctx):
    """The odd antibracket cocycle built from 1 - N_xi."""
    if ctx.n_plus != ctx.n_minus:
        raise ValueError("this form requires n_plus == n_minus")

    def one_minus_nxi(f):
        return f - f.number_xi()

    def fn(f, g):
        sign = (-1) ** f.eps()
        return sf_mul(one_minus_nxi(f), one_minus_nxi(g)) * sign

    return LeafForm(ctx, 2, 1, fn, ODD, name="m23")


def jzeta_form(ctx, zeta):
    n_minus = ctx.n_minus
    zp = zeta.eps()
    parity = None if zp is None else (zp + n_minus) % 2

    def m1(a, b):
        return bidiff_power(a, b, 3) * Fraction(1, 6)

    def fn(f, g):
        ef, eg = f.eps(), g.eps()
        fbar = f.integral_bar(mod_centralizer=True)
        gbar = g.integral_bar(mod_centralizer=True)
        left = m1(zeta, f).scale_right(gbar) * ((-1) ** (n_minus * ef))
        right = m1(zeta, g).scale_right(fbar) * (
            (-1) ** (ef * eg + n_minus * eg))
        return left - right

    return LeafForm(ctx, 2, parity, fn, EVEN, name="jzeta")


def mu_form(ctx):
    def fn(f, g):
        fbar = f.integral_bar(mod_centralizer=True)
        gbar = g.integral_bar(mod_centralizer=True)
        value = (fbar * gbar) * ((-1) ** f.eps())
        return SuperFunction.constant(ctx, value)

    return LeafForm(ctx, 2, 0, fn, EVEN, name="mu")


# -- Jacobiator and the adjoint differential -------------------------------

def jacobiator(p, q=None, grading=None):
    """The trilinear obstruction built from one or two 2-cochains.

    With one argument it is the single-sum form; with two it symmetrizes
    over both orders of nesting.  Signs use the grading of ``p`` unless
    overridden.
    """
    if p.arity != 2 or (q is not None and q.arity != 2):
        raise ArityError("Jacobiators take 2-cochains")
    grading = grading or p.grading
    ctx = p.ctx

    def fn(f, g, h):
        out = SuperFunction.zero(ctx)
        for a, b, c in ((f, g, h), (g, h, f), (h, f, g)):
            pa, pc = grading_parity(a, grading), grading_parity(c, grading)
            sign = (-1) ** (pa * pc)
            if q is None:
                nested = p.evaluate(p.evaluate(a, b), c)
            else:
                nested = p.evaluate(q.evaluate(a, b), c) + \
                    q.evaluate(p.evaluate(a, b), c)
            out = out + (nested if sign == 1 else -nested)
        return out

    name = f"J({p.name},{q.name})" if q is not None else f"J({p.name})"
    return LeafForm(ctx, 3, None, fn, grading, name=name)


def d_ad(m, bracket=None, grading=None):
    """The cochain differential with coefficients in the adjoint action.

    ``bracket`` defaults to the Poisson bracket; pass the antibracket (with
    grading 'odd') for the reversed-parity theory.  ``m`` must have a
    defined parity.
    """
    if m.parity is None:
        raise ValueError(f"{m.name} has undefined parity")
    ctx = m.ctx
    if bracket is None:
        bracket = m0_form(ctx)
    grading = grading or m.grading
    p = m.arity
    m_parity = m.parity

    def fn(*fs):
        parities = [grading_parity(f, grading) for f in fs]

        def psum(i, j):
            # inclusive 1-based range i..j of argument parities
            return sum(parities[i - 1:j])

        out = SuperFunction.zero(ctx)
        for j in range(1, p + 2):
            rest = fs[:j - 1] + fs[j:]
            sign = (-1) ** (j + parities[j - 1] * psum(1, j - 1)
                            + parities[j - 1] * m_parity)
            term = bracket.evaluate(fs[j - 1], m.evaluate(*rest))
            out = out - (term if sign == 1 else -term)
        for i in range(1, p + 1):
            for j in range(i + 1, p + 2):
                sign = (-1) ** (j + parities[j - 1] * psum(i + 1, j - 1))
                br = bracket.evaluate(fs[i - 1], fs[j - 1])
                inner_args = (fs[:i - 1] + (br,) + fs[i:j - 1] + fs[j:])
                term = m.evaluate(*inner_args)
                out = out - (term if sign == 1 else -term)
        return out

    return LeafForm(ctx, p + 1, m_parity, fn, grading, name=f"d({m.name})")
