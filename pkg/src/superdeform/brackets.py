"""The three bracket structures: Poisson superbracket, antibracket, and the
Moyal-type superbracket given by the odd part of the exponential series of
the symplectic bidifferential operator.

The iterated bidifferential is organized by channel multisets: derivatives
along different metric channels commute, so the p-th power is a sum over
multisets M of channels weighted by p!/prod(m_ch!).  The enumeration walks
the channels in a fixed order, sharing derivative chains along the way, and
keeps the seed Scalar coefficients factored out so the inner loop is plain
rational arithmetic on monomial dictionaries.  Because the symplectic metric
only couples variables of equal parity, the iteration picks up no Koszul
signs between steps; the exterior-algebra signs of the seed scalars are
restored when the two sides are multiplied back together.
"""

from __future__ import annotations

from fractions import Fraction

from .scalars import Scalar
from .superfunc import SuperFunction, sf_mul


def poisson_bracket(f, g):
    """Sum over the metric channels of (f <-d_a) omega^{ab} (d_b g)."""
    f._check(g)
    out = SuperFunction.zero(f.ctx)
    for a, b, w in f.ctx.omega_channels():
        fa = f.right_deriv(a)
        if fa.is_zero():
            continue
        gb = g.left_deriv(b)
        if gb.is_zero():
            continue
        prod = sf_mul(fa, gb)
        out = out + (prod if w == 1 else -prod)
    return out


def antibracket(f, g):
    """The odd bracket pairing x_i with xi_i; needs n_plus == n_minus."""
    f._check(g)
    ctx = f.ctx
    if ctx.n_plus != ctx.n_minus:
        raise ValueError("antibracket requires n_plus == n_minus")
    out = SuperFunction.zero(ctx)
    for i in range(ctx.n_plus):
        xi_i = ctx.n_plus + i
        out = out + sf_mul(f.right_deriv(i), g.left_deriv(xi_i))
        out = out - sf_mul(f.right_deriv(xi_i), g.left_deriv(i))
    return out


# -- factored multiset enumeration -----------------------------------------
#
# A "poly" is a dict mapping (x_exponents, gauss_weight, xi_indices) to a
# rational coefficient; the Scalar of the seed term is carried separately.


def _poly_deriv(poly, a, ctx, right, g_parity=0):
    """Derivative of a poly side.

    The f-side uses right derivatives, whose odd-variable sign
    (-1)^(xi_degree + position + 1) does not depend on the seed scalar.
    The g-side uses left derivatives, where passing the seed scalar's theta
    part contributes (-1)^g_parity per odd derivative.  Coefficients and
    Gaussian weights stay plain ints whenever they are integral.
    """
    out = {}
    if a < ctx.n_plus:
        for (xexp, c, xi), coeff in poly.items():
            e = xexp[a]
            if e > 0:
                key = (xexp[:a] + (e - 1,) + xexp[a + 1:], c, xi)
                q = coeff * e
                if key in out:
                    q += out[key]
                if q:
                    out[key] = q
                elif key in out:
                    del out[key]
            if c:
                key = (xexp[:a] + (e + 1,) + xexp[a + 1:], c, xi)
                q = -coeff * c
                if key in out:
                    q += out[key]
                if q:
                    out[key] = q
                elif key in out:
                    del out[key]
    else:
        gen = a - ctx.n_plus + 1
        for (xexp, c, xi), coeff in poly.items():
            if gen not in xi:
                continue
            pos = xi.index(gen)
            rest = xi[:pos] + xi[pos + 1:]
            if right:
                odd = (len(xi) + pos + 1) & 1
            else:
                odd = (g_parity + pos) & 1
            out[(xexp, c, rest)] = -coeff if odd else coeff
    return out


def _contract_into(acc, fpoly, gpoly, coeff, p):
    """Accumulate the product of the two sides into ``acc``, keyed by the
    combined monomial, the f-side xi parity, and the power p."""
    for (xe1, c1, xi1), q1 in fpoly.items():
        par = len(xi1) & 1
        cq1 = coeff * q1
        s1 = set(xi1)
        for (xe2, c2, xi2), q2 in gpoly.items():
            if xi2:
                if s1 & set(xi2):
                    continue
                inv = sum(1 for i in xi1 for j in xi2 if i > j)
                q = cq1 * q2 if inv % 2 == 0 else -cq1 * q2
                xi = tuple(sorted(xi1 + xi2))
            else:
                q = cq1 * q2
                xi = xi1
            key = (tuple(map(sum, zip(xe1, xe2))), c1 + c2, xi, par, p)
            if key in acc:
                q += acc[key]
                if q:
                    acc[key] = q
                else:
                    del acc[key]
            else:
                acc[key] = q


def _expand(ctx, channels, ci, fpoly, gpoly, coeff, p, p_max, emit, acc,
            g_parity):
    """Extend the current multiset by channels of index >= ci.

    ``coeff`` already carries the metric weights and the 1/prod(m_ch!)
    multiplicity factor of the multiset built so far.
    """
    for j in range(ci, len(channels)):
        a, b, w = channels[j]
        cf, cg = fpoly, gpoly
        c = coeff
        m = 0
        while p + m < p_max:
            cf = _poly_deriv(cf, a, ctx, True)
            if not cf:
                break
            cg = _poly_deriv(cg, b, ctx, False, g_parity)
            if not cg:
                break
            m += 1
            c = c * w
            if m > 1:
                c = Fraction(c, m) if isinstance(c, int) else c / m
            if emit(p + m):
                _contract_into(acc, cf, cg, c, p + m)
            _expand(ctx, channels, j + 1, cf, cg, c, p + m, p_max, emit,
                    acc, g_parity)


def _seed_pairs(f, g):
    """Split (f, g) into seed term pairs with theta-homogeneous g scalars."""
    fseeds = list(f.terms.items())
    gseeds = []
    for key, s in g.terms.items():
        even, odd = s.split_theta_parity()
        if not even.is_zero():
            gseeds.append((key, even, 0))
        if not odd.is_zero():
            gseeds.append((key, odd, 1))
    return fseeds, gseeds


def _iterate_pairs(f, g, emit, p_cap, weights):
    """Accumulate over all seed pairs and channel multisets.

    ``emit(p)`` says whether power p contributes, ``p_cap(min_h)`` bounds
    the multiset size for seeds of minimal h-degree min_h, and
    ``weights(p)`` gives the Scalar weight of power p (on top of the
    multiplicity factor already in the rational coefficients).
    """
    ctx = f.ctx
    channels = ctx.omega_channels()
    out = SuperFunction.zero(ctx)
    fseeds, gseeds = _seed_pairs(f, g)
    for fkey, fs in fseeds:
        f_min = fs.hbar_min_degree()
        if f_min is None:
            continue
        for gkey, gs, gw in gseeds:
            g_min = gs.hbar_min_degree()
            if g_min is None:
                continue
            p_max = p_cap(f_min + g_min)
            if p_max < 1:
                continue
            fc = fkey[1]
            if fc.denominator == 1:
                fkey = (fkey[0], fc.numerator, fkey[2])
            gc = gkey[1]
            if gc.denominator == 1:
                gkey = (gkey[0], gc.numerator, gkey[2])
            acc = {}
            _expand(ctx, channels, 0, {fkey: 1}, {gkey: 1}, 1, 0,
                    p_max + 1, emit, acc, gw)
            if not acc:
                continue
            prod = (fs * gs, fs * gs.theta_twist(1))
            piece = {}
            for (xexp, c, xi, par, p), q in acc.items():
                scalar = weights(p) * (prod[par] * q)
                if scalar.is_zero():
                    continue
                key = (xexp, Fraction(c), xi)
                if key in piece:
                    piece[key] = piece[key] + scalar
                else:
                    piece[key] = scalar
            piece = {k: s for k, s in piece.items() if not s.is_zero()}
            if piece:
                out = out + SuperFunction(ctx, piece)
    return out


def bidiff_power(f, g, p):
    """The p-th power of the symplectic bidifferential applied to (f, g)."""
    if p < 1:
        raise ValueError("the bidifferential power must be at least 1")
    f._check(g)
    sctx = f.ctx.scalar_ctx
    weight = Scalar.rational(sctx, 1)
    for m in range(1, p + 1):
        weight = weight * m
    return _iterate_pairs(f, g,
                          emit=lambda q: q == p,
                          p_cap=lambda min_h: p,
                          weights=lambda q: weight)


def moyal_bracket(f, g, kappa=1):
    """Deformed bracket: sum over odd p of (h kappa)^(p-1)/p! times the p-th
    bidifferential power, truncated at the context order.

    kappa must be a theta-free series; at truncation order 0 the bracket
    reduces to the Poisson bracket.
    """
    f._check(g)
    ctx = f.ctx
    sctx = ctx.scalar_ctx
    if not isinstance(kappa, Scalar):
        kappa = Scalar.rational(sctx, kappa)
    if not kappa.is_theta_free():
        raise ValueError("kappa must be theta-free")
    hk = Scalar.hbar(sctx) * kappa
    hk_degree = hk.hbar_min_degree()
    hk_powers = {0: Scalar.one(sctx)}

    def weights(p):
        e = p - 1
        if e not in hk_powers:
            hk_powers[e] = weights(p - 2) * hk * hk
        return hk_powers[e]

    def p_cap(min_h):
        if hk_degree is None:
            return 1
        p = 1
        while (p + 1) * hk_degree + min_h <= ctx.h_max:
            p += 2
        return p

    return _iterate_pairs(f, g,
                          emit=lambda q: q % 2 == 1,
                          p_cap=p_cap,
                          weights=weights)
