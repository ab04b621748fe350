"""Gaussian-weighted polynomial superfunctions over a symplectic context.

A SuperFunction is a finite sum of terms

    s * x1^e1 ... xn^en * exp(-(c/2)|x|^2) * xi_{i1}*...*xi_{ip}

with s an exact Scalar (which may carry theta generators), nonnegative
rational Gaussian weight c, and the xi monomial stored in increasing index
order with all signs absorbed into s.  Theta factors stand to the left of
the xi monomial; Koszul signs for moving odd objects past each other are
applied explicitly by every operation.

Compactly supported functions are modeled by the terms with c > 0, smooth
functions by arbitrary terms, and the centralizer of the compactly
supported class consists of the constants.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import ContextMismatchError, NotIntegrableError
from .scalars import RadicalNumber, Scalar, ScalarContext, squarefree_decompose


class SymplecticContext:
    """Fixed data of the algebra: dimensions, metric signs, truncation."""

    __slots__ = ("n_plus", "n_minus", "lambdas", "k", "h_max", "scalar_ctx")

    def __init__(self, n_plus, n_minus, lambdas=None, k=0, h_max=6):
        if n_plus % 2 != 0 or n_plus < 0:
            raise ValueError("n_plus must be even and nonnegative")
        if n_minus < 0:
            raise ValueError("n_minus must be nonnegative")
        if lambdas is None:
            lambdas = (1,) * n_minus
        lambdas = tuple(lambdas)
        if len(lambdas) != n_minus or any(s not in (1, -1) for s in lambdas):
            raise ValueError("lambdas must be a +-1 vector of length n_minus")
        self.n_plus = n_plus
        self.n_minus = n_minus
        self.lambdas = lambdas
        self.k = k
        self.h_max = h_max
        self.scalar_ctx = ScalarContext(k=k, h_max=h_max)

    @property
    def n_z(self):
        return self.n_plus + self.n_minus

    def eps_var(self, a):
        """Grassmann parity of the collective variable z_a (0-based)."""
        return 0 if a < self.n_plus else 1

    def omega_channels(self):
        """Nonzero entries (a, b, weight) of the symplectic metric.

        x-block: canonical symplectic pairs (x1,x2), (x3,x4), ...;
        xi-block: lambda_alpha on the diagonal.
        """
        channels = []
        for m in range(self.n_plus // 2):
            channels.append((2 * m, 2 * m + 1, 1))
            channels.append((2 * m + 1, 2 * m, -1))
        for alpha in range(self.n_minus):
            a = self.n_plus + alpha
            channels.append((a, a, self.lambdas[alpha]))
        return channels

    def __eq__(self, other):
        return (isinstance(other, SymplecticContext)
                and self.n_plus == other.n_plus
                and self.n_minus == other.n_minus
                and self.lambdas == other.lambdas
                and self.k == other.k
                and self.h_max == other.h_max)

    def __hash__(self):
        return hash((self.n_plus, self.n_minus, self.lambdas,
                     self.k, self.h_max))

    def __repr__(self):
        return (f"SymplecticContext(n_plus={self.n_plus}, "
                f"n_minus={self.n_minus}, lambdas={self.lambdas}, "
                f"k={self.k}, h_max={self.h_max})")


def _double_factorial_odd(p):
    """(2p - 1)!! with the empty product equal to 1."""
    result = 1
    for j in range(1, 2 * p, 2):
        result *= j
    return result


def gaussian_moment(e, c):
    """Exact value of the one-dimensional moment integral x^e exp(-c x^2 / 2).

    Odd e gives 0; even e = 2p gives (2p-1)!! c^{-p} sqrt(2 pi / c).
    """
    if e % 2:
        return RadicalNumber()
    p = e // 2
    c = Fraction(c)
    if c <= 0:
        raise NotIntegrableError("Gaussian weight must be positive")
    rational = Fraction(_double_factorial_odd(p)) / c ** p
    # sqrt(2/c) = sqrt(2 * num * den) / num for c = num/den
    outer, core = squarefree_decompose(2 * c.numerator * c.denominator)
    return RadicalNumber({(0, 1, core): rational * outer / c.numerator})


class SuperFunction:
    """Exact superfunction over a SymplecticContext.

    ``terms`` maps (x_exponents, gauss_weight, xi_indices) to a Scalar.
    """

    __slots__ = ("ctx", "terms")

    def __init__(self, ctx, terms=None):
        self.ctx = ctx
        clean = {}
        if terms:
            for key, scalar in terms.items():
                if scalar.is_zero():
                    continue
                if key in clean:
                    total = clean[key] + scalar
                    if total.is_zero():
                        del clean[key]
                    else:
                        clean[key] = total
                else:
                    clean[key] = scalar
        self.terms = clean

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, ctx):
        return cls(ctx)

    @classmethod
    def term(cls, ctx, xexp=None, c=0, xi=(), scalar=None):
        if xexp is None:
            xexp = (0,) * ctx.n_plus
        xexp = tuple(xexp)
        if len(xexp) != ctx.n_plus or any(e < 0 for e in xexp):
            raise ValueError("bad x-exponent vector")
        c = Fraction(c)
        if c < 0:
            raise ValueError("Gaussian weight must be nonnegative")
        xi = tuple(xi)
        if xi != tuple(sorted(set(xi))) or any(
                not 1 <= a <= ctx.n_minus for a in xi):
            raise ValueError("xi monomial must be sorted distinct indices")
        if scalar is None:
            scalar = Scalar.one(ctx.scalar_ctx)
        elif not isinstance(scalar, Scalar):
            scalar = Scalar.rational(ctx.scalar_ctx, scalar)
        return cls(ctx, {(xexp, c, xi): scalar})

    @classmethod
    def constant(cls, ctx, value):
        return cls.term(ctx, scalar=value if isinstance(value, Scalar)
                        else Scalar.rational(ctx.scalar_ctx, value))

    @classmethod
    def x(cls, ctx, i):
        if not 1 <= i <= ctx.n_plus:
            raise ValueError(f"x index {i} outside 1..{ctx.n_plus}")
        xexp = tuple(1 if j == i - 1 else 0 for j in range(ctx.n_plus))
        return cls.term(ctx, xexp=xexp)

    @classmethod
    def xi(cls, ctx, a):
        if not 1 <= a <= ctx.n_minus:
            raise ValueError(f"xi index {a} outside 1..{ctx.n_minus}")
        return cls.term(ctx, xi=(a,))

    @classmethod
    def gauss(cls, ctx, c):
        return cls.term(ctx, c=c)

    @classmethod
    def z_var(cls, ctx, a):
        """Collective variable z_a, 0-based over x then xi."""
        if a < ctx.n_plus:
            return cls.x(ctx, a + 1)
        return cls.xi(ctx, a - ctx.n_plus + 1)

    # -- basics ------------------------------------------------------------

    def _check(self, other):
        if self.ctx != other.ctx:
            raise ContextMismatchError(
                f"contexts differ: {self.ctx} vs {other.ctx}")

    def is_zero(self):
        return not self.terms

    def __add__(self, other):
        if not isinstance(other, SuperFunction):
            other = SuperFunction.constant(self.ctx, other)
        self._check(other)
        merged = dict(self.terms)
        for key, scalar in other.terms.items():
            if key in merged:
                total = merged[key] + scalar
                if total.is_zero():
                    del merged[key]
                else:
                    merged[key] = total
            else:
                merged[key] = scalar
        out = SuperFunction(self.ctx)
        out.terms = merged
        return out

    __radd__ = __add__

    def __neg__(self):
        out = SuperFunction(self.ctx)
        out.terms = {k: -s for k, s in self.terms.items()}
        return out

    def __sub__(self, other):
        if not isinstance(other, SuperFunction):
            other = SuperFunction.constant(self.ctx, other)
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, SuperFunction):
            return sf_mul(self, other)
        return self.scale_right(other)

    def __rmul__(self, other):
        return self.scale_left(other)

    def scale_left(self, scalar):
        """Multiply by a scalar standing to the left of every term."""
        if not isinstance(scalar, Scalar):
            scalar = Scalar.rational(self.ctx.scalar_ctx, scalar)
        return SuperFunction(self.ctx, {
            key: scalar * s for key, s in self.terms.items()})

    def scale_right(self, scalar):
        """Multiply by a scalar standing to the right of every term.

        Moving the scalar's odd theta part past the xi monomial costs the
        Koszul sign.
        """
        if not isinstance(scalar, Scalar):
            scalar = Scalar.rational(self.ctx.scalar_ctx, scalar)
        out = {}
        for (xexp, c, xi), s in self.terms.items():
            twisted = scalar.theta_twist(len(xi))
            out[(xexp, c, xi)] = s * twisted
        return SuperFunction(self.ctx, out)

    def __eq__(self, other):
        if not isinstance(other, SuperFunction):
            other = SuperFunction.constant(self.ctx, other)
        return self.ctx == other.ctx and self.terms == other.terms

    def __hash__(self):
        return hash((self.ctx, self.freeze()))

    def freeze(self):
        return tuple(sorted(
            (key, s.freeze()) for key, s in self.terms.items()))

    # -- grading -----------------------------------------------------------

    def eps(self):
        """Total Grassmann parity (xi-degree + theta-weight), or None."""
        parities = set()
        for (_, _, xi), s in self.terms.items():
            for _, alpha in s.terms:
                parities.add((len(xi) + len(alpha)) % 2)
        if not parities:
            return 0
        return parities.pop() if len(parities) == 1 else None

    def epsilon(self):
        """The reversed parity used by the odd bracket."""
        e = self.eps()
        return None if e is None else (e + 1) % 2

    def homogeneous_components(self):
        """Split into a list of nonzero parity-homogeneous functions.

        The split is by total parity, so it serves both gradings.
        """
        parts = {0: {}, 1: {}}
        for (xexp, c, xi), s in self.terms.items():
            even, odd = s.split_theta_parity()
            for w, piece in ((0, even), (1, odd)):
                if not piece.is_zero():
                    parts[(len(xi) + w) % 2][(xexp, c, xi)] = piece
        out = []
        for p in (0, 1):
            if parts[p]:
                f = SuperFunction(self.ctx)
                f.terms = parts[p]
                out.append(f)
        return out

    # -- class flags -------------------------------------------------------

    def is_d_class(self):
        """True when every term is Gaussian-suppressed (for n_plus > 0)."""
        if self.ctx.n_plus == 0:
            return True
        return all(c > 0 for (_, c, _) in self.terms)

    def is_z_class(self):
        """True when the function is Gaussian-class plus a constant."""
        zero_x = (0,) * self.ctx.n_plus
        if self.ctx.n_plus == 0:
            return True
        return all(c > 0 or (xexp == zero_x and xi == ())
                   for (xexp, c, xi) in self.terms)

    def normalize_mod_Z(self):
        """Canonical representative modulo Gaussian-class terms and constants."""
        zero_x = (0,) * self.ctx.n_plus
        if self.ctx.n_plus == 0:
            return SuperFunction.zero(self.ctx)
        out = {}
        for (xexp, c, xi), s in self.terms.items():
            if c > 0:
                continue
            if xexp == zero_x and xi == ():
                continue
            out[(xexp, c, xi)] = s
        return SuperFunction(self.ctx, out)

    # -- hbar bookkeeping --------------------------------------------------

    def hbar_min_degree(self):
        degrees = [s.hbar_min_degree() for s in self.terms.values()]
        degrees = [d for d in degrees if d is not None]
        return min(degrees, default=None)

    def hbar_coefficient(self, m):
        return SuperFunction(self.ctx, {
            key: s.hbar_coefficient(m) for key, s in self.terms.items()})

    def truncate_hbar(self, order):
        return SuperFunction(self.ctx, {
            key: s.truncate(order) for key, s in self.terms.items()})

    def theta_grade_part(self, weight):
        """Terms whose scalar theta-monomials have the given weight."""
        out = {}
        for key, s in self.terms.items():
            filtered = Scalar(s.ctx, {
                (m, alpha): rad for (m, alpha), rad in s.terms.items()
                if len(alpha) == weight})
            if not filtered.is_zero():
                out[key] = filtered
        return SuperFunction(self.ctx, out)

    def max_theta_weight(self):
        return max((len(alpha) for s in self.terms.values()
                    for _, alpha in s.terms), default=0)

    # -- differentiation ---------------------------------------------------

    def left_deriv(self, a):
        """Left derivative with respect to the collective variable z_a."""
        ctx = self.ctx
        if not 0 <= a < ctx.n_z:
            raise ValueError(f"variable index {a} outside 0..{ctx.n_z - 1}")
        out = {}

        def put(key, scalar):
            if scalar.is_zero():
                return
            if key in out:
                total = out[key] + scalar
                if total.is_zero():
                    del out[key]
                else:
                    out[key] = total
            else:
                out[key] = scalar

        if a < ctx.n_plus:
            for (xexp, c, xi), s in self.terms.items():
                e = xexp[a]
                if e > 0:
                    lowered = xexp[:a] + (e - 1,) + xexp[a + 1:]
                    put((lowered, c, xi), s * e)
                if c > 0:
                    raised = xexp[:a] + (e + 1,) + xexp[a + 1:]
                    put((raised, c, xi), s * (-c))
        else:
            gen = a - ctx.n_plus + 1
            for (xexp, c, xi), s in self.terms.items():
                if gen not in xi:
                    continue
                pos = xi.index(gen)
                rest = xi[:pos] + xi[pos + 1:]
                # the derivative first moves past the theta part of s,
                # then past the pos factors preceding xi_gen
                signed = s.theta_twist(1) * ((-1) ** pos)
                put((xexp, c, rest), signed)
        return SuperFunction(ctx, out)

    def right_deriv(self, a):
        """Right derivative; differs from the left one on odd variables by
        (-1)^(eps(term) + 1) on parity-homogeneous pieces."""
        ctx = self.ctx
        if a < ctx.n_plus:
            return self.left_deriv(a)
        out = SuperFunction.zero(ctx)
        for (xexp, c, xi), s in self.terms.items():
            even, odd = s.split_theta_parity()
            for w, piece in ((0, even), (1, odd)):
                if piece.is_zero():
                    continue
                single = SuperFunction(ctx, {(xexp, c, xi): piece})
                sign = (-1) ** ((len(xi) + w + 1) % 2)
                ld = single.left_deriv(a)
                out = out + (ld if sign == 1 else -ld)
        return out

    # -- integration -------------------------------------------------------

    def integral_bar(self, mod_centralizer=False):
        """Exact integral over x and xi (top xi-monomial normalization).

        Raises NotIntegrableError for any term the Gaussian class cannot
        integrate.  With ``mod_centralizer`` the pure constant term is
        dropped instead (the natural extension to the centralizer).
        """
        ctx = self.ctx
        top = tuple(range(1, ctx.n_minus + 1))
        zero_x = (0,) * ctx.n_plus
        total = Scalar.zero(ctx.scalar_ctx)
        for (xexp, c, xi), s in self.terms.items():
            if ctx.n_plus > 0 and c == 0:
                if mod_centralizer and xexp == zero_x and xi == ():
                    continue
                raise NotIntegrableError(
                    "term without Gaussian suppression is not integrable: "
                    f"{self._render_term((xexp, c, xi), s)}")
            if xi != top:
                continue
            moment = RadicalNumber.from_rational(1)
            skip = False
            for e in xexp:
                if e % 2:
                    skip = True
                    break
                moment = moment * gaussian_moment(e, c)
            if skip:
                continue
            total = total + s * Scalar.from_radical(ctx.scalar_ctx, moment)
        return total

    # -- first-order operators --------------------------------------------

    def number_z(self):
        """Sum over all variables of z_a times the left derivative."""
        out = SuperFunction.zero(self.ctx)
        for a in range(self.ctx.n_z):
            out = out + sf_mul(SuperFunction.z_var(self.ctx, a),
                               self.left_deriv(a))
        return out

    def number_xi(self):
        out = SuperFunction.zero(self.ctx)
        for alpha in range(self.ctx.n_minus):
            a = self.ctx.n_plus + alpha
            out = out + sf_mul(SuperFunction.z_var(self.ctx, a),
                               self.left_deriv(a))
        return out

    def euler_E(self):
        """1 - (1/2) z d/dz, the operator whose kernel is degree two."""
        return self - self.number_z() * Fraction(1, 2)

    def delta_op(self):
        """Sum over i of d/dx_i d/dxi_i; needs n_plus == n_minus."""
        ctx = self.ctx
        if ctx.n_plus != ctx.n_minus:
            raise ValueError("delta operator requires n_plus == n_minus")
        out = SuperFunction.zero(ctx)
        for i in range(ctx.n_plus):
            out = out + self.left_deriv(ctx.n_plus + i).left_deriv(i)
        return out

    # -- rendering ---------------------------------------------------------

    def _render_term(self, key, scalar):
        xexp, c, xi = key
        factors = []
        text = scalar.render()
        if text != "1" or (all(e == 0 for e in xexp) and c == 0 and not xi):
            if " " in text:
                text = f"({text})"
            factors.append(text)
        for i, e in enumerate(xexp):
            if e == 1:
                factors.append(f"x{i + 1}")
            elif e > 1:
                factors.append(f"x{i + 1}^{e}")
        if c > 0:
            factors.append(f"gauss({c})")
        factors.extend(f"xi{a}" for a in xi)
        return "*".join(factors)

    def render(self):
        if not self.terms:
            return "0"
        keys = sorted(self.terms, key=lambda k: (k[0], k[1], k[2]))
        return " + ".join(self._render_term(k, self.terms[k]) for k in keys)

    def __str__(self):
        return self.render()

    __repr__ = __str__


def sf_mul(f, g):
    """Supercommutative product with all Koszul signs."""
    f._check(g)
    ctx = f.ctx
    out = {}
    for (xe1, c1, xi1), s1 in f.terms.items():
        deg1 = len(xi1)
        for (xe2, c2, xi2), s2 in g.terms.items():
            if set(xi1) & set(xi2):
                continue
            inversions = sum(1 for i in xi1 for j in xi2 if i > j)
            sign = (-1) ** inversions
            # the theta part of s2 moves left past xi1
            scalar = s1 * s2.theta_twist(deg1) * sign
            if scalar.is_zero():
                continue
            key = (tuple(e1 + e2 for e1, e2 in zip(xe1, xe2)),
                   c1 + c2, tuple(sorted(xi1 + xi2)))
            if key in out:
                total = out[key] + scalar
                if total.is_zero():
                    del out[key]
                else:
                    out[key] = total
            else:
                out[key] = scalar
    return SuperFunction(ctx, out)


def left_deriv(f, a):
    return f.left_deriv(a)


def right_deriv(f, a):
    return f.right_deriv(a)


def integral_bar(f, mod_centralizer=False):
    return f.integral_bar(mod_centralizer=mod_centralizer)


def euler_E(f):
    return f.euler_E()


def number_z(f):
    return f.number_z()


def number_xi(f):
    return f.number_xi()


def delta_op(f):
    return f.delta_op()


def normalize_mod_Z(f):
    return f.normalize_mod_Z()
