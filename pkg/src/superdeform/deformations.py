"""Constructors for the named deformations of the Poisson superalgebra and
the antibracket, together with the constraint system of the k-odd-parameter
theorem.

Every builder enforces its membership preconditions (parameters vanishing in
the classical limit, even power series in h, parity assignments) and raises
DeformationError naming the violated clause.  The constructed object wraps
an evaluable 2-cochain plus the parameter record.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .brackets import antibracket, bidiff_power, moyal_bracket, poisson_bracket
from .cochains import (Cochain, EVEN, FunctionScaledCochain, LeafForm, ODD,
                       ScaledCochain, anti_form, jzeta_form, m0_form,
                       m1_form, m23_form, m3_form, mu_form, mzeta_form)
from .errors import DeformationError, NotIntegrableError
from .scalars import Scalar
from .superfunc import SuperFunction, sf_mul

C1, C1C, C3 = "C1", "C1c", "C3"
ANTI_EVEN, ANTI_ODD, GENERAL_ODD = "ANTI_EVEN", "ANTI_ODD", "GENERAL_ODD"


@dataclass
class Deformation:
    """A deformed bracket with its parameter record.

    ``bracket`` is an arity-2 cochain of total parity 0; ``params`` holds
    the data it was built from; ``grading`` says which parity the Jacobi
    identity of this bracket uses.
    """

    ctx: object
    flavor: str
    bracket: Cochain
    params: dict = field(default_factory=dict)
    grading: str = EVEN

    def evaluate(self, f, g):
        return self.bracket.evaluate(f, g)

    __call__ = evaluate

    def __repr__(self):
        return f"<Deformation {self.flavor} at {self.ctx}>"


# -- membership predicates --------------------------------------------------

def _require_even_series(s, name):
    """s must involve only even powers of h."""
    if not s.is_even_series(0):
        raise DeformationError(
            f"{name} must be an even power series in hbar", relation=name)


def _theta_free_part(s):
    out = Scalar(s.ctx)
    out.terms = {key: r for key, r in s.terms.items() if not key[1]}
    return out


def _require_param(s, name):
    """A deformation parameter: even series in h, vanishing in the
    classical limit (no theta-free constant term)."""
    _require_even_series(s, name)
    if not _theta_free_part(s).is_even_series(2):
        raise DeformationError(
            f"{name} must lie in hbar^2 K[[hbar^2]] modulo theta terms",
            relation=name)


def _require_even_fn(zeta, name):
    """zeta in hbar^2 E[[hbar^2]]: every coefficient an even series
    starting at order hbar^2."""
    for s in zeta.terms.values():
        if not s.is_even_series(2):
            raise DeformationError(
                f"{name} must lie in hbar^2 E[[hbar^2]]", relation=name)


def _require_parity(value, parity, name):
    if value.is_zero():
        return
    p = value.eps() if isinstance(value, SuperFunction) else value.parity()
    if p is not None and p != parity:
        word = "even" if parity == 0 else "odd"
        raise DeformationError(f"{name} must be {word}", relation=name)


def _as_scalar(ctx, value):
    if isinstance(value, Scalar):
        return value
    return Scalar.rational(ctx.scalar_ctx, value)


def _bar(f):
    return f.integral_bar(mod_centralizer=True)


def _d_class_part(f):
    """The Gaussian-suppressed terms of f (all of f when n_plus == 0)."""
    if f.ctx.n_plus == 0:
        return f
    return SuperFunction(f.ctx, {key: s for key, s in f.terms.items()
                                 if key[1] > 0})


# -- Poisson-side deformations ---------------------------------------------

def build_C1(zeta, kappa=1, flavor=C1, c=None):
    """C(f,g) = M(f + zeta*fbar, g + zeta*gbar), the Moyal bracket of the
    bar-extended arguments; with the C1c flavor the term c*fbar*gbar is
    added and the combination M(zeta,zeta) + c must land in Z."""
    ctx = zeta.ctx
    kappa = _as_scalar(ctx, kappa)
    _require_even_fn(zeta, "zeta")
    _require_parity(zeta, 0, "zeta")
    if not kappa.is_theta_free():
        raise DeformationError("kappa must be theta-free", relation="kappa")
    degrees = {m % 2 for (m, _alpha) in kappa.terms}
    if len(degrees) > 1:
        raise DeformationError(
            "kappa must be an even or odd series in hbar so that "
            "c1 = (1/6) hbar^2 kappa^2 is an even series", relation="kappa")
    params = {"zeta": zeta, "kappa": kappa}
    if flavor == C1C:
        c = _as_scalar(ctx, 0 if c is None else c)
        _require_param(c, "c")
        probe = moyal_bracket(zeta, zeta, kappa) + \
            SuperFunction.constant(ctx, c)
        if not probe.is_z_class():
            raise DeformationError(
                "M(zeta, zeta) + c must lie in Z (Gaussian class plus "
                "constants)", relation="c")
        params["c"] = c
    elif c is not None:
        raise DeformationError("the plain C1 flavor takes no c term",
                               relation="c")

    trivial = zeta.is_zero()

    def fn(f, g):
        if trivial:
            F, G = f, g
        else:
            F = f + zeta.scale_right(_bar(f))
            G = g + zeta.scale_right(_bar(g))
        out = moyal_bracket(F, G, kappa)
        if flavor == C1C:
            out = out + SuperFunction.constant(ctx, c * (_bar(f) * _bar(g)))
        return out

    form = LeafForm(ctx, 2, 0, fn, EVEN, name=flavor)
    return Deformation(ctx, flavor, form, params, EVEN)


def build_C1c(zeta, kappa=1, c=0):
    return build_C1(zeta, kappa, flavor=C1C, c=c)


def build_C3(zeta, c3=0):
    """C = m0 + m_zeta + c3*m3."""
    ctx = zeta.ctx
    c3 = _as_scalar(ctx, c3)
    _require_even_fn(zeta, "zeta")
    _require_param(c3, "c3")
    n_minus = ctx.n_minus
    zp = zeta.eps()
    if not zeta.is_zero() and zp is not None and (zp + n_minus) % 2 != 0:
        raise DeformationError(
            "zeta must make m_zeta even: eps(zeta) + n_minus must be even",
            relation="zeta")
    cp = c3.parity()
    if not c3.is_zero() and cp is not None and (cp + n_minus) % 2 != 0:
        raise DeformationError(
            "c3 must make c3*m3 even: parity(c3) + n_minus must be even",
            relation="c3")
    form = m0_form(ctx)
    if not zeta.is_zero():
        form = form + mzeta_form(ctx, zeta)
    if not c3.is_zero():
        form = form + ScaledCochain(c3, m3_form(ctx))
    form.name = "C3"
    params = {"zeta": zeta, "c3": c3}
    return Deformation(ctx, C3, form, params, EVEN)


# -- antibracket deformations ----------------------------------------------

def build_anti_even(ctx, c):
    """Eq. (def): [f,g]* = [f,g]
    + (-1)^eps(f) {c/(1+c N_z/2) Delta f} E_z g
    + {E_z f} c/(1+c N_z/2) Delta g,
    with the inverse expanded as a geometric series (finite after the
    h-truncation since c is of order hbar^2)."""
    if ctx.n_plus != ctx.n_minus:
        raise DeformationError("the antibracket needs n_plus == n_minus",
                               relation="context")
    c = _as_scalar(ctx, c)
    _require_param(c, "c")
    if not c.is_theta_free():
        raise DeformationError("c must be theta-free", relation="c")

    def resolvent(u):
        # c/(1 + c N_z/2) applied to u, as a geometric series in c
        total = SuperFunction.zero(ctx)
        term = u
        while not term.is_zero():
            total = total + term
            term = term.number_z().scale_left(c * Fraction(-1, 2))
        return total.scale_left(c)

    def fn(f, g):
        out = antibracket(f, g)
        df = resolvent(f.delta_op())
        if not df.is_zero():
            out = out + sf_mul(df, g.euler_E()) * ((-1) ** f.eps())
        dg = resolvent(g.delta_op())
        if not dg.is_zero():
            out = out + sf_mul(f.euler_E(), dg)
        return out

    form = LeafForm(ctx, 2, 0, fn, ODD, name="anti_even")
    return Deformation(ctx, ANTI_EVEN, form, {"c": c}, ODD)


def build_anti_odd(ctx):
    """[f,g]* = [f,g] + theta*m_{2|3}(f,g); exact since theta^2 = 0."""
    if ctx.n_plus != ctx.n_minus:
        raise DeformationError("the antibracket needs n_plus == n_minus",
                               relation="context")
    if ctx.scalar_ctx.k < 1:
        raise DeformationError("an odd parameter theta_1 is required (k >= 1)",
                               relation="context")
    theta = Scalar.theta(ctx.scalar_ctx, 1)
    form = anti_form(ctx) + ScaledCochain(theta, m23_form(ctx))
    form.name = "anti_odd"
    return Deformation(ctx, ANTI_ODD, form, {}, ODD)


# -- the k-odd-parameter system --------------------------------------------

@dataclass
class ConstraintReport:
    """Residuals of the three relations plus the D-class requirement."""

    residuals: dict
    eta_d_class: bool

    @property
    def passed(self):
        if not self.eta_d_class:
            return False
        return all(r.is_zero() for r in self.residuals.values())

    def failed_relations(self):
        out = [name for name, r in self.residuals.items()
               if not r.is_zero()]
        if not self.eta_d_class:
            out.append("eta_class")
        return out

    def render(self):
        lines = []
        for name, r in self.residuals.items():
            state = "0" if r.is_zero() else r.render()
            lines.append(f"relation ({name}): {state}")
        lines.append(f"eta D-class: {self.eta_d_class}")
        return "\n".join(lines)


def _relation_one(zeta, eta, h1, h2, etabar):
    """eta + theta h1 m1(zeta,zeta) + theta[2E - (2+n+-n-)]zeta
    + etabar*zeta + {zeta,zeta} - h2."""
    ctx = zeta.ctx
    sctx = ctx.scalar_ctx
    theta = Scalar.theta(sctx, 1)
    out = eta
    m1zz = bidiff_power(zeta, zeta, 3) * Fraction(1, 6) \
        if not zeta.is_zero() else SuperFunction.zero(ctx)
    out = out + m1zz.scale_left(theta * h1)
    euler = zeta.euler_E() * 2 - zeta * (2 + ctx.n_plus - ctx.n_minus)
    out = out + euler.scale_left(theta)
    out = out + zeta.scale_left(etabar)
    out = out + poisson_bracket(zeta, zeta)
    return out - SuperFunction.constant(ctx, h2)


def check_constraints(zeta, eta, h1, h2):
    """Evaluate the three relations of the final theorem and the D-class
    requirement on eta; all residuals are returned, nothing is raised."""
    ctx = zeta.ctx
    sctx = ctx.scalar_ctx
    h1 = _as_scalar(ctx, h1)
    h2 = _as_scalar(ctx, h2)
    _require_parity(zeta, 1, "zeta")
    _require_parity(eta, 0, "eta")
    _require_parity(h1, 1, "h1")
    _require_parity(h2, 0, "h2")
    theta = Scalar.theta(sctx, 1)
    # the bar of the non-D part need not exist; it is flagged separately
    etabar = _bar(_d_class_part(eta))
    residuals = {
        "i": _relation_one(zeta, eta, h1, h2, etabar),
        "ii": SuperFunction.constant(ctx, theta * etabar),
        "iii": SuperFunction.constant(
            ctx, theta * ((1 + ctx.n_plus - ctx.n_minus) * h2)
            - etabar * h2),
    }
    return ConstraintReport(residuals, eta.is_d_class())


def solve_eta(zeta, h1, h2, max_iter=64):
    """Solve relation (i) for eta:

        eta = -theta h1 m1(zeta,zeta) - theta[2E-(2+n+-n-)]zeta
              - etabar*zeta - {zeta,zeta} + h2

    The unknown scalar etabar is resolved by iterating the bar of the
    right-hand side to its fixed point (finitely many steps: the update is
    nilpotent in theta and raises the h-order).  Returns (eta, report)
    where the report lists the non-D obstruction terms that h2 must cancel.
    """
    ctx = zeta.ctx
    sctx = ctx.scalar_ctx
    h1 = _as_scalar(ctx, h1)
    h2 = _as_scalar(ctx, h2)
    _require_parity(zeta, 1, "zeta")
    _require_parity(h1, 1, "h1")
    _require_parity(h2, 0, "h2")
    zero = SuperFunction.zero(ctx)

    def rhs(etabar):
        return -_relation_one(zeta, zero, h1, h2, etabar)

    try:
        etabar = Scalar.zero(sctx)
        for _ in range(max_iter):
            new = _bar(rhs(etabar))
            if new == etabar:
                break
            etabar = new
        else:
            raise DeformationError(
                "etabar fixed point did not stabilize", relation="i")
        eta = rhs(etabar)
    except NotIntegrableError as exc:
        raise DeformationError(
            f"bar obstruction while solving for eta: {exc}",
            relation="i") from exc
    obstruction = eta - _d_class_part(eta)
    report = check_constraints(zeta, eta, h1, h2)
    report.residuals["obstruction"] = obstruction
    return eta, report


def build_general_odd(zeta, eta, h1, h2):
    """C = m0 + theta h1 m1 + theta m3 + m_zeta + theta h1 j_zeta + eta*mu,
    valid whenever the constraint system is satisfied."""
    ctx = zeta.ctx
    sctx = ctx.scalar_ctx
    h1 = _as_scalar(ctx, h1)
    h2 = _as_scalar(ctx, h2)
    report = check_constraints(zeta, eta, h1, h2)
    if not report.passed:
        failed = ", ".join(report.failed_relations())
        raise DeformationError(
            f"constraint system violated: {failed}", relation=failed)
    theta = Scalar.theta(sctx, 1)
    th1 = theta * h1
    form = m0_form(ctx) + ScaledCochain(th1, m1_form(ctx)) + \
        ScaledCochain(theta, m3_form(ctx))
    if not zeta.is_zero():
        form = form + mzeta_form(ctx, zeta) + \
            ScaledCochain(th1, jzeta_form(ctx, zeta))
    if not eta.is_zero():
        form = form + FunctionScaledCochain(eta, mu_form(ctx))
    form.name = "general_odd"
    params = {"zeta": zeta, "eta": eta, "h1": h1, "h2": h2}
    return Deformation(ctx, GENERAL_ODD, form, params, EVEN)


# -- equivalence -----------------------------------------------------------

def t1_bar_multiplier(z0, a=1):
    """The family T1: f -> a * z0 * fbar."""
    ctx = z0.ctx
    scaled = z0.scale_left(_as_scalar(ctx, a))
    return LeafForm(ctx, 1, z0.eps() or 0,
                    lambda f: scaled.scale_right(_bar(f)),
                    EVEN, name="T1_bar")


def t1_euler(ctx, a=1):
    """The family T1: f -> a * E_z f."""
    a = _as_scalar(ctx, a)
    return LeafForm(ctx, 1, 0, lambda f: f.euler_E().scale_left(a),
                    EVEN, name="T1_euler")


def t1_diff_operator(ctx, terms):
    """T1: f -> sum of coeff * (iterated derivative of f); ``terms`` is a
    list of (coeff, variable-index tuple) pairs."""
    terms = [(_as_scalar(ctx, coeff), tuple(word)) for coeff, word in terms]

    def t1(f):
        out = SuperFunction.zero(ctx)
        for coeff, word in terms:
            g = f
            for a in word:
                g = g.left_deriv(a)
                if g.is_zero():
                    break
            out = out + g.scale_left(coeff)
        return out

    return LeafForm(ctx, 1, None, t1, EVEN, name="T1_diff")


@dataclass
class EquivalenceReport:
    """Per-sample residuals of T C1(f,g) - C2(Tf, Tg)."""

    residuals: list

    @property
    def passed(self):
        return all(r.is_zero() for _pair, r in self.residuals)

    def first_failure(self):
        for pair, r in self.residuals:
            if not r.is_zero():
                return pair, r
        return None


def check_equivalence(defo1, defo2, t1, samples, order=None):
    """T = id + hbar^2 T1; the residual T C1(f,g) - C2(Tf,Tg) is recorded
    for every sample pair, optionally truncated at ``order``."""
    ctx = defo1.ctx
    hbar2 = Scalar.hbar(ctx.scalar_ctx) ** 2

    def T(f):
        return f + t1.evaluate(f).scale_left(hbar2)

    residuals = []
    for f, g in samples:
        res = T(defo1.evaluate(f, g)) - defo2.evaluate(T(f), T(g))
        if order is not None:
            res = res.truncate_hbar(order)
        residuals.append(((f, g), res))
    return EquivalenceReport(residuals)
