"""Exact arithmetic substrate: rationals, bivariate polynomials, algebraic orbits.

Everything downstream computes with sympy expressions in the two fixed
symbols ``x`` and ``y``, with coefficients in Q or in a simple extension
Q[alpha]/(m) represented by :class:`QuotientField`.  No floating point is
used anywhere.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Union

import sympy as sp
from sympy import Rational  # noqa: F401  (re-exported: the exact scalar type)

from .errors import DegenerateLinearPart, ZeroPolynomial

x, y = sp.symbols("x y")
ALPHA = sp.Symbol("alpha")

ExprLike = Union[sp.Expr, "BiPoly", int, str]


@dataclass(frozen=True)
class BiPoly:
    """A bivariate polynomial over Q stored as a sparse exponent map."""

    terms: tuple  # sorted tuple of ((i, j), Rational), no zero coefficients

    @classmethod
    def from_expr(cls, expr: sp.Expr) -> "BiPoly":
        poly = sp.Poly(sp.expand(sp.sympify(expr)), x, y, domain="QQ")
        items = tuple(sorted(
            ((int(i), int(j)), sp.Rational(c))
            for (i, j), c in zip(poly.monoms(), poly.coeffs())
            if c != 0
        ))
        return cls(items)

    @classmethod
    def from_terms(cls, mapping) -> "BiPoly":
        expr = sp.Add(*[sp.Rational(c) * x**i * y**j for (i, j), c in mapping.items()])
        return cls.from_expr(expr)

    def as_expr(self) -> sp.Expr:
        return sp.expand(sp.Add(*[c * x**i * y**j for (i, j), c in self.terms]))

    def is_zero(self) -> bool:
        return not self.terms

    def __str__(self) -> str:
        return str(self.as_expr())


def as_expr(p: ExprLike) -> sp.Expr:
    """Coerce BiPoly / str / int input to an expanded sympy expression."""
    if isinstance(p, BiPoly):
        return p.as_expr()
    return sp.expand(sp.sympify(p))


@dataclass(frozen=True)
class AlgebraicOrbit:
    """A Galois orbit of points, given by the monic minimal polynomial of a
    representative coordinate.  Degree 1 means a plain rational point."""

    minpoly: sp.Expr  # monic irreducible univariate polynomial in ALPHA

    @property
    def degree(self) -> int:
        return sp.degree(self.minpoly, ALPHA)

    def rational_value(self) -> Optional[sp.Rational]:
        if self.degree != 1:
            return None
        p = sp.Poly(self.minpoly, ALPHA)
        return sp.Rational(-p.nth(0) / p.nth(1))


class RationalField:
    """Trivial coefficient context: plain rational arithmetic."""

    degree = 1

    def reduce(self, e):
        return sp.expand(e)

    def inv(self, e):
        e = sp.nsimplify(e) if not isinstance(e, sp.Expr) else e
        return sp.Rational(1, 1) / e

    def is_zero(self, e) -> bool:
        return sp.expand(e) == 0

    def is_rational(self, e) -> bool:
        return True

    def as_rational(self, e) -> sp.Rational:
        return sp.Rational(sp.expand(e))

    def trace(self, e):
        return sp.Rational(sp.expand(e))


class QuotientField:
    """Arithmetic in Q[alpha]/(m) for m irreducible over Q.

    Elements are sympy expressions polynomial in ALPHA (and possibly in x, y
    for local forms); :meth:`reduce` rewrites every coefficient modulo m.
    """

    def __init__(self, minpoly: sp.Expr):
        self.minpoly = sp.expand(sp.monic(sp.Poly(minpoly, ALPHA)).as_expr())
        self.degree = sp.degree(self.minpoly, ALPHA)
        self._companion = None

    def reduce(self, e):
        e = sp.expand(e)
        if not e.has(ALPHA):
            return e
        free_xy = e.has(x) or e.has(y)
        if not free_xy:
            return sp.expand(sp.rem(e, self.minpoly, ALPHA))
        poly = sp.Poly(e, x, y)
        out = 0
        for (i, j), c in zip(poly.monoms(), poly.coeffs()):
            out += sp.rem(sp.expand(c), self.minpoly, ALPHA) * x**i * y**j
        return sp.expand(out)

    def inv(self, e):
        e = self.reduce(e)
        if e == 0:
            raise ZeroDivisionError("inverse of zero in quotient field")
        if not e.has(ALPHA):
            return sp.Rational(1, 1) / e
        return sp.expand(sp.invert(e, self.minpoly, ALPHA))

    def is_zero(self, e) -> bool:
        return self.reduce(e) == 0

    def is_rational(self, e) -> bool:
        return not self.reduce(e).has(ALPHA)

    def as_rational(self, e) -> sp.Rational:
        r = self.reduce(e)
        if r.has(ALPHA):
            raise ValueError("element is not rational")
        return sp.Rational(r)

    def _companion_matrix(self) -> sp.Matrix:
        if self._companion is None:
            p = sp.Poly(self.minpoly, ALPHA)
            n = self.degree
            M = sp.zeros(n, n)
            for i in range(1, n):
                M[i, i - 1] = 1
            for i in range(n):
                M[i, n - 1] = -p.nth(i)
            self._companion = M
        return self._companion

    def trace(self, e) -> sp.Rational:
        """Field trace Q[alpha]/(m) -> Q of a scalar element."""
        e = self.reduce(e)
        if not e.has(ALPHA):
            return sp.Rational(e) * self.degree
        M = self._companion_matrix()
        p = sp.Poly(e, ALPHA)
        acc = sp.zeros(M.rows, M.cols)
        for k in range(sp.degree(e, ALPHA) + 1):
            c = p.nth(k)
            if c != 0:
                acc += c * M**k
        return sp.Rational(acc.trace())


FieldContext = Union[RationalField, QuotientField]
QQ_CTX = RationalField()


def field_context(orbit: Optional[AlgebraicOrbit]) -> FieldContext:
    if orbit is None or orbit.degree == 1:
        return QQ_CTX
    return QuotientField(orbit.minpoly)


# ---------------------------------------------------------------------------
# Operations on bivariate polynomials
# ---------------------------------------------------------------------------

def vanishing_order(p: ExprLike, ctx: FieldContext = QQ_CTX) -> int:
    """Order of vanishing at the origin: min(i + j) over the support."""
    e = ctx.reduce(as_expr(p))
    if e == 0:
        raise ZeroPolynomial("vanishing_order of the zero polynomial")
    poly = sp.Poly(e, x, y)
    return min(i + j for (i, j) in poly.monoms())


def lowest_homogeneous_part(p: ExprLike) -> sp.Expr:
    """The initial form (terms of minimal total degree)."""
    e = as_expr(p)
    if e == 0:
        raise ZeroPolynomial("zero polynomial has no initial form")
    poly = sp.Poly(e, x, y)
    m = min(i + j for (i, j) in poly.monoms())
    return sp.expand(sp.Add(*[
        c * x**i * y**j
        for (i, j), c in zip(poly.monoms(), poly.coeffs()) if i + j == m
    ]))


@dataclass(frozen=True)
class ConeDirection:
    """One direction of a tangent cone: y = theta*x for theta in the orbit,
    or the vertical direction x = 0 when ``at_infinity`` is set."""

    orbit: Optional[AlgebraicOrbit]
    at_infinity: bool
    multiplicity: int


def tangent_cone_roots(p: ExprLike) -> list:
    """Directions of the tangent cone of p, as orbits on the projective line.

    The initial form is factored over Q; each irreducible factor in
    t = y/x yields one orbit, and a factor of x yields the direction at
    infinity.  Orbit multiplicities sum to the vanishing order.
    """
    cone = lowest_homogeneous_part(p)
    out = []
    t = ALPHA
    # multiplicity of the x = 0 direction
    poly = sp.Poly(cone, x, y)
    inf_mult = min(i for (i, j) in poly.monoms())
    if inf_mult > 0:
        out.append(ConeDirection(None, True, inf_mult))
    dehom = sp.expand(cone.subs({x: 1, y: t}))
    if dehom != 0 and not dehom.is_number:
        _, factors = sp.factor_list(sp.Poly(dehom, t))
        for fac, mult in factors:
            monic = sp.monic(fac).as_expr()
            out.append(ConeDirection(AlgebraicOrbit(monic), False, int(mult)))
    return out


def resonance_ratio_test(trace, det, ctx: FieldContext = QQ_CTX):
    """Positive rational eigenvalue ratio of a 2x2 linear part, if any.

    Eigenvalues lambda1 = r*lambda2 with r in Q+ exist iff the quadratic
    det*r**2 + (2*det - trace**2)*r + det has a positive rational root; that
    requires trace**2/det rational in the first place.
    """
    if ctx.is_zero(det):
        raise DegenerateLinearPart("determinant is zero")
    ratio = ctx.reduce(sp.expand(trace * trace) * ctx.inv(det))
    if not ctx.is_rational(ratio):
        return None
    s2_over_d = ctx.as_rational(ratio)
    r = sp.Symbol("r")
    quad = r**2 + (2 - s2_over_d) * r + 1
    roots = sp.roots(sp.Poly(quad, r), filter="Q")
    positive = sorted((sp.Rational(rt) for rt in roots if rt > 0), reverse=True)
    if not positive:
        return None
    return positive[0]


def univariate_resultant(p: ExprLike, q: ExprLike, eliminate: sp.Symbol) -> sp.Expr:
    """Exact resultant of p and q with respect to the eliminated variable."""
    ep, eq = as_expr(p), as_expr(q)
    if ep == 0 or eq == 0:
        raise ZeroPolynomial("resultant with a zero polynomial")
    return sp.expand(sp.resultant(ep, eq, eliminate))


# ---------------------------------------------------------------------------
# Series helpers (used by the residue computations in the resolution engine)
# ---------------------------------------------------------------------------

def _series_coeffs(e: sp.Expr, var: sp.Symbol, upto: int, ctx: FieldContext) -> list:
    e = ctx.reduce(e)
    p = sp.Poly(e, var) if e != 0 else None
    out = []
    for k in range(upto + 1):
        out.append(p.nth(k) if p is not None else sp.Integer(0))
    return out


def residue_at_zero(num: sp.Expr, den: sp.Expr, var: sp.Symbol,
                    ctx: FieldContext = QQ_CTX, upto: Optional[int] = None):
    """Residue at 0 of the rational function num/den in ``var``.

    Both arguments must be polynomials in ``var`` (coefficients in the field
    context).  Works by exact series inversion of the unit part of den.
    """
    den = ctx.reduce(den)
    if den == 0:
        raise ZeroDivisionError("residue of a function with zero denominator")
    dpoly = sp.Poly(den, var)
    m = min(k for k in range(sp.degree(den, var) + 1) if not ctx.is_zero(dpoly.nth(k)))
    if m == 0 and sp.degree(ctx.reduce(num), var) >= 0:
        pass  # regular denominator: residue is coefficient extraction anyway
    # residue = [var**(m-1)] (num * (den/var**m)**-1)
    order = m  # need series terms up to var**(m-1)
    d0 = _series_coeffs(sp.expand(den / var**m), var, order, ctx)
    inv = [ctx.inv(d0[0])]
    for k in range(1, order + 1):
        s = sum(d0[j] * inv[k - j] for j in range(1, min(k, len(d0) - 1) + 1))
        inv.append(ctx.reduce(-inv[0] * s))
    n0 = _series_coeffs(num, var, order, ctx)
    if m == 0:
        return sp.Integer(0)
    res = sum(n0[j] * inv[m - 1 - j] for j in range(m))
    return ctx.reduce(res)
