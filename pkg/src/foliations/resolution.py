"""Blow-up engine for plane foliation germs defined by polynomial 1-forms.

A germ omega = P dx + Q dy is reduced by iterated point blow-ups carried
out in the two standard charts with exact rational arithmetic.  Every
blow-up strips the common exceptional power from the pulled-back
coefficients (that exponent is the discrepancy of the new component),
decides whether the component is invariant or dicritical, scans it for
singular points, tangency points and tracked curve branches, classifies
each reduced singularity it finds, and queues whatever still needs work.
The finished :class:`ResolutionTree` holds the combinatorial and the
analytic bookkeeping of the whole reduction.

Coordinate conventions used throughout: a local 1-form is A dx + B dy,
its dual vector field is v = (-B, A), so the axis {x=0} is invariant
exactly when x divides B and {y=0} is invariant exactly when y divides A.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import sympy as sp

from .algebra import (
    ALPHA,
    AlgebraicOrbit,
    BiPoly,
    FieldContext,
    QQ_CTX,
    QuotientField,
    as_expr,
    field_context,
    residue_at_zero,
    resonance_ratio_test,
    vanishing_order,
    x,
    y,
)
from .errors import (
    AlgebraicCenterUnsupported,
    CommonComponent,
    FormulaMismatch,
    MaxBlowupsExceeded,
    NotInvariantBranch,
    NotSaddleNode,
    NotSingular,
    OrderTooSmall,
    TruncationInsufficient,
    UnsupportedBranch,
    ZeroPolynomial,
)

_JET_CAP = 512


# ---------------------------------------------------------------------------
# Small polynomial helpers
# ---------------------------------------------------------------------------

def _min_exponent(e: sp.Expr, var: sp.Symbol) -> int:
    """Smallest power of ``var`` in a nonzero bivariate polynomial."""
    poly = sp.Poly(e, x, y)
    idx = 0 if var == x else 1
    return min(m[idx] for m in poly.monoms())


def _exact_div(e: sp.Expr, var: sp.Symbol, power: int) -> sp.Expr:
    if power == 0 or e == 0:
        return sp.expand(e)
    return sp.expand(sp.cancel(e / var**power))


def _divides(var: sp.Symbol, e: sp.Expr) -> bool:
    if e == 0:
        return True
    return _min_exponent(e, var) >= 1


def _strip_common_power(A: sp.Expr, B: sp.Expr, var: sp.Symbol):
    orders = [_min_exponent(e, var) for e in (A, B) if e != 0]
    if not orders:
        raise ZeroPolynomial("both pulled-back coefficients vanish")
    ell = min(orders)
    return _exact_div(A, var, ell), _exact_div(B, var, ell), ell


def _chart1(A: sp.Expr, B: sp.Expr):
    """Pull back A dx + B dy under (x, y) -> (x, x*y)."""
    As, Bs = A.subs(y, x * y), B.subs(y, x * y)
    return sp.expand(As + y * Bs), sp.expand(x * Bs)


def _chart2(A: sp.Expr, B: sp.Expr):
    """Pull back A dx + B dy under (x, y) -> (x*y, y)."""
    As, Bs = A.subs(x, x * y), B.subs(x, x * y)
    return sp.expand(y * As), sp.expand(x * As + Bs)


def _at_origin(e: sp.Expr, ctx: FieldContext):
    return ctx.reduce(e.subs({x: 0, y: 0}))


def _univ_order(e: sp.Expr, var: sp.Symbol, ctx: FieldContext) -> Optional[int]:
    """Order of a univariate polynomial at 0, or None for the zero polynomial."""
    e = ctx.reduce(e)
    if e == 0:
        return None
    poly = sp.Poly(e, var)
    return min(m[0] for m in poly.monoms())


def _root_orbits(e: sp.Expr, var: sp.Symbol):
    """Roots of a univariate polynomial over Q, grouped into Galois orbits.

    Returns a list of pairs (key, payload) where key is ("rat", value) or
    ("orb", sort_key) and payload is the rational value or the orbit.
    """
    e = sp.expand(e)
    if e == 0:
        raise ZeroPolynomial("root scan of the zero polynomial")
    if not e.has(var):
        return []
    out = []
    _, factors = sp.factor_list(sp.Poly(e, var))
    for fac, _mult in factors:
        monic = sp.monic(fac).as_expr()
        deg = sp.degree(monic, var)
        if deg == 1:
            root = sp.Rational(-sp.Poly(monic, var).nth(0))
            out.append((("rat", root), root))
        else:
            minpoly = sp.expand(monic.subs(var, ALPHA))
            coeffs = tuple(sp.Poly(minpoly, ALPHA).all_coeffs())
            out.append((("orb", (int(deg), coeffs)), AlgebraicOrbit(minpoly)))
    return out


# ---------------------------------------------------------------------------
# Local linear algebra and classification
# ---------------------------------------------------------------------------

def _linear_data(A: sp.Expr, B: sp.Expr, ctx: FieldContext):
    """Jacobian entries of the dual vector field v = (-B, A) at the origin."""
    a = ctx.reduce(-sp.diff(B, x).subs({x: 0, y: 0}))
    b = ctx.reduce(-sp.diff(B, y).subs({x: 0, y: 0}))
    c = ctx.reduce(sp.diff(A, x).subs({x: 0, y: 0}))
    d = ctx.reduce(sp.diff(A, y).subs({x: 0, y: 0}))
    return a, b, c, d


def _classify_local(A: sp.Expr, B: sp.Expr, ctx: FieldContext):
    a, b, c, d = _linear_data(A, B, ctx)
    trace = ctx.reduce(a + d)
    det = ctx.reduce(a * d - b * c)
    if ctx.is_zero(det):
        kind = "non_reduced" if ctx.is_zero(trace) else "saddle_node"
    else:
        ratio = resonance_ratio_test(trace, det, ctx)
        kind = "non_reduced" if ratio is not None else "non_degenerate"
    return kind, (a, b, c, d, trace, det)


def _axis_cs_x(A: sp.Expr, B: sp.Expr, ctx: FieldContext):
    """CS index along the invariant axis {x=0}: -res_y (B/x)(0,y) / A(0,y)."""
    btilde = _exact_div(ctx.reduce(B), x, 1)
    num = ctx.reduce(btilde.subs(x, 0))
    den = ctx.reduce(A.subs(x, 0))
    return ctx.reduce(-residue_at_zero(num, den, y, ctx))


def _axis_cs_y(A: sp.Expr, B: sp.Expr, ctx: FieldContext):
    """CS index along the invariant axis {y=0}: -res_x (A/y)(x,0) / B(x,0)."""
    atilde = _exact_div(ctx.reduce(A), y, 1)
    num = ctx.reduce(atilde.subs(y, 0))
    den = ctx.reduce(B.subs(y, 0))
    return ctx.reduce(-residue_at_zero(num, den, x, ctx))


def _sn_directions(a, b, c, d, ctx: FieldContext):
    """Kernel (weak) and image (strong) directions of a rank-one Jacobian."""
    if not (ctx.is_zero(a) and ctx.is_zero(b)):
        weak = (b, ctx.reduce(-a))
    else:
        weak = (d, ctx.reduce(-c))
    if not (ctx.is_zero(a) and ctx.is_zero(c)):
        strong = (a, c)
    else:
        strong = (b, d)
    return weak, strong


def _weak_jet_adapted(A: sp.Expr, B: sp.Expr, order: int, ctx: FieldContext) -> sp.Expr:
    """Jet of the weak separatrix y = phi(x), kernel along the x-axis.

    The invariance residual R = A(x, phi) + B(x, phi) phi' has a d*c_m
    contribution at x^m, with d = A_y(0) = trace != 0, so every
    coefficient is solvable.
    """
    d_coef = ctx.reduce(sp.diff(A, y).subs({x: 0, y: 0}))
    d_inv = ctx.inv(d_coef)
    phi = sp.Integer(0)
    for m in range(2, order + 1):
        res = ctx.reduce(sp.expand(
            A.subs(y, phi) + B.subs(y, phi) * sp.diff(phi, x)))
        coeff = sp.Poly(res, x).nth(m) if res != 0 else sp.Integer(0)
        if not ctx.is_zero(coeff):
            phi = phi + ctx.reduce(-coeff * d_inv) * x**m
    return phi


def _adapt_to_weak(A, B, weak, strong, ctx: FieldContext):
    """Linear change sending the weak direction to the x-axis."""
    w0, w1 = weak
    s0, s1 = strong
    sub = {x: w0 * x + s0 * y, y: w1 * x + s1 * y}
    As = sp.expand(A.subs(sub, simultaneous=True))
    Bs = sp.expand(B.subs(sub, simultaneous=True))
    A_ad = ctx.reduce(sp.expand(w0 * As + w1 * Bs))
    B_ad = ctx.reduce(sp.expand(s0 * As + s1 * Bs))
    return A_ad, B_ad


def _branch_residue(A, B, phi, ctx: FieldContext):
    """CS residue data along the branch y = phi(x): (order of B on it, -res)."""
    den = ctx.reduce(sp.expand(B.subs(y, phi)))
    k = _univ_order(den, x, ctx)
    if k is None:
        return None, None
    num = ctx.reduce(sp.expand(
        sp.diff(A, y).subs(y, phi) + sp.diff(B, y).subs(y, phi) * sp.diff(phi, x)))
    return k, ctx.reduce(-residue_at_zero(num, den, x, ctx))


def _sn_weak_data(A, B, ctx: FieldContext):
    """Saddle-node profile (k, lambda, weak, strong) in arbitrary coordinates.

    Shortcut when the weak separatrix is an invariant coordinate axis;
    otherwise the coordinates are adapted, the weak jet is solved term by
    term and the residue is accepted once two consecutive truncation
    orders agree.
    """
    a, b, c, d = _linear_data(A, B, ctx)
    weak, strong = _sn_directions(a, b, c, d, ctx)
    if ctx.is_zero(weak[0]) and _divides(x, ctx.reduce(B)):
        k = _univ_order(A.subs(x, 0), y, ctx)
        return k, _axis_cs_x(A, B, ctx), weak, strong
    if ctx.is_zero(weak[1]) and _divides(y, ctx.reduce(A)):
        k = _univ_order(B.subs(y, 0), x, ctx)
        return k, _axis_cs_y(A, B, ctx), weak, strong
    if ctx.is_zero(weak[1]):
        A_ad, B_ad = ctx.reduce(A), ctx.reduce(B)
    else:
        A_ad, B_ad = _adapt_to_weak(A, B, weak, strong, ctx)
    order = 8
    prev = None
    while order <= _JET_CAP:
        phi = _weak_jet_adapted(A_ad, B_ad, order, ctx)
        k, lam = _branch_residue(A_ad, B_ad, phi, ctx)
        if k is not None and order >= k + 2:
            if prev is not None and ctx.is_zero(ctx.reduce(lam - prev[1])) and k == prev[0]:
                return k, lam, weak, strong
            prev = (k, lam)
        order *= 2
    raise TruncationInsufficient(
        "saddle-node residue did not stabilize below jet order %d" % _JET_CAP)


# ---------------------------------------------------------------------------
# Public domain types
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class OneForm:
    """A polynomial 1-form P dx + Q dy with coprime coefficients."""

    P: BiPoly
    Q: BiPoly

    @classmethod
    def from_exprs(cls, P, Q) -> "OneForm":
        pe, qe = as_expr(P), as_expr(Q)
        if pe == 0 and qe == 0:
            raise ZeroPolynomial("the zero 1-form defines no foliation")
        g = sp.gcd(pe, qe)
        if g.has(x) or g.has(y):
            raise CommonComponent(
                "coefficients share the factor %s" % g)
        return cls(BiPoly.from_expr(pe), BiPoly.from_expr(qe))

    @property
    def p_expr(self) -> sp.Expr:
        return self.P.as_expr()

    @property
    def q_expr(self) -> sp.Expr:
        return self.Q.as_expr()

    def is_singular_at_origin(self) -> bool:
        pe, qe = self.p_expr, self.q_expr
        return pe.subs({x: 0, y: 0}) == 0 and qe.subs({x: 0, y: 0}) == 0


def _coerce_form(form) -> OneForm:
    if isinstance(form, OneForm):
        return form
    P, Q = form
    return OneForm.from_exprs(P, Q)


@dataclass
class DivisorComponent:
    """One exceptional component, numbered by order of appearance."""

    index: int
    invariant_flag: bool
    recorded_discrepancy: int
    self_intersection: int
    center_hosts: Tuple[int, ...]
    label: str

    @property
    def dicritical(self) -> bool:
        return not self.invariant_flag


@dataclass
class InfinitelyNearPoint:
    """A blown-up center, with the local 1-form seen right before blowing up."""

    index: int
    host_components: Tuple[int, ...]
    label: str
    local_form: Tuple[sp.Expr, sp.Expr]
    multiplicity: int
    curve_multiplicities: Dict[str, int]


@dataclass
class SingularityRecord:
    """A reduced singularity of the final model, possibly a Galois orbit.

    All index data is stored per point of the orbit, together with the
    field traces needed by the global formulas (an orbit of size s
    contributes the trace of each per-point value, and s times any
    rational per-point value).
    """

    index: int
    components: Tuple[int, ...]
    kind: str  # "non_degenerate" | "saddle_node"
    label: str
    orbit: Optional[AlgebraicOrbit]
    orbit_size: int
    milnor: int
    trace_lin: sp.Expr
    det_lin: sp.Expr
    cs_along: Dict[int, sp.Expr]
    cs_along_trace: Dict[int, sp.Rational]
    cs_transverse: Optional[sp.Expr]
    cs_transverse_trace: Optional[sp.Rational]
    bb: sp.Expr
    bb_trace: sp.Rational
    k: Optional[int]
    lam: Optional[sp.Expr]
    lam_trace: Optional[sp.Rational]
    tangent: bool
    corner: bool
    weak_component: Optional[int]
    formal_transverse: bool
    gsv_transverse: int

    @property
    def saddle_node(self) -> bool:
        return self.kind == "saddle_node"


@dataclass
class CurveAttachment:
    """Where the strict transform of a tracked curve factor meets the divisor."""

    curve: str
    group: str
    component: int
    orbit_size: int
    record_index: Optional[int]
    label: str


@dataclass
class ResolutionTree:
    """Complete output of a reduction of singularities."""

    original_form: OneForm
    components: List[DivisorComponent]
    points: List[InfinitelyNearPoint]
    singularities: List[SingularityRecord]
    edges: frozenset
    curve_attachments: List[CurveAttachment]
    curve_center_multiplicities: Dict[str, Tuple[int, ...]]
    curve_groups: Dict[str, List[Tuple[str, int]]]
    notes: List[str]

    @property
    def n(self) -> int:
        return len(self.components)

    def iota(self) -> List[int]:
        return [1 if comp.invariant_flag else 0 for comp in self.components]

    def delta(self) -> List[int]:
        return [0 if comp.invariant_flag else 1 for comp in self.components]

    def recorded_ell(self) -> List[int]:
        return [comp.recorded_discrepancy for comp in self.components]

    def dicritical_components(self) -> List[int]:
        return [comp.index for comp in self.components if comp.dicritical]

    def valence(self, index: int) -> int:
        return sum(1 for edge in self.edges if index in edge)

    def adjacent(self, index: int) -> List[int]:
        out = []
        for edge in self.edges:
            if index in edge:
                out.extend(i for i in edge if i != index)
        return sorted(out)

    def curve_s_vector(self, label: str) -> List[int]:
        """S_C: attachment counts of the resolved branch per component."""
        out = [0] * self.n
        for att in self.curve_attachments:
            if att.curve == label:
                out[att.component - 1] += att.orbit_size
        return out

    def curve_nu_vector(self, label: str) -> List[int]:
        """nu(C): multiplicities of the branch at the centers."""
        mults = self.curve_center_multiplicities.get(label, ())
        out = list(mults) + [0] * (self.n - len(mults))
        return out[: self.n]

    def _group_combine(self, name: str, per_label) -> List[int]:
        total = [0] * self.n
        for label, mult in self.curve_groups[name]:
            vec = per_label(label)
            total = [t + mult * v for t, v in zip(total, vec)]
        return total

    def group_s_vector(self, name: str) -> List[int]:
        return self._group_combine(name, self.curve_s_vector)

    def group_nu_vector(self, name: str) -> List[int]:
        return self._group_combine(name, self.curve_nu_vector)


# ---------------------------------------------------------------------------
# Public single-step operations
# ---------------------------------------------------------------------------

def blow_up(form, chart: int):
    """One blow-up of the origin in chart 1 (x, xt) or chart 2 (sy, y).

    Returns (pulled-back form, stripped exceptional power, invariant flag
    of the new component).  Refuses regular centers.
    """
    form = _coerce_form(form)
    if not form.is_singular_at_origin():
        raise NotSingular("blow-up requested at a regular point")
    A, B = form.p_expr, form.q_expr
    if chart == 1:
        A1, B1 = _chart1(A, B)
        Ab, Bb, ell = _strip_common_power(A1, B1, x)
        invariant = _divides(x, Bb)
    elif chart == 2:
        A2, B2 = _chart2(A, B)
        Ab, Bb, ell = _strip_common_power(A2, B2, y)
        invariant = _divides(y, Ab)
    else:
        raise ValueError("chart must be 1 or 2")
    return OneForm.from_exprs(Ab, Bb), ell, invariant


@dataclass(frozen=True)
class LocalClassification:
    kind: str  # "non_reduced" | "non_degenerate" | "saddle_node"
    trace: sp.Expr
    det: sp.Expr

    @property
    def reduced(self) -> bool:
        return self.kind != "non_reduced"


def classify_singularity(form, orbit: Optional[AlgebraicOrbit] = None) -> LocalClassification:
    """Classify the singularity of a local 1-form at the origin of its chart."""
    form = _coerce_form(form)
    ctx = field_context(orbit)
    A, B = form.p_expr, form.q_expr
    if not (ctx.is_zero(_at_origin(A, ctx)) and ctx.is_zero(_at_origin(B, ctx))):
        raise NotSingular("classification requested at a regular point")
    kind, lin = _classify_local(A, B, ctx)
    return LocalClassification(kind=kind, trace=lin[4], det=lin[5])


@dataclass(frozen=True)
class SaddleNodeProfile:
    k: int
    lam: sp.Expr
    weak_direction: Tuple[sp.Expr, sp.Expr]
    strong_direction: Tuple[sp.Expr, sp.Expr]
    tangent_flag: bool
    corner_flag: bool


def _parallel(u, v, ctx: FieldContext) -> bool:
    return ctx.is_zero(ctx.reduce(u[0] * v[1] - u[1] * v[0]))


def saddle_node_profile(form, divisor_directions=(),
                        orbit: Optional[AlgebraicOrbit] = None) -> SaddleNodeProfile:
    """Profile a saddle-node: k, lambda, directions and tangency flags.

    ``divisor_directions`` lists the tangent directions (as pairs) of the
    exceptional components through the point; (0, 1) is the direction of
    the axis {x=0} and (1, 0) the direction of {y=0}.
    """
    form = _coerce_form(form)
    ctx = field_context(orbit)
    A, B = form.p_expr, form.q_expr
    if orbit is not None:
        A, B = ctx.reduce(A), ctx.reduce(B)
    kind, _ = _classify_local(A, B, ctx)
    if kind != "saddle_node":
        raise NotSaddleNode("local form is %s" % kind)
    k, lam, weak, strong = _sn_weak_data(A, B, ctx)
    directions = [tuple(sp.sympify(t) for t in d) for d in divisor_directions]
    tangent = any(_parallel(weak, d, ctx) for d in directions)
    return SaddleNodeProfile(
        k=k, lam=lam, weak_direction=weak, strong_direction=strong,
        tangent_flag=tangent, corner_flag=len(directions) == 2)


def weak_separatrix_jet(form, order: int,
                        orbit: Optional[AlgebraicOrbit] = None) -> sp.Expr:
    """Jet of the weak separatrix of a saddle-node adapted to an axis.

    Returns phi with y = phi(x) when the weak direction is the x-axis,
    and psi with x = psi(y) when it is the y-axis (the jet is then a
    polynomial in y).
    """
    form = _coerce_form(form)
    ctx = field_context(orbit)
    A, B = form.p_expr, form.q_expr
    if orbit is not None:
        A, B = ctx.reduce(A), ctx.reduce(B)
    kind, lin = _classify_local(A, B, ctx)
    if kind != "saddle_node":
        raise NotSaddleNode("local form is %s" % kind)
    weak, _strong = _sn_directions(*lin[:4], ctx)
    if ctx.is_zero(weak[1]):
        A_ad, B_ad, swap = A, B, False
    elif ctx.is_zero(weak[0]):
        A_ad, B_ad, swap = B.subs({x: y, y: x}, simultaneous=True), \
            A.subs({x: y, y: x}, simultaneous=True), True
    else:
        raise UnsupportedBranch("weak direction is not a coordinate axis")
    phi = _weak_jet_adapted(A_ad, B_ad, order, ctx)
    k, _ = _branch_residue(A_ad, B_ad, phi, ctx)
    if k is None or order < k + 1:
        raise OrderTooSmall(
            "jet order %d is below k+1 for this saddle-node" % order)
    return phi.subs(x, y) if swap else phi


def cs_index_local(form, branch, orbit: Optional[AlgebraicOrbit] = None):
    """Camacho-Sad index of a local form along an invariant branch.

    ``branch`` is "x" / "x=0", "y" / "y=0", or a pair (var, jet): ("y",
    phi(x)) for the branch y = phi(x) and ("x", psi(y)) for x = psi(y).
    """
    form = _coerce_form(form)
    ctx = field_context(orbit)
    A, B = form.p_expr, form.q_expr
    if orbit is not None:
        A, B = ctx.reduce(A), ctx.reduce(B)
    if isinstance(branch, str):
        name = branch.replace("=0", "").strip()
        if name == "x":
            if not _divides(x, B):
                raise NotInvariantBranch("{x=0} is not invariant")
            return _axis_cs_x(A, B, ctx)
        if name == "y":
            if not _divides(y, A):
                raise NotInvariantBranch("{y=0} is not invariant")
            return _axis_cs_y(A, B, ctx)
        raise ValueError("unknown branch %r" % branch)
    var, jet = branch
    jet = ctx.reduce(as_expr(jet))
    if var == "x":
        A, B = B.subs({x: y, y: x}, simultaneous=True), \
            A.subs({x: y, y: x}, simultaneous=True)
        jet = jet.subs(y, x)
    elif var != "y":
        raise ValueError("branch variable must be 'x' or 'y'")
    order = max(sp.degree(jet, x), 2) if jet != 0 else 2
    residual = ctx.reduce(sp.expand(
        A.subs(y, jet) + B.subs(y, jet) * sp.diff(jet, x)))
    r_ord = _univ_order(residual, x, ctx)
    if r_ord is not None and r_ord <= order:
        raise NotInvariantBranch(
            "branch fails invariance at order %d" % r_ord)
    k, cs_full = _branch_residue(A, B, jet, ctx)
    if k is None:
        raise TruncationInsufficient("branch jet too short to see the pole")
    if jet != 0:
        trunc = sp.Add(*[t for t in sp.Add.make_args(sp.expand(jet))
                         if sp.degree(t, x) < order])
        k2, cs_trunc = _branch_residue(A, B, sp.expand(trunc), ctx)
        if k2 != k or not ctx.is_zero(ctx.reduce(cs_full - cs_trunc)):
            raise TruncationInsufficient(
                "residue moved when the top jet coefficient was dropped")
    return cs_full


# ---------------------------------------------------------------------------
# The reduction driver
# ---------------------------------------------------------------------------

@dataclass
class _AxisStatus:
    component: int
    dicritical: bool


@dataclass
class _Site:
    """A rational point scheduled for blow-up, translated to its origin."""

    A: sp.Expr
    B: sp.Expr
    axis_x: Optional[_AxisStatus]
    axis_y: Optional[_AxisStatus]
    curves: Dict[str, sp.Expr]
    label: str

    @property
    def hosts(self) -> Tuple[int, ...]:
        out = [st.component for st in (self.axis_x, self.axis_y) if st is not None]
        return tuple(sorted(out))


class _Reducer:
    def __init__(self, form: OneForm, max_blowups: int,
                 curves: Dict[str, sp.Expr], groups: Dict[str, List[Tuple[str, int]]]):
        self.form = form
        self.max_blowups = max_blowups
        self.components: List[DivisorComponent] = []
        self.points: List[InfinitelyNearPoint] = []
        self.records: List[SingularityRecord] = []
        self.edges = set()
        self.attachments: List[CurveAttachment] = []
        self.curve_mults: Dict[str, Dict[int, int]] = {lab: {} for lab in curves}
        self.groups = groups
        self.notes: List[str] = []
        self.queue = deque()
        self.queue.append(_Site(
            A=form.p_expr, B=form.q_expr, axis_x=None, axis_y=None,
            curves=dict(curves), label="p0"))

    # -- main loop ---------------------------------------------------------

    def run(self) -> ResolutionTree:
        while self.queue:
            if len(self.components) >= self.max_blowups:
                raise MaxBlowupsExceeded(
                    "reduction needs more than %d blow-ups" % self.max_blowups)
            self._blow_up_site(self.queue.popleft())
        for label in self.curve_mults:
            if not self.curve_mults[label]:
                raise FormulaMismatch(
                    "tracked curve %s never met a center" % label)
        n = len(self.components)
        mult_vectors = {
            label: tuple(mults.get(j, 0) for j in range(1, n + 1))
            for label, mults in self.curve_mults.items()
        }
        return ResolutionTree(
            original_form=self.form,
            components=self.components,
            points=self.points,
            singularities=self.records,
            edges=frozenset(self.edges),
            curve_attachments=self.attachments,
            curve_center_multiplicities=mult_vectors,
            curve_groups=self.groups,
            notes=self.notes,
        )

    # -- one blow-up -------------------------------------------------------

    def _blow_up_site(self, site: _Site) -> None:
        A, B = site.A, site.B
        nu = min(v for v in (
            vanishing_order(e) for e in (A, B) if e != 0))
        A1r, B1r = _chart1(A, B)
        A1, B1, ell1 = _strip_common_power(A1r, B1r, x)
        inv1 = _divides(x, B1)
        A2r, B2r = _chart2(A, B)
        A2, B2, ell2 = _strip_common_power(A2r, B2r, y)
        inv2 = _divides(y, A2)
        iota = 1 if inv1 else 0
        if ell1 != ell2 or inv1 != inv2 or ell1 != nu + 1 - iota:
            raise FormulaMismatch(
                "chart bookkeeping disagrees at %s: ell=(%d,%d) inv=(%s,%s) nu=%d"
                % (site.label, ell1, ell2, inv1, inv2, nu))

        n = len(self.components) + 1
        hosts = site.hosts
        comp = DivisorComponent(
            index=n, invariant_flag=inv1, recorded_discrepancy=ell1,
            self_intersection=-1, center_hosts=hosts, label=site.label)
        self.components.append(comp)
        for h in hosts:
            self.components[h - 1].self_intersection -= 1
        if len(hosts) == 2:
            self.edges.discard(frozenset(hosts))
        for h in hosts:
            self.edges.add(frozenset((h, n)))

        curve_mults_here = {}
        for label, h in site.curves.items():
            m = vanishing_order(h)
            curve_mults_here[label] = m
            self.curve_mults[label][n] = m
        self.points.append(InfinitelyNearPoint(
            index=len(self.points), host_components=hosts, label=site.label,
            local_form=(A, B), multiplicity=nu,
            curve_multiplicities=curve_mults_here))

        status_n = _AxisStatus(component=n, dicritical=not inv1)

        # strict transforms of the tracked curves in both charts
        curves1, curves2 = {}, {}
        for label, h in site.curves.items():
            m = curve_mults_here[label]
            h1 = sp.expand(h.subs(y, x * y))
            h2 = sp.expand(h.subs(x, x * y))
            if _min_exponent(h1, x) != m or _min_exponent(h2, y) != m:
                raise FormulaMismatch(
                    "curve %s strips differently from its multiplicity" % label)
            h1, h2 = _exact_div(h1, x, m), _exact_div(h2, y, m)
            if h1.has(x) or h1.has(y):
                curves1[label] = h1
            if h2.has(x) or h2.has(y):
                curves2[label] = h2

        self._scan_chart1(site, n, status_n, A1, B1, inv1, curves1)
        self._scan_chart2(site, n, status_n, A2, B2, inv1, curves2)

    # -- candidate scans ---------------------------------------------------

    def _scan_chart1(self, site, n, status_n, A1, B1, inv1, curves1) -> None:
        candidates = {}

        def add(key, payload):
            candidates.setdefault(key, payload)

        scan_poly = A1.subs(x, 0) if inv1 else B1.subs(x, 0)
        for key, payload in _root_orbits(scan_poly, y):
            add(key, payload)
        for h in curves1.values():
            h0 = sp.expand(h.subs(x, 0))
            if h0 == 0:
                raise FormulaMismatch("curve strict transform contains the divisor")
            for key, payload in _root_orbits(h0, y):
                add(key, payload)
        if site.axis_y is not None and site.axis_y.dicritical:
            if status_n.dicritical or sp.expand(A1.subs({x: 0, y: 0})) == 0:
                add(("rat", sp.Integer(0)), sp.Integer(0))

        rationals = sorted(
            (payload for key, payload in candidates.items() if key[0] == "rat"))
        orbits = [payload for key, payload in sorted(
            ((k, p) for k, p in candidates.items() if k[0] == "orb"),
            key=lambda item: item[0][1])]

        for c in rationals:
            ctx = QQ_CTX
            At = sp.expand(A1.subs(y, y + c))
            Bt = sp.expand(B1.subs(y, y + c))
            hostmap = {"x": status_n}
            if c == 0 and site.axis_y is not None:
                hostmap["y"] = site.axis_y
            curves_at = {}
            for label, h in curves1.items():
                ht = sp.expand(h.subs(y, y + c))
                if ht.subs({x: 0, y: 0}) == 0:
                    curves_at[label] = ht
            self._examine_point(
                At, Bt, ctx, hostmap, None, curves_at,
                "E%d:t=%s" % (n, c))
        for orbit in orbits:
            ctx = QuotientField(orbit.minpoly)
            At = ctx.reduce(A1.subs(y, y + ALPHA))
            Bt = ctx.reduce(B1.subs(y, y + ALPHA))
            hostmap = {"x": status_n}
            curves_at = {}
            for label, h in curves1.items():
                ht = ctx.reduce(h.subs(y, y + ALPHA))
                if ctx.is_zero(ht.subs({x: 0, y: 0})):
                    curves_at[label] = ht
            self._examine_point(
                At, Bt, ctx, hostmap, orbit, curves_at,
                "E%d:orbit(%s)" % (n, orbit.minpoly))

    def _scan_chart2(self, site, n, status_n, A2, B2, inv1, curves2) -> None:
        sing = (sp.expand(A2.subs({x: 0, y: 0})) == 0
                and sp.expand(B2.subs({x: 0, y: 0})) == 0)
        examine = sing
        if status_n.dicritical and sp.expand(A2.subs({x: 0, y: 0})) == 0:
            examine = True
        if site.axis_x is not None and site.axis_x.dicritical:
            if status_n.dicritical:
                examine = True
            elif sp.expand(B2.subs({x: 0, y: 0})) == 0:
                examine = True
        curves_at = {
            label: h for label, h in curves2.items()
            if sp.expand(h.subs({x: 0, y: 0})) == 0
        }
        if curves_at:
            examine = True
        if not examine:
            return
        hostmap = {"y": status_n}
        if site.axis_x is not None:
            hostmap["x"] = site.axis_x
        self._examine_point(A2, B2, QQ_CTX, hostmap, None, curves_at,
                            "E%d:inf" % n)

    # -- the decision at one candidate point --------------------------------

    def _examine_point(self, A, B, ctx, hostmap, orbit, curves_at, label) -> None:
        a00, b00 = _at_origin(A, ctx), _at_origin(B, ctx)
        singular = ctx.is_zero(a00) and ctx.is_zero(b00)
        kind, lin = (None, None)
        need, why = False, None
        if singular:
            kind, lin = _classify_local(A, B, ctx)
            if kind == "non_reduced":
                need, why = True, "non-reduced singularity"
            elif any(st.dicritical for st in hostmap.values()):
                need, why = True, "reduced singularity on a dicritical component"
        else:
            if len(hostmap) == 2 and all(st.dicritical for st in hostmap.values()):
                need, why = True, "corner of two dicritical components"
            if "x" in hostmap and hostmap["x"].dicritical and ctx.is_zero(b00):
                need, why = True, "tangency with a dicritical component"
            if "y" in hostmap and hostmap["y"].dicritical and ctx.is_zero(a00):
                need, why = True, "tangency with a dicritical component"
        if curves_at:
            if len(hostmap) == 2:
                need, why = True, why or "curve at a corner"
            if len(curves_at) >= 2:
                need, why = True, why or "two curves at one point"
            for h in curves_at.values():
                if vanishing_order(h, ctx) > 1:
                    need, why = True, why or "curve not yet smooth"
                    continue
                for axis in hostmap:
                    h_axis = h.subs(x, 0) if axis == "x" else h.subs(y, 0)
                    var = y if axis == "x" else x
                    if _univ_order(h_axis, var, ctx) != 1:
                        need, why = True, why or "curve tangent to the divisor"

        if need:
            if ctx.degree > 1:
                raise AlgebraicCenterUnsupported(
                    "center %s (%s) has non-rational coordinates" % (label, why))
            if why != "non-reduced singularity":
                self.notes.append("extra blow-up at %s: %s" % (label, why))
            self.queue.append(_Site(
                A=A, B=B, axis_x=hostmap.get("x"), axis_y=hostmap.get("y"),
                curves=curves_at, label=label))
            return
        if singular:
            record = self._build_record(A, B, ctx, hostmap, orbit, label, kind, lin)
            for curve_label in sorted(curves_at):
                self._attach(curve_label, hostmap, ctx, record.index, label)
            return
        for curve_label in sorted(curves_at):
            self._attach(curve_label, hostmap, ctx, None, label)

    def _attach(self, curve_label, hostmap, ctx, record_index, label) -> None:
        comps = sorted(st.component for st in hostmap.values())
        group = next(
            (name for name, members in self.groups.items()
             if any(lab == curve_label for lab, _ in members)), curve_label)
        self.attachments.append(CurveAttachment(
            curve=curve_label, group=group, component=comps[0],
            orbit_size=ctx.degree, record_index=record_index, label=label))

    # -- reduced singularity records ----------------------------------------

    def _build_record(self, A, B, ctx, hostmap, orbit, label, kind, lin):
        a, b, c, d, trace, det = lin
        comps = tuple(sorted(st.component for st in hostmap.values()))
        corner = len(comps) == 2
        if any(st.dicritical for st in hostmap.values()):
            raise FormulaMismatch(
                "recorded singularity on a dicritical component at %s" % label)

        if kind == "non_degenerate":
            cs_along = {}
            for axis, st in hostmap.items():
                cs = _axis_cs_x(A, B, ctx) if axis == "x" else _axis_cs_y(A, B, ctx)
                cs_along[st.component] = cs
            if corner:
                cs_tr, gsv_tr, formal = None, 0, False
            else:
                cs_tr = ctx.inv(cs_along[comps[0]])
                gsv_tr, formal = 1, False
            bb = ctx.reduce(trace * trace * ctx.inv(det))
            record = SingularityRecord(
                index=len(self.records), components=comps, kind=kind,
                label=label, orbit=orbit, orbit_size=ctx.degree, milnor=1,
                trace_lin=trace, det_lin=det,
                cs_along=cs_along,
                cs_along_trace={i: ctx.trace(v) for i, v in cs_along.items()},
                cs_transverse=cs_tr,
                cs_transverse_trace=None if cs_tr is None else ctx.trace(cs_tr),
                bb=bb, bb_trace=ctx.trace(bb),
                k=None, lam=None, lam_trace=None,
                tangent=False, corner=corner, weak_component=None,
                formal_transverse=formal, gsv_transverse=gsv_tr)
        else:
            k, lam, weak, _strong = _sn_weak_data(A, B, ctx)
            if k is None or k < 2:
                raise FormulaMismatch(
                    "saddle-node at %s reports k=%s" % (label, k))
            weak_line = None
            if ctx.is_zero(weak[0]):
                weak_line = "x"
            elif ctx.is_zero(weak[1]):
                weak_line = "y"
            tangent = weak_line is not None and weak_line in hostmap
            if corner and not tangent:
                raise FormulaMismatch(
                    "corner saddle-node at %s is not tangent" % label)
            weak_component = hostmap[weak_line].component if tangent else None
            cs_along = {}
            for axis, st in hostmap.items():
                cs = _axis_cs_x(A, B, ctx) if axis == "x" else _axis_cs_y(A, B, ctx)
                expected = lam if st.component == weak_component else sp.Integer(0)
                if not ctx.is_zero(ctx.reduce(cs - expected)):
                    raise FormulaMismatch(
                        "saddle-node CS along E%d at %s is %s, expected %s"
                        % (st.component, label, cs, expected))
                cs_along[st.component] = cs
            if corner:
                cs_tr, gsv_tr, formal = None, 0, False
            elif tangent:
                cs_tr, gsv_tr, formal = sp.Integer(0), 1, False
            else:
                cs_tr, gsv_tr, formal = lam, k, True
            bb = ctx.reduce(2 * k + lam)
            record = SingularityRecord(
                index=len(self.records), components=comps, kind=kind,
                label=label, orbit=orbit, orbit_size=ctx.degree, milnor=k,
                trace_lin=trace, det_lin=det,
                cs_along=cs_along,
                cs_along_trace={i: ctx.trace(v) for i, v in cs_along.items()},
                cs_transverse=cs_tr,
                cs_transverse_trace=None if cs_tr is None else ctx.trace(cs_tr),
                bb=bb, bb_trace=ctx.trace(bb),
                k=k, lam=lam, lam_trace=ctx.trace(lam),
                tangent=tangent, corner=corner, weak_component=weak_component,
                formal_transverse=formal, gsv_transverse=gsv_tr)
        self.records.append(record)
        return record


def reduce_singularities(form, max_blowups: int = 64,
                         curves: Optional[Dict[str, sp.Expr]] = None) -> ResolutionTree:
    """Reduce the singularity of omega = P dx + Q dy at the origin.

    ``curves`` maps names to polynomial equations of plane curves through
    the origin; each is split into irreducible factors and every factor
    is carried through the blow-ups until its strict transform is smooth,
    transverse to the divisor, away from corners and separated from the
    other tracked factors.  The tree then knows each factor's multiplicity
    at every center and its final attachment point.
    """
    form = _coerce_form(form)
    if not form.is_singular_at_origin():
        raise NotSingular("the 1-form is regular at the origin")
    factor_map: Dict[str, sp.Expr] = {}
    groups: Dict[str, List[Tuple[str, int]]] = {}
    if curves:
        for name in sorted(curves):
            expr = as_expr(curves[name])
            if expr == 0:
                raise ZeroPolynomial("curve %s is the zero polynomial" % name)
            _, factors = sp.factor_list(sp.Poly(expr, x, y))
            members = []
            idx = 0
            for fac, mult in factors:
                fe = sp.expand(fac.as_expr())
                if fe.subs({x: 0, y: 0}) != 0:
                    continue  # factor misses the origin, no effect on the germ
                label = "%s.%d" % (name, idx)
                idx += 1
                factor_map[label] = fe
                members.append((label, int(mult)))
            if not members:
                raise NotInvariantBranch(
                    "curve %s does not pass through the origin" % name)
            groups[name] = members
    reducer = _Reducer(form, max_blowups, factor_map, groups)
    return reducer.run()
