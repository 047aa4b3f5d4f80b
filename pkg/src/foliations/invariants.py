"""Closed formulas for the numerical invariants of a resolved foliation.

Every operation evaluates a formula in the combinatorial data (F, A,
S-vectors) of a resolution tree and, where an independent value exists
(engine-recorded orders, resultant oracles), asserts exact agreement.
Disagreement raises FormulaMismatch: these checks are tripwires, not
tolerances.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import sympy as sp

from . import combinatorics as cb
from . import oracles
from .algebra import as_expr, vanishing_order
from .errors import FormulaMismatch, NotInvariant, NotReducedEffective
from .resolution import OneForm, ResolutionTree, reduce_singularities


def _col(entries) -> sp.Matrix:
    return sp.Matrix([[sp.Rational(e)] for e in entries])


@dataclass(frozen=True)
class TreeData:
    """One tree with all its combinatorial data computed once."""

    tree: ResolutionTree
    F: sp.ImmutableMatrix
    A: sp.ImmutableMatrix
    balanced: cb.AttachmentDivisor
    vectors: cb.SaddleNodeVectors
    tau: sp.Matrix
    tau0: sp.Rational

    @property
    def n(self) -> int:
        return self.tree.n

    def iota(self) -> sp.Matrix:
        return _col(self.tree.iota())

    def delta(self) -> sp.Matrix:
        return _col(self.tree.delta())

    def ones(self) -> sp.Matrix:
        return sp.ones(self.n, 1)

    def minus_A_inv(self) -> sp.Matrix:
        return -self.A.inv()

    def M(self) -> sp.Matrix:
        """-A^{-1} S_F, the pullback orders of the foliation divisor."""
        return self.minus_A_inv() * _col(self.vectors.S_F)

    def milnor_weight(self) -> sp.Matrix:
        """-A^{-1} S_F - (I + F^{-1}) u with u the all-ones vector."""
        n = self.n
        return self.M() - (sp.eye(n) + self.F.inv()) * self.ones()


def tree_data(tree: ResolutionTree) -> TreeData:
    F = cb.proximity_matrix(tree)
    A = cb.intersection_matrix(tree)
    balanced = cb.balanced_divisor(tree)
    vectors = cb.saddle_node_vectors(tree, balanced)
    tau, tau0 = cb.tangency_excess_vector(F, vectors.T)
    return TreeData(tree=tree, F=F, A=A, balanced=balanced,
                    vectors=vectors, tau=tau, tau0=tau0)


# ---------------------------------------------------------------------------
# Divisor vectors
# ---------------------------------------------------------------------------

def discrepancy_vector(data: TreeData) -> List[int]:
    """l = (F^{-1})^T S_F - F iota, cross-checked three ways.

    The second route goes through nu(B) + tau - F iota and the third is
    the engine-recorded exceptional orders from the blow-ups.
    """
    F, iota = data.F, data.iota()
    ell = F.inv().T * _col(data.vectors.S_F) - F * iota
    via_b = (cb.multiplicities_of_divisor(F, data.vectors.S_B)
             + data.tau - F * iota)
    recorded = _col(data.tree.recorded_ell())
    if ell != via_b:
        raise FormulaMismatch("discrepancy routes disagree: %s vs %s"
                              % (list(ell), list(via_b)))
    if ell != recorded:
        raise FormulaMismatch("discrepancy formula %s != recorded orders %s"
                              % (list(ell), list(recorded)))
    return [int(e) for e in ell]


def multiplicity_vector(data: TreeData) -> List[int]:
    """nu_F = (F^{-1})^T S_F - F iota - delta, with two more tripwires.

    The first entry must equal the vanishing order of the input form,
    and the balanced-divisor relation nu_0(F) = nu_0(B) - 1 + tau_0 must hold.
    """
    F = data.F
    nu = (F.inv().T * _col(data.vectors.S_F) - F * data.iota()
          - data.delta())
    ell = discrepancy_vector(data)
    if [int(e) for e in nu] != [l - 1 + i for l, i
                                in zip(ell, data.tree.iota())]:
        raise FormulaMismatch("l = nu_F + u - iota violated")
    form = data.tree.original_form
    direct = min(vanishing_order(form.p_expr), vanishing_order(form.q_expr))
    if int(nu[0]) != direct:
        raise FormulaMismatch("nu_0 formula %s != direct order %s"
                              % (nu[0], direct))
    nu_b = cb.multiplicities_of_divisor(F, data.vectors.S_B)
    if nu[0] != nu_b[0] - 1 + data.tau0:
        raise FormulaMismatch("nu_0(F) = nu_0(B) - 1 + tau_0 violated: "
                              "%s vs %s - 1 + %s" % (nu[0], nu_b[0], data.tau0))
    return [int(e) for e in nu]


# ---------------------------------------------------------------------------
# Milnor numbers
# ---------------------------------------------------------------------------

def milnor_number(data: TreeData, seed: int = 0) -> int:
    """mu_0 = <-A^{-1}S_F - (I+F^{-1})u, S_F> + 1 + T(B), oracle-checked."""
    value = ((data.milnor_weight().T * _col(data.vectors.S_F))[0] + 1
             + cb.transverse_excess(data.tree, data.balanced))
    direct = oracles.milnor_direct(data.tree.original_form, seed=seed)
    if value != direct:
        raise FormulaMismatch("Milnor formula %s != oracle %s"
                              % (value, direct))
    return int(value)


def _check_invariant_attachments(data: TreeData, divisor: cb.AttachmentDivisor):
    for br in divisor.branches:
        comp = data.tree.components[br.component - 1]
        if br.record_index is None and comp.invariant_flag and not br.curvette:
            raise NotInvariant(
                "branch %s meets an invariant component at a regular free "
                "point, so it cannot be invariant" % br.label)


def milnor_along(data: TreeData, divisor: cb.AttachmentDivisor) -> int:
    """mu_0(F, C) = <-A^{-1}S_F - (I+F^{-1})u, S_C> + 1 + T(C)."""
    _check_invariant_attachments(data, divisor)
    s_c = _col(divisor.s_vector(data.n))
    value = ((data.milnor_weight().T * s_c)[0] + 1
             + cb.transverse_excess(data.tree, divisor))
    return int(value)


# ---------------------------------------------------------------------------
# Indices
# ---------------------------------------------------------------------------

def gsv(data: TreeData, divisor: cb.AttachmentDivisor) -> int:
    """GSV_0(F, C) = <-A^{-1}(S_F - S_C), S_C> + T(C) for reduced effective C."""
    if any(br.coefficient != 1 for br in divisor.branches):
        raise NotReducedEffective(
            "GSV needs every branch with coefficient exactly 1")
    _check_invariant_attachments(data, divisor)
    s_c = _col(divisor.s_vector(data.n))
    s_f = _col(data.vectors.S_F)
    value = ((data.minus_A_inv() * (s_f - s_c)).T * s_c)[0]
    return int(value + cb.transverse_excess(data.tree, divisor))


def _local_cs(data: TreeData, br: cb.Attachment) -> sp.Rational:
    if br.record_index is None:
        return sp.Rational(0)
    return sp.Rational(data.tree.singularities[br.record_index].cs_transverse_trace)


def _local_gsv(data: TreeData, br: cb.Attachment) -> int:
    if br.record_index is None:
        return 0
    rec = data.tree.singularities[br.record_index]
    return rec.gsv_transverse * rec.orbit_size


def cs(data: TreeData, divisor: cb.AttachmentDivisor):
    """CS_0(F, C): local Camacho-Sad sums plus <-A^{-1}S_C, S_C>.

    The local terms enter with positive sign for both the zero and the
    polar part; the quadratic term uses the signed S_C.
    """
    _check_invariant_attachments(data, divisor)
    local = sum((_local_cs(data, br) for br in divisor.branches),
                sp.Rational(0))
    s_c = _col(divisor.s_vector(data.n))
    return local + ((data.minus_A_inv() * s_c).T * s_c)[0]


def variation(data: TreeData, divisor: cb.AttachmentDivisor):
    """Var_0(F, C): signed local variations plus <-A^{-1}S_F - iota, S_C>.

    Locally Var_p = CS_p + GSV_p; branches of the polar part enter with
    negative sign.  For effective divisors the global relation
    Var = CS + GSV is asserted.
    """
    _check_invariant_attachments(data, divisor)
    local = sp.Rational(0)
    for br in divisor.branches:
        local += br.coefficient * (_local_cs(data, br)
                                   + _local_gsv(data, br))
    s_c = _col(divisor.s_vector(data.n))
    s_f = _col(data.vectors.S_F)
    value = local + ((data.minus_A_inv() * s_f - data.iota()).T * s_c)[0]
    if divisor.effective() and all(br.coefficient == 1
                                   for br in divisor.branches):
        other = cs(data, divisor) + gsv(data, divisor)
        if value != other:
            raise FormulaMismatch("Var %s != CS + GSV %s" % (value, other))
    return value


def baum_bott(data: TreeData):
    """BB_0 = sum of local BB + <-A^{-1}S_F, S_F> - 2<S_F, iota> - <A iota, iota>."""
    local = sum((sp.Rational(rec.bb_trace)
                 for rec in data.tree.singularities), sp.Rational(0))
    s_f = _col(data.vectors.S_F)
    iota = data.iota()
    value = (local + ((data.minus_A_inv() * s_f).T * s_f)[0]
             - 2 * (s_f.T * iota)[0] - (iota.T * data.A * iota)[0])
    return value


def polar_excess(data: TreeData, divisor: cb.AttachmentDivisor):
    """Delta_0(F, C) = T(C) + <-A^{-1} T_F, S_C>, extended linearly."""
    s_c = _col(divisor.s_vector(data.n))
    t_f = _col(data.vectors.T)
    return (cb.transverse_excess(data.tree, divisor)
            + ((data.minus_A_inv() * t_f).T * s_c)[0])


# ---------------------------------------------------------------------------
# Classification and global relations
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Classification:
    generalized_curve: bool
    second_type: bool
    cnd: bool


def classify_foliation(data: TreeData) -> Classification:
    """generalized_curve: no saddle-nodes; second_type: T = 0; cnd: C = 0.

    The discrepancy criterion for second type (l computed from S_B alone)
    is asserted against the T = 0 definition.
    """
    gc = not any(rec.saddle_node for rec in data.tree.singularities)
    second = all(t == 0 for t in data.vectors.T)
    cnd = all(c == 0 for c in data.vectors.C)
    ell_b = (data.F.inv().T * _col(data.vectors.S_B)
             - data.F * data.iota())
    criterion = list(ell_b) == [sp.Integer(l)
                                for l in discrepancy_vector(data)]
    if criterion != second:
        raise FormulaMismatch(
            "second-type criteria disagree: T=0 gives %s, the discrepancy "
            "test gives %s" % (second, criterion))
    if gc and not second:
        raise FormulaMismatch("no saddle-nodes but T != 0")
    if second and not cnd:
        raise FormulaMismatch("T = 0 but C != 0 despite C <= T")
    return Classification(generalized_curve=gc, second_type=second, cnd=cnd)


@dataclass(frozen=True)
class GlobalRelations:
    var_minus_cs: sp.Rational
    bb_minus_var: sp.Rational
    bb_minus_cs: sp.Rational
    delta: sp.Rational
    tau_norm_sq: sp.Rational
    generalized_curve: bool


def theorem_pi_report(data: TreeData) -> GlobalRelations:
    """The three index gaps on the balanced divisor and their certificates.

    Asserts Var - CS = Delta >= 0, BB - Var = Delta + |tau|^2 and
    BB - CS = 2 Delta + |tau|^2, plus the four-way equivalence of the
    gaps vanishing with the absence of saddle-nodes.
    """
    B = data.balanced
    bb = baum_bott(data)
    var_b = variation(data, B)
    cs_b = cs(data, B)
    delta = polar_excess(data, B)
    tau_sq = (data.tau.T * data.tau)[0]
    if var_b - cs_b != delta:
        raise FormulaMismatch("Var - CS = %s but Delta = %s"
                              % (var_b - cs_b, delta))
    if bb - var_b != delta + tau_sq:
        raise FormulaMismatch("BB - Var = %s but Delta + |tau|^2 = %s"
                              % (bb - var_b, delta + tau_sq))
    if bb - cs_b != 2 * delta + tau_sq:
        raise FormulaMismatch("BB - CS = %s but 2 Delta + |tau|^2 = %s"
                              % (bb - cs_b, 2 * delta + tau_sq))
    if delta < 0:
        raise FormulaMismatch("Delta on the balanced divisor is negative")
    gc = classify_foliation(data).generalized_curve
    gaps_vanish = [var_b == cs_b, bb == var_b, bb == cs_b]
    if any(g != gc for g in gaps_vanish):
        raise FormulaMismatch(
            "gap vanishing %s does not match generalized-curve %s"
            % (gaps_vanish, gc))
    return GlobalRelations(var_minus_cs=var_b - cs_b, bb_minus_var=bb - var_b,
                           bb_minus_cs=bb - cs_b, delta=delta,
                           tau_norm_sq=tau_sq, generalized_curve=gc)


def mil_intmil_gap(data: TreeData, seed: int = 0) -> Tuple[int, int]:
    """Gaps mu_0(F) - mu_0(F, B) and mu_0(F) - mu_0(F, B').

    B' is the corner-weighted balanced divisor, entering only through
    S_B' = S_F - C_F and T(B') = T(B).  Both gaps are evaluated by the
    closed right-hand sides and by direct subtraction; second type
    forces the first gap to vanish, CND the second.
    """
    weight = data.milnor_weight()
    mu0 = milnor_number(data, seed=seed)
    gap_b = int((weight.T * _col(data.vectors.T))[0])
    direct_b = mu0 - milnor_along(data, data.balanced)
    if gap_b != direct_b:
        raise FormulaMismatch("gap to B: formula %s != direct %s"
                              % (gap_b, direct_b))
    gap_bp = int((weight.T * _col(data.vectors.C))[0])
    s_bp = [f - c for f, c in zip(data.vectors.S_F, data.vectors.C)]
    mu_bp = ((weight.T * _col(s_bp))[0] + 1
             + cb.transverse_excess(data.tree, data.balanced))
    if gap_bp != mu0 - mu_bp:
        raise FormulaMismatch("gap to B': formula %s != direct %s"
                              % (gap_bp, mu0 - mu_bp))
    classification = classify_foliation(data)
    if classification.second_type and gap_b != 0:
        raise FormulaMismatch("second type but mu gap to B is %s" % gap_b)
    if classification.cnd and gap_bp != 0:
        raise FormulaMismatch("CND but mu gap to B' is %s" % gap_bp)
    return gap_b, gap_bp


# ---------------------------------------------------------------------------
# User curves
# ---------------------------------------------------------------------------

def user_divisor(tree: ResolutionTree, name: str) -> cb.AttachmentDivisor:
    """The attachment divisor of a tracked input curve on its tree."""
    branches = []
    for label, mult in tree.curve_groups[name]:
        for att in tree.curve_attachments:
            if att.curve != label:
                continue
            comp = tree.components[att.component - 1]
            branches.append(cb.Attachment(
                component=att.component, coefficient=mult,
                orbit_size=att.orbit_size, record_index=att.record_index,
                formal=False, curvette=not comp.invariant_flag,
                label=att.label))
    return cb.AttachmentDivisor(tuple(branches))


def attach_user_curve(tree: ResolutionTree, f, name: str = "C",
                      max_blowups: int = 64):
    """Extend the resolution of the form so {f=0} is also resolved.

    Returns the extended tree and the attachment divisor of the curve.
    The extension restarts from the original form; all formulas hold on
    any reduction, minimal or not.
    """
    curves = {name: as_expr(f)}
    new_tree = reduce_singularities(tree.original_form,
                                    max_blowups=max_blowups, curves=curves)
    return new_tree, user_divisor(new_tree, name)


# ---------------------------------------------------------------------------
# Aggregate report
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DivisorIndices:
    name: str
    s_vector: List[int]
    mu_along: Optional[int]
    cs: Optional[sp.Rational]
    var: Optional[sp.Rational]
    gsv: Optional[int]
    delta: sp.Rational
    notes: Tuple[str, ...] = ()


@dataclass(frozen=True)
class InvariantReport:
    data: TreeData
    ell: List[int]
    nu: List[int]
    milnor: int
    bb: sp.Rational
    classification: Classification
    relations: GlobalRelations
    mil_gaps: Tuple[int, int]
    divisors: Dict[str, DivisorIndices]


def _divisor_indices(data: TreeData, name: str,
                     divisor: cb.AttachmentDivisor) -> DivisorIndices:
    notes = []
    try:
        mu_c = milnor_along(data, divisor)
        cs_c = cs(data, divisor)
        var_c = variation(data, divisor)
    except NotInvariant as exc:
        mu_c = cs_c = var_c = None
        notes.append("skipped invariant-only indices: %s" % exc)
    try:
        gsv_c = gsv(data, divisor)
    except (NotReducedEffective, NotInvariant) as exc:
        gsv_c = None
        notes.append("skipped GSV: %s" % exc)
    return DivisorIndices(
        name=name, s_vector=divisor.s_vector(data.n), mu_along=mu_c,
        cs=cs_c, var=var_c, gsv=gsv_c, delta=polar_excess(data, divisor),
        notes=tuple(notes))


def analyze(form, curves: Optional[Dict[str, object]] = None,
            max_blowups: int = 64, seed: int = 0) -> InvariantReport:
    """Resolve, evaluate every closed formula, and cross-check them all."""
    if not isinstance(form, OneForm):
        form = OneForm.from_exprs(form[0], form[1])
    tree = reduce_singularities(form, max_blowups=max_blowups,
                                curves=curves or None)
    data = tree_data(tree)
    divisors = {"balanced": _divisor_indices(data, "balanced", data.balanced)}
    for name in (curves or {}):
        divisors[name] = _divisor_indices(data, name,
                                          user_divisor(tree, name))
    return InvariantReport(
        data=data,
        ell=discrepancy_vector(data),
        nu=multiplicity_vector(data),
        milnor=milnor_number(data, seed=seed),
        bb=baum_bott(data),
        classification=classify_foliation(data),
        relations=theorem_pi_report(data),
        mil_gaps=mil_intmil_gap(data, seed=seed),
        divisors=divisors)
