import sympy as sp
from hypothesis import given, settings
from hypothesis import strategies as st

import pytest

from foliations.algebra import (
    ALPHA,
    AlgebraicOrbit,
    BiPoly,
    QQ_CTX,
    QuotientField,
    field_context,
    lowest_homogeneous_part,
    residue_at_zero,
    resonance_ratio_test,
    tangent_cone_roots,
    univariate_resultant,
    vanishing_order,
    x,
    y,
)
from foliations.errors import DegenerateLinearPart, ZeroPolynomial

rationals = st.fractions(min_value=-5, max_value=5)


def _expr_from(terms):
    return sp.expand(sp.Add(*[
        sp.Rational(c) * x**i * y**j for (i, j), c in terms.items()]))


term_maps = st.dictionaries(
    st.tuples(st.integers(0, 4), st.integers(0, 4)), rationals,
    min_size=1, max_size=6)


@settings(max_examples=40, deadline=None)
@given(term_maps)
def test_bipoly_round_trip(terms):
    expr = _expr_from(terms)
    assert BiPoly.from_expr(expr).as_expr() == expr


@settings(max_examples=40, deadline=None)
@given(term_maps)
def test_tangent_cone_multiplicities_sum_to_order(terms):
    expr = _expr_from(terms)
    if expr == 0:
        return
    order = vanishing_order(expr)
    cone = lowest_homogeneous_part(expr)
    assert vanishing_order(cone) == order
    total = sum(d.multiplicity * (1 if d.at_infinity else d.orbit.degree)
                for d in tangent_cone_roots(expr))
    assert total == order


def test_vanishing_order_zero_rejected():
    with pytest.raises(ZeroPolynomial):
        vanishing_order(0)


def test_resonance_ratio_cases():
    # eigenvalues 2 and 3: ratio 3/2
    assert resonance_ratio_test(5, 6) == sp.Rational(3, 2)
    # eigenvalues 1 and 2: ratio 2
    assert resonance_ratio_test(3, 2) == 2
    # eigenvalues 1 and -1: no positive rational ratio
    assert resonance_ratio_test(0, -1) is None
    # eigenvalues i, -i: trace 0, det 1 gives ratio -1, not positive
    assert resonance_ratio_test(0, 1) is None
    with pytest.raises(DegenerateLinearPart):
        resonance_ratio_test(1, 0)


def test_quotient_field_arithmetic():
    K = QuotientField(ALPHA**2 - 2)
    e = 1 + ALPHA
    assert K.reduce(e * K.inv(e)) == 1
    assert K.trace(ALPHA) == 0
    assert K.trace(sp.Integer(1)) == 2
    assert K.trace(ALPHA + 3) == 6
    # alpha^2 reduces to 2
    assert K.reduce(ALPHA**2) == 2
    assert not K.is_rational(ALPHA)
    assert K.as_rational(K.reduce(ALPHA**2)) == 2


@settings(max_examples=30, deadline=None)
@given(st.fractions(min_value=-4, max_value=4),
       st.fractions(min_value=-4, max_value=4))
def test_quotient_field_inverse_property(a, b):
    K = QuotientField(ALPHA**2 - ALPHA - 1)
    e = sp.Rational(a) + sp.Rational(b) * ALPHA
    if K.is_zero(e):
        return
    assert K.reduce(e * K.inv(e)) == 1


def test_field_context_dispatch():
    assert field_context(None) is QQ_CTX
    assert field_context(AlgebraicOrbit(ALPHA - 3)) is QQ_CTX
    K = field_context(AlgebraicOrbit(ALPHA**2 - 2))
    assert isinstance(K, QuotientField)


def test_residue_at_zero_matches_sympy():
    t = sp.Symbol("t")
    cases = [
        (1, t * (1 - t)),
        (t + 1, t**2),
        (2 + t, t**3 * (1 + t)),
        (1, 1 + t),  # regular point: residue 0
        (t**2 + 3 * t, t**2 * (2 - t)),
    ]
    for num, den in cases:
        mine = residue_at_zero(sp.expand(num), sp.expand(den), t)
        ref = sp.residue(sp.Rational(1) * num / den, t, 0)
        assert mine == ref


def test_residue_in_quotient_field():
    t = sp.Symbol("t")
    K = QuotientField(ALPHA**2 - 2)
    # residue of alpha / (t (1 - alpha t)) at 0 is alpha
    r = residue_at_zero(ALPHA, sp.expand(t * (1 - ALPHA * t)), t, ctx=K)
    assert K.reduce(r - ALPHA) == 0


def test_univariate_resultant():
    assert univariate_resultant(y - x**2, y - x**3, y) == sp.expand(
        x**2 - x**3)
    with pytest.raises(ZeroPolynomial):
        univariate_resultant(0, y, y)
