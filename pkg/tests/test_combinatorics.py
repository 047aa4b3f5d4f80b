import sympy as sp
from hypothesis import given, settings
from hypothesis import strategies as st

from foliations.algebra import x, y
from foliations.combinatorics import (
    balanced_divisor,
    intersection_matrix,
    multiplicities_of_divisor,
    permute,
    proximity_matrix,
    pullback_orders,
    saddle_node_vectors,
    tangency_excess_vector,
    transverse_excess,
    weights_vector,
)
from foliations.resolution import OneForm, reduce_singularities

CUSP = reduce_singularities(OneForm.from_exprs(3 * x**2, 2 * y))
ED = reduce_singularities(OneForm.from_exprs(
    sp.expand((x * y + x**2 * y - x**2 - y**2) * y),
    sp.expand(-(x - 1) * x**3)))
CORNER_SN = reduce_singularities(
    OneForm.from_exprs(y, sp.expand(-(2 * x + y**2))))
RADIAL = reduce_singularities(OneForm.from_exprs(-y, x))


def test_cusp_matrices_and_weights():
    F = proximity_matrix(CUSP)
    A = intersection_matrix(CUSP)
    assert F.tolist() == [[1, 0, 0], [-1, 1, 0], [-1, -1, 1]]
    assert A.tolist() == [[-3, 0, 1], [0, -2, 1], [1, 1, -1]]
    assert list(weights_vector(F)) == [1, 1, 2]
    assert (-F.T * F - A).is_zero_matrix


def test_cusp_curve_multiplicities():
    F = proximity_matrix(CUSP)
    A = intersection_matrix(CUSP)
    S_C = [0, 0, 1]  # the cusp y^2 + x^3 attaches to the last component
    assert list(multiplicities_of_divisor(F, S_C)) == [2, 1, 1]
    assert list(pullback_orders(A, S_C)) == [2, 3, 6]


def test_ed_vectors():
    F = proximity_matrix(ED)
    A = intersection_matrix(ED)
    assert F.tolist() == [[1, 0], [-1, 1]]
    assert A.tolist() == [[-2, 1], [1, -1]]
    sn = saddle_node_vectors(ED)
    assert list(sn.T) == [1, 0]
    assert list(sn.C) == [0, 0]
    assert list(sn.S_B) == [2, 1]
    assert list(sn.S_F) == [3, 1]
    tau, tau0 = tangency_excess_vector(F, sn.T)
    assert list(tau) == [1, 0]
    assert tau0 == 1
    B = balanced_divisor(ED)
    assert transverse_excess(ED, B) == 0
    # one curvette on the dicritical component, two traced separatrices
    assert sorted(a.curvette for a in B.branches) == [False, False, True]


def test_corner_sn_vectors():
    sn = saddle_node_vectors(CORNER_SN)
    assert list(sn.T) == [0, 1]
    assert list(sn.C) == [0, 1]
    assert list(sn.S_B) == [1, 0]
    assert list(sn.S_F) == [1, 1]
    tau, tau0 = tangency_excess_vector(proximity_matrix(CORNER_SN), sn.T)
    assert list(tau) == [1, 1]
    assert tau0 == 1


def test_radial_balanced_divisor():
    sn = saddle_node_vectors(RADIAL)
    assert list(sn.S_B) == [2]
    B = balanced_divisor(RADIAL)
    assert all(a.curvette for a in B.branches)
    assert len(B.branches) == 2


def test_permute_cusp():
    F = proximity_matrix(CUSP)
    A = intersection_matrix(CUSP)
    pd = permute(F, A, (2, 3, 1), vectors={"S_C": [0, 0, 1]})
    assert pd.A.tolist() == [[-2, 1, 0], [1, -1, 1], [0, 1, -3]]
    assert list(pd.vectors["S_C"]) == [0, 1, 0]
    assert (-pd.F.T * pd.F - pd.A).is_zero_matrix


@settings(max_examples=25, deadline=None)
@given(st.permutations([1, 2, 3]), st.lists(
    st.integers(0, 3), min_size=3, max_size=3))
def test_permutation_preserves_quadratics(sigma, s):
    F = proximity_matrix(CUSP)
    A = intersection_matrix(CUSP)
    col = sp.Matrix(s)
    pd = permute(F, A, sigma, vectors={"S": s})
    col2 = sp.Matrix(list(pd.vectors["S"]))
    assert (-pd.F.T * pd.F - pd.A).is_zero_matrix
    q1 = (col.T * (-A.inv()) * col)[0]
    q2 = (col2.T * (-pd.A.inv()) * col2)[0]
    assert q1 == q2
    assert sum(multiplicities_of_divisor(F, s)) == sum(
        multiplicities_of_divisor(pd.F, list(pd.vectors["S"])))
