import sympy as sp
import pytest

from foliations.algebra import x, y
from foliations.combinatorics import (
    intersection_matrix,
    proximity_matrix,
    saddle_node_vectors,
)
from foliations.errors import (
    CommonComponent,
    NotInvariant,
    UnsupportedBranch,
)
from foliations.oracles import (
    bb_recursion_check,
    cs_index_theorem_check,
    intersection_multiplicity,
    milnor_direct,
    multiplicity_along_branch_direct,
    newton_puiseux,
    noether_check,
    polar_oracle,
    t,
    van_den_essen_check,
)
from foliations.resolution import OneForm, reduce_singularities


def test_intersection_multiplicity_values():
    assert intersection_multiplicity(x, y) == 1
    assert intersection_multiplicity(y**2 - x**3, y) == 3
    assert intersection_multiplicity(y**2 - x**3, y - x) == 2
    assert intersection_multiplicity(y**2 - x**3, y**2 + x**3) == 6
    assert intersection_multiplicity(y - x**2, y + x**2) == 2
    with pytest.raises(CommonComponent):
        intersection_multiplicity(x * y, sp.expand(y * (y - x)))


def test_intersection_multiplicity_seed_independent():
    for seed in (0, 1, 7):
        assert intersection_multiplicity(
            y**3 - x**5, y - x**2, seed=seed) == 5


def test_milnor_direct_values():
    assert milnor_direct(OneForm.from_exprs(3 * x**2, 2 * y)) == 2
    assert milnor_direct(OneForm.from_exprs(-y, x)) == 1
    f = sp.expand(x * y * (x + y))
    assert milnor_direct(
        OneForm.from_exprs(sp.diff(f, x), sp.diff(f, y))) == 4


def test_newton_puiseux_cusp():
    branches = newton_puiseux(y**2 - x**3)
    assert len(branches) == 1
    gx, gy = branches[0]
    assert (gx, gy) == (t**2, t**3)


def test_newton_puiseux_negative_chart():
    branches = newton_puiseux(y**2 + x**3)
    assert len(branches) == 1
    gx, gy = branches[0]
    assert (gx, gy) == (-t**2, t**3)


def test_newton_puiseux_two_smooth_branches():
    f = sp.expand((y - x**2) * (y + x + x**3))
    branches = newton_puiseux(f)
    assert len(branches) == 2
    for gx, gy in branches:
        resid = sp.expand(f.subs({x: gx, y: gy}, simultaneous=True))
        if resid != 0:
            assert min(m[0] for m in sp.Poly(resid, t).monoms()) > 10


def test_newton_puiseux_vanishing_property():
    for f in (y**3 - x**2, sp.expand(y * (y**2 - x**5)),
              sp.expand((y - x) * (y + 2 * x) * (y**2 - x**3))):
        for gx, gy in newton_puiseux(f, truncation=14):
            resid = sp.expand(f.subs({x: gx, y: gy}, simultaneous=True))
            if resid != 0:
                assert min(m[0] for m in sp.Poly(resid, t).monoms()) > 12
    with pytest.raises(UnsupportedBranch):
        newton_puiseux(y**2 - 2 * x**3)


def test_multiplicity_along_branch():
    cusp_diff = OneForm.from_exprs(-3 * x**2, 2 * y)
    assert multiplicity_along_branch_direct(cusp_diff, (t**2, t**3)) == 2
    with pytest.raises(NotInvariant):
        multiplicity_along_branch_direct(cusp_diff, (t, t))


def test_van_den_essen_on_examples():
    for p, q in [(3 * x**2, 2 * y), (-y, x),
                 (y, sp.expand(-(2 * x + y**2)))]:
        form = OneForm.from_exprs(p, q)
        tree = reduce_singularities(form)
        assert van_den_essen_check(tree, milnor_direct(form))


def test_cs_theorem_on_cusp():
    tree = reduce_singularities(OneForm.from_exprs(3 * x**2, 2 * y))
    verdicts = cs_index_theorem_check(tree)
    assert len(verdicts) == 3
    assert all(verdicts.values())


def test_bb_recursion_oracle():
    tree = reduce_singularities(OneForm.from_exprs(
        sp.expand((x * y + x**2 * y - x**2 - y**2) * y),
        sp.expand(-(x - 1) * x**3)))
    assert bb_recursion_check(tree, 16)
    assert not bb_recursion_check(tree, 17)


def test_noether_on_cusp_and_line():
    tree = reduce_singularities(
        OneForm.from_exprs(y, x),
        curves={"C": y**2 - x**3, "D": y - x})
    F = proximity_matrix(tree)
    A = intersection_matrix(tree)
    assert noether_check(F, A, tree.group_s_vector("C"),
                         tree.group_s_vector("D"),
                         y**2 - x**3, y - x)


def test_polar_oracle_tangent_saddle_node():
    form = OneForm.from_exprs(y, y - x)
    assert polar_oracle(form, y, y) == 1


def test_polar_oracle_generalized_curve_is_zero():
    f = sp.expand(y**2 - x**3)
    form = OneForm.from_exprs(sp.diff(f, x), sp.diff(f, y))
    assert polar_oracle(form, f, f) == 0
