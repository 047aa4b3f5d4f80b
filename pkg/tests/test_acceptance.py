"""End-to-end acceptance gate.

Each test prints a single PASS/FAIL verdict line for its criterion, then
asserts.  All equalities are exact; nothing here is tolerance-based.
"""
import random

import sympy as sp

from corpus import CORPUS

from foliations import combinatorics as cb
from foliations import invariants as inv
from foliations import oracles
from foliations.algebra import x, y
from foliations.resolution import OneForm, reduce_singularities


def _report(name, checks):
    """Print one verdict line, then fail on the first broken check."""
    ok = all(bool(v) for v in checks.values())
    print("ACCEPTANCE CRITERION %s: %s" % (name, "PASS" if ok else "FAIL"))
    for label, verdict in checks.items():
        assert verdict, "criterion %s failed at: %s" % (name, label)


def test_criterion_1_dicritical_example(corpus_reports):
    rep = corpus_reports["example-dicritical-sn"]
    data = rep.data
    F, A = data.F, data.A
    iota = sp.Matrix(data.tree.iota())
    S_F = sp.Matrix([[sp.Rational(e)] for e in data.vectors.S_F])
    S_B = sp.Matrix([[sp.Rational(e)] for e in data.vectors.S_B])
    via_sf = F.inv().T * S_F - F * iota
    via_sb = F.inv().T * S_B - F * iota
    checks = {
        "F": F.tolist() == [[1, 0], [-1, 1]],
        "S_B": list(data.vectors.S_B) == [2, 1],
        "iota": data.tree.iota() == [1, 0],
        "ell": rep.ell == [3, 2],
        "T": list(data.vectors.T) == [1, 0],
        "ell via S_F": list(via_sf) == [3, 2],
        "S_B route differs": list(via_sb) == [2, 2] and list(via_sb) != rep.ell,
        "cnd and not second type": (rep.classification.cnd
                                    and not rep.classification.second_type),
    }
    _report("1", checks)


def test_criterion_2_corner_example(corpus_reports):
    rep = corpus_reports["example-corner-sn"]
    data = rep.data
    n = data.F.rows
    S_F = sp.Matrix([[sp.Rational(e)] for e in data.vectors.S_F])
    weight = -data.A.inv() * S_F - (sp.eye(n) + data.F.inv()) * sp.ones(n, 1)
    checks = {
        "two blow-ups": n == 2,
        "corner saddle-node": any(
            r.saddle_node and r.corner for r in data.tree.singularities),
        "S_B": list(data.vectors.S_B) == [1, 0],
        "T": list(data.vectors.T) == [0, 1],
        "C": list(data.vectors.C) == [0, 1],
        "A": data.A.tolist() == [[-2, 1], [1, -1]],
        "weight vector vanishes": weight.is_zero_matrix,
        "milnor 1": rep.milnor == 1,
        "milnor oracle": rep.milnor == oracles.milnor_direct(
            data.tree.original_form),
        "mil gap 0 without cnd": (rep.mil_gaps[0] == 0
                                  and not rep.classification.cnd),
    }
    _report("2", checks)


def test_criterion_3_tangent_example(corpus_reports):
    rep = corpus_reports["example-tangent-sn"]
    data = rep.data
    sn = [r for r in data.tree.singularities if r.saddle_node]
    checks = {
        "single blow-up": data.F.rows == 1,
        "tangent saddle-node k=2": (len(sn) == 1 and sn[0].k == 2
                                    and sn[0].tangent and not sn[0].corner),
        "S_B": list(data.vectors.S_B) == [1],
        "T": list(data.vectors.T) == [1],
        "S_F": list(data.vectors.S_F) == [2],
        "mil gap 0": rep.mil_gaps[0] == 0,
        "not second type": not rep.classification.second_type,
    }
    _report("3", checks)


def test_criterion_4_cusp_permutation(corpus_reports):
    rep = corpus_reports["h-cusp"]
    data = rep.data
    tree = reduce_singularities(
        OneForm.from_exprs(3 * x**2, 2 * y), curves={"C": y**2 + x**3})
    S_C = tree.group_s_vector("C")
    moved = cb.permute(data.F, data.A, (2, 3, 1),
                       {"S_F": data.vectors.S_F, "S_C": S_C,
                        "iota": data.tree.iota()})
    s_f = sp.Matrix([[sp.Rational(e)] for e in moved.vectors["S_F"]])
    iota = sp.Matrix([[sp.Rational(e)] for e in moved.vectors["iota"]])
    ones = sp.ones(3, 1)
    weight = -moved.A.inv() * s_f - (sp.eye(3) + moved.F.inv()) * ones
    mu_moved = (weight.T * s_f)[0] + 1
    bb_tail = (((-moved.A.inv()) * s_f).T * s_f)[0] \
        - 2 * (s_f.T * iota)[0] - (iota.T * moved.A * iota)[0]
    S_F0 = sp.Matrix([[sp.Rational(e)] for e in data.vectors.S_F])
    iota0 = sp.Matrix(data.tree.iota())
    bb_tail0 = (((-data.A.inv()) * S_F0).T * S_F0)[0] \
        - 2 * (S_F0.T * iota0)[0] - (iota0.T * data.A * iota0)[0]
    checks = {
        "F": data.F.tolist() == [[1, 0, 0], [-1, 1, 0], [-1, -1, 1]],
        "A": data.A.tolist() == [[-3, 0, 1], [0, -2, 1], [1, 1, -1]],
        "S_C": S_C == [0, 0, 1],
        "permuted A": moved.A.tolist() == [[-2, 1, 0], [1, -1, 1],
                                           [0, 1, -3]],
        "permuted S_C": list(moved.vectors["S_C"]) == [0, 1, 0],
        "milnor transported": mu_moved == rep.milnor,
        "bb quadratic transported": bb_tail == bb_tail0,
    }
    _report("4", checks)


def test_criterion_5_property_suite(corpus_reports):
    checks = {}

    # a. discrepancy formula agrees with the recorded strip orders and
    #    with the multiplicity relation on every germ
    ok = True
    for germ in CORPUS:
        rep = corpus_reports[germ.name]
        data = rep.data
        ok = ok and rep.ell == data.tree.recorded_ell()
        iota = data.tree.iota()
        ok = ok and all(l == n + 1 - i
                        for l, n, i in zip(rep.ell, rep.nu, iota))
    checks["a: discrepancy routes"] = ok

    # b. closed-formula Milnor number equals the resultant oracle and the
    #    local-data recursion on every germ
    ok = True
    for germ in CORPUS:
        rep = corpus_reports[germ.name]
        mu = oracles.milnor_direct(rep.data.tree.original_form)
        ok = ok and rep.milnor == mu
        ok = ok and oracles.van_den_essen_check(rep.data.tree, mu)
    checks["b: milnor oracle + recursion"] = ok

    # c. index sums along every invariant component match its
    #    self-intersection
    ok = True
    for germ in CORPUS:
        verdicts = oracles.cs_index_theorem_check(
            corpus_reports[germ.name].data.tree)
        ok = ok and all(verdicts.values())
    checks["c: component index theorem"] = ok

    # d. lattice pairing reproduces intersection multiplicities on at
    #    least 10 curve pairs
    pairs = [
        (x, y), (x, y - x), (y, y - x),
        (y**2 - x**3, y - x), (y**2 - x**3, x), (y**2 - x**3, y),
        (y - x**2, y + x**2), (y - x**2, x),
        (y**2 - x**5, y), (y - x, y + x),
    ]
    count = 0
    ok = True
    for f_c, f_d in pairs:
        tree = reduce_singularities(
            OneForm.from_exprs(y, x),
            curves={"C": sp.expand(f_c), "D": sp.expand(f_d)})
        ok = ok and oracles.noether_check(
            cb.proximity_matrix(tree), cb.intersection_matrix(tree),
            tree.group_s_vector("C"), tree.group_s_vector("D"),
            sp.expand(f_c), sp.expand(f_d))
        count += 1
    checks["d: pairing on %d pairs" % count] = ok and count >= 10

    # e. global relations and the vanishing equivalence on every germ
    ok = True
    for germ in CORPUS:
        rep = corpus_reports[germ.name]
        r = rep.relations
        ok = ok and r.var_minus_cs == r.delta and r.delta >= 0
        ok = ok and r.bb_minus_var == r.delta + r.tau_norm_sq
        ok = ok and r.bb_minus_cs == 2 * r.delta + r.tau_norm_sq
        ok = ok and r.generalized_curve == (
            r.delta == 0 and r.tau_norm_sq == 0)
        ok = ok and r.generalized_curve == \
            rep.classification.generalized_curve
    checks["e: global index relations"] = ok

    # f. GSV of the full separatrix divisor vanishes exactly on the
    #    saddle-node-free germs (non-dicritical sub-corpus)
    ok = True
    tested = 0
    for germ in CORPUS:
        rep = corpus_reports[germ.name]
        if germ.separatrix is None or rep.data.tree.dicritical_components():
            continue
        d = inv.analyze(germ.pq,
                        curves={"B": germ.separatrix}).divisors["B"]
        ok = ok and (d.gsv == 0) == rep.classification.generalized_curve
        tested += 1
    checks["f: GSV vanishing on %d germs" % tested] = ok and tested >= 15

    # g. the balanced divisor has strictly positive pullback orders
    ok = True
    for germ in CORPUS:
        data = corpus_reports[germ.name].data
        S_B = sp.Matrix([[sp.Rational(e)] for e in data.vectors.S_B])
        m = -data.A.inv() * S_B
        ok = ok and all(m[i] > 0 for i in range(m.rows))
    checks["g: balanced positivity"] = ok

    # h. algebraic multiplicity of the form against the balanced divisor
    ok = True
    for germ in CORPUS:
        rep = corpus_reports[germ.name]
        data = rep.data
        nu0_f = rep.nu[0]
        nu_b = cb.multiplicities_of_divisor(data.F, data.vectors.S_B)
        ok = ok and nu0_f == nu_b[0] - 1 + data.tau0
    checks["h: multiplicity relation"] = ok

    # i. three seeded random reorderings per germ leave every scalar fixed
    rng = random.Random(20260823)
    ok = True
    for germ in CORPUS:
        rep = corpus_reports[germ.name]
        data = rep.data
        n = data.F.rows
        for _ in range(3):
            sigma = list(range(1, n + 1))
            rng.shuffle(sigma)
            moved = cb.permute(data.F, data.A, sigma,
                               {"S_F": data.vectors.S_F,
                                "S_B": data.vectors.S_B,
                                "T": data.vectors.T,
                                "iota": data.tree.iota()})
            ok = ok and (-moved.F.T * moved.F - moved.A).is_zero_matrix
            s_f = sp.Matrix([[sp.Rational(e)]
                             for e in moved.vectors["S_F"]])
            t_f = sp.Matrix([[sp.Rational(e)] for e in moved.vectors["T"]])
            iota = sp.Matrix([[sp.Rational(e)]
                              for e in moved.vectors["iota"]])
            ones = sp.ones(n, 1)
            weight = -moved.A.inv() * s_f \
                - (sp.eye(n) + moved.F.inv()) * ones
            mu_moved = (weight.T * s_f)[0] + 1 + cb.transverse_excess(
                data.tree, data.balanced)
            tau = moved.F.inv().T * t_f
            ok = ok and mu_moved == rep.milnor
            ok = ok and (tau.T * tau)[0] == rep.relations.tau_norm_sq
            bb_tail = (((-moved.A.inv()) * s_f).T * s_f)[0] \
                - 2 * (s_f.T * iota)[0] - (iota.T * moved.A * iota)[0]
            S_F0 = sp.Matrix([[sp.Rational(e)] for e in data.vectors.S_F])
            iota0 = sp.Matrix(data.tree.iota())
            bb_tail0 = (((-data.A.inv()) * S_F0).T * S_F0)[0] \
                - 2 * (S_F0.T * iota0)[0] - (iota0.T * data.A * iota0)[0]
            ok = ok and bb_tail == bb_tail0
    checks["i: reordering robustness"] = ok

    _report("5", checks)
