from fractions import Fraction

import pytest

from surfcalc import classify, dualgraph, surface
from surfcalc.classify import ConstructionParams, construct_X, verify_construction
from surfcalc.dualgraph import Cyclic, DuVal, Fork, chain, dynkin, fork
from surfcalc.errors import InvalidParameters, PreconditionViolated
from surfcalc.suite import all_constructions

F = Fraction
F2235 = fork(2, [(2, 1), (3, 1), (5, 1)])
F2332 = fork(2, [(2, 1), (3, 1), (3, 2)])


# ----------------------------------------------------------------------------
# screening

def test_noether_screen_examples():
    rep = classify.noether_screen([F2332])
    assert (rep.KG, rep.r, rep.rho, rep.integral) == (F(5, 9), 9, F(94, 9), False)
    rep = classify.noether_screen([F2235])
    assert (rep.KG, rep.r, rep.rho, rep.integral) == (F(88, 29), 29, 13, True)
    rep = classify.noether_screen([dynkin("E", 8)])
    assert (rep.KG, rep.r, rep.rho, rep.integral) == (0, 1, 9, True)


def test_screen_with_carried_e8_keeps_rho():
    # a Du Val point adds nothing to K_Y.G or r, so rho = 4 + 8 + 1 is unchanged
    rep = classify.noether_screen([F2235, dynkin("E", 8)])
    assert rep.rho == 13 and rep.r == 29
    assert [str(t) for t in rep.candidate] == ["<2;2,1;3,1;5,1>", "E8"]


def test_noether_screen_rejects_non_klt():
    with pytest.raises(PreconditionViolated):
        classify.noether_screen([classify.rational_fork(5)])


def test_screen_forks():
    reps = classify.screen_forks()
    assert len(reps) == 8
    for r in reps:
        assert 10 - r.rho + r.KG == F(1, r.r)
        assert r.integral == (r.rho.denominator == 1)
    survivors = [r for r in reps if r.integral]
    assert len(survivors) == 1
    assert survivors[0].candidate == (Fork(2, ((2, 1), (3, 1), (5, 1))),)
    assert survivors[0].rho == 13
    last = reps[-1]
    assert str(last.candidate[0]) == "<2;2,1;3,1;3,2>" and not last.integral


def test_screen_candidates_exclude_e8():
    assert all(not isinstance(dualgraph.recognize(g), DuVal)
               for g in classify.screen_candidates())
    assert isinstance(dualgraph.recognize(fork(2, [(2, 1), (3, 2), (5, 4)])), DuVal)


def test_tampered_fork_flips_verdict():
    tampered = fork(2, [(2, 1), (2, 1), (3, 2)])  # the (-3) becomes a (-2): D5
    assert classify.noether_screen([tampered]).integral
    assert not classify.noether_screen([F2332]).integral


# ----------------------------------------------------------------------------
# attachment enumeration

def test_attachment_enumeration_2235():
    rows = classify.attachment_enumeration(F2235)
    passing = [(v, list(a.values())) for v, a, ok in rows if ok]
    assert passing == [("c", [2, 1, 1, 1])]
    bad = {v: a for v, a, _ in rows}["b3_1"]
    assert any(x.denominator != 1 for x in bad.values())


def test_attachment_enumeration_a1_and_e8():
    assert [ok for _, _, ok in classify.attachment_enumeration(chain([-2]))] == [False]
    rows = {v: (a, ok) for v, a, ok in classify.attachment_enumeration(dynkin("E", 8))}
    a, ok = rows["e8"]
    assert all(x.denominator == 1 for x in a.values()) and ok


# ----------------------------------------------------------------------------
# the construction family

def test_construction_params_validation():
    with pytest.raises(InvalidParameters):
        ConstructionParams("cusp", 3)
    with pytest.raises(InvalidParameters):
        ConstructionParams("node", 3, ("prev",))
    with pytest.raises(InvalidParameters):
        ConstructionParams("node", 2, ("sideways",))
    with pytest.raises(InvalidParameters):
        ConstructionParams("tacnode", 1)


def test_node_m1():
    x = construct_X(ConstructionParams("node", 1))
    rep = verify_construction(x, classify.expected_relation(ConstructionParams("node", 1)))
    assert rep.passed
    assert rep.types == [Cyclic(3, 1, 1), DuVal("E", 8)]
    assert rep.KK == F(1, 3) and rep.r == 3


def test_node_m2_both_choices():
    for choices in classify.node_choice_patterns(2):
        p = ConstructionParams("node", 2, choices)
        rep = verify_construction(construct_X(p), classify.expected_relation(p))
        assert rep.passed
        cyc = rep.types[0]
        assert isinstance(cyc, Cyclic) and dualgraph.is_admissible_cyclic(cyc)


def test_cusp_m4():
    p = ConstructionParams("cusp", 4)
    x = construct_X(p)
    rep = verify_construction(x, classify.expected_relation(p))
    assert rep.types[0] == Fork(2, ((2, 1), (3, 1), (5, 1)))
    assert classify.expected_relation(p) == {"Gamma": 1, "E1": 1, "E2": 1, "E3": 2, "E4": 1}
    assert rep.relation and rep.anticanonical_generated
    assert rep.KK == F(1, 29) == rep.noether


def test_family_invariants():
    seen = set()
    for p, x in all_constructions():
        rep = verify_construction(x, classify.expected_relation(p))
        assert rep.passed, (p, rep.failures)
        assert rep.KK == F(1, rep.r) == rep.noether
        non_du_val = [t for t in rep.types
                      if not isinstance(t, DuVal) and not (isinstance(t, Cyclic) and t.is_du_val)]
        assert len(non_du_val) == 1
        seen.add((p.kind, p.m))
    assert seen == {("node", 1), ("node", 2), ("node", 3), ("cusp", 1), ("cusp", 2),
                    ("cusp", 4)}


def test_verify_construction_reports_a_wrong_relation():
    p = ConstructionParams("node", 1)
    rep = verify_construction(construct_X(p), {"Gamma": 1})
    assert not rep.passed and rep.relation is False


def test_node_choice_patterns():
    assert classify.node_choice_patterns(1) == [()]
    assert len(classify.node_choice_patterns(3)) == 4


# ----------------------------------------------------------------------------
# rational example

@pytest.mark.parametrize("m", [5, 6, 7])
def test_rational_example(m):
    g, x, rep = classify.rational_example(m)
    assert rep.passed
    assert dualgraph.is_rational(g) and not dualgraph.is_klt(g)
    weights = sorted(v.self_intersection for v in g.vertices)
    assert weights[0] == -m - 1 and weights.count(-3) == 1


def test_rational_example_relation_m6():
    rel = classify.rational_example_relation(6)
    assert [rel[f"E{i}"] for i in (3, 4, 5)] == [2, 2, 2]
    assert rel["E6"] == 1 and rel["E1"] == rel["E2"] == rel["Gamma"] == 1


def test_rational_example_needs_m_at_least_5():
    with pytest.raises(InvalidParameters):
        classify.rational_example(4)


# ----------------------------------------------------------------------------
# del Pezzo examples

def test_no_p1_example():
    x = classify.no_p1_example()
    Y = x.ambient
    c1, c2 = Y.curve("C1").cls, Y.curve("C2").cls
    assert (Y.dot(c1, c1), Y.dot(c2, c2), Y.dot(c1, c2)) == (-3, -3, 1)
    assert str(dualgraph.recognize(x.points[0].graph)) == "1/8(1,3)"


def test_a8_variant_generator():
    x = classify.no_p1_example(a8=True)
    assert str(dualgraph.recognize(x.points[0].graph)) == "1/9(1,8)"
    cg = surface.class_group(x)
    F1 = x.ambient.curve("F1").cls
    assert cg.free_rank == 1
    assert cg.image(F1)[0] in ((1,), (-1,))
    assert surface.pair(x, F1, F1) == F(1, 2)


def test_tiger_example():
    x = classify.tiger_example()
    t = surface.tiger_test(x, "C")
    assert t.beta == F(1, 2) and t.alpha == F(1, 3)
    assert sorted(t.local_thresholds.values()) == [F(1, 2), 1]
    assert not t.supports_tiger
    m = x.ambient
    C = m.curve("C").cls
    KbC = tuple(k + t.beta * c for k, c in zip(m.K, C))
    assert surface.pair(x, KbC, C) > 0


# ----------------------------------------------------------------------------
# Hirzebruch surfaces

def test_fe_check_e0():
    v = classify.fe_check(0)
    assert v.no_generating_decomposition


def test_fe_check_e2():
    v = classify.fe_check(2)
    assert v.no_generating_decomposition
    both_ge_e = [(a, b, d) for a, b, d in v.candidates
                 if a[0] == b[0] == 1 and a[1] >= 2 and b[1] >= 2]
    assert both_ge_e == [((1, 2), (1, 2), 0)]


def test_fe_check_e3():
    v = classify.fe_check(3)
    assert v.no_generating_decomposition
    assert not [c for c in v.candidates if c[0][1] >= 3 and c[1][1] >= 3 and c[0][0] == 1]


@pytest.mark.parametrize("e", [0] + list(range(2, 11)))
def test_fe_scan_exhaustive(e):
    found = set()
    for a1 in range(-3, 6):
        for b1 in range(-3, e + 8):
            a2, b2 = 2 - a1, e + 2 - b1
            if classify.fe_irreducible_allowed(a1, b1, e) and \
                    classify.fe_irreducible_allowed(a2, b2, e):
                found.add(frozenset([(a1, b1), (a2, b2)]))
    assert {frozenset([a, b]) for a, b, _ in classify.fe_check(e).candidates} == found
    assert classify.fe_check(e).no_generating_decomposition


def test_fe_check_rejects_bad_e():
    for e in (-1, 1):
        with pytest.raises(InvalidParameters):
            classify.fe_check(e)
