"""Acceptance gate: one check per criterion, all exact.

Run ``pytest tests/test_acceptance.py -v`` or ``python tests/test_acceptance.py``;
either way one ``PASS``/``FAIL`` line is printed per criterion.
"""
import random
import sys
import time
from fractions import Fraction
from math import gcd

import pytest

from surfcalc import classify, dualgraph, exact, surface
from surfcalc.classify import ConstructionParams
from surfcalc.dualgraph import Cyclic, DuVal, Fork, NotQuotient, chain, dynkin, fork
from surfcalc.suite import (adjunction_holds, all_constructions, orthogonal_to_contracted,
                            paper_suite, random_blowup_model, random_matrix, recognizer_corpus,
                            snf_is_valid)

F = Fraction
F2235 = fork(2, [(2, 1), (3, 1), (5, 1)])
F2332 = fork(2, [(2, 1), (3, 1), (3, 2)])


def c01_reject_2332():
    d = dualgraph.discrepancy_cycle(F2332)
    minus3 = next(v.id for v in F2332.vertices if v.self_intersection == -3)
    rep = classify.noether_screen([F2332])
    got = (d[minus3], rep.KG, rep.r, rep.rho, rep.integral)
    return got == (F(5, 9), F(5, 9), 9, F(94, 9), False), got


def c02_survivor_screen():
    reps = classify.screen_forks()
    survivors = [r for r in reps if r.integral]
    det = abs(exact.determinant(dualgraph.intersection_matrix(F2235)))
    ok = (len(survivors) == 1
          and survivors[0].candidate == (Fork(2, ((2, 1), (3, 1), (5, 1))),)
          and survivors[0].rho == 13 and survivors[0].r == 29 == det
          and any(str(r.candidate[0]) == "<2;2,1;3,1;3,2>" and not r.integral for r in reps))
    return ok, [(str(r.candidate[0]), r.rho) for r in survivors]


def c03_attachment():
    passing = [(v, list(a.values())) for v, a, ok in classify.attachment_enumeration(F2235)
               if ok]
    return passing == [("c", [2, 1, 1, 1])], passing


def c04_e8():
    g = dynkin("E", 8)
    det = exact.determinant(dualgraph.intersection_matrix(g))
    got = (det, dualgraph.local_class_group(g).divisors, dualgraph.local_index(g),
           min(dualgraph.fundamental_cycle(g).values()))
    return abs(det) == 1 and got[1:] == ((), 1, 2), got


def c05_recognition():
    t = dualgraph.recognize(chain([-3, -3]))
    bad = []
    for n in range(2, 51):
        for q in range(1, n):
            if gcd(n, q) == 1:
                r = dualgraph.recognize(dualgraph.hj_expand(n, q))
                if not (isinstance(r, Cyclic) and r.n == n and q in (r.q, r.q_inverse)):
                    bad.append((n, q))
    return (t.n, t.q) == (8, 3) and not bad, (str(t), len(bad))


def c06_constructions():
    failures = []
    fork_type = None
    for p, x in all_constructions():
        rel = classify.expected_relation(p)
        rep = classify.verify_construction(x, rel)
        if not (rep.anticanonical_generated and rep.relation):
            failures.append((p.kind, p.m, p.choices))
        if (p.kind, p.m) == ("cusp", 4):
            fork_type = rep.types[0]
            if rel != {"Gamma": 1, "E1": 1, "E2": 1, "E3": 2, "E4": 1}:
                failures.append("cusp m=4 relation")
        elif rel != {"Gamma": 1, **{f"E{i}": 1 for i in range(1, p.m + 1)}}:
            failures.append((p.kind, p.m, "relation"))
    ok = not failures and fork_type == Fork(2, ((2, 1), (3, 1), (5, 1)))
    return ok, (failures, str(fork_type))


def c07_mumford():
    bad = []
    for p, x in all_constructions():
        m = x.ambient
        kk = surface.pair(x, m.K, m.K)
        r = x.global_index()
        rho = m.picard_number()
        kg = sum((dualgraph.canonical_pairing(g) for g in x.local_graphs()), F(0))
        if not kk == F(1, r) == 10 - rho + kg:
            bad.append((p.kind, p.m, p.choices, kk, r, 10 - rho + kg))
    return not bad, bad


def c08_rational_example():
    out = []
    for m in (5, 6):
        g, x, rep = classify.rational_example(m)
        rel = classify.rational_example_relation(m)
        shape_ok = (rel == {"Gamma": 1, "E1": 1, "E2": 1, **{f"E{i}": 2 for i in range(3, m)},
                            f"E{m}": 1})
        out.append(dualgraph.is_rational(g) and not dualgraph.is_klt(g)
                   and isinstance(dualgraph.recognize(g), NotQuotient)
                   and rep.relation and rep.generated_by_last and shape_ok)
    return all(out), out


def c09_examples():
    x = classify.no_p1_example()
    Y = x.ambient
    c1, c2 = Y.curve("C1").cls, Y.curve("C2").cls
    total = Y.combination({"C1": 1, "C2": 1})
    lattice = ((Y.dot(c1, c1), Y.dot(c2, c2), Y.dot(c1, c2)) == (-3, -3, 1)
               and total == tuple(-2 * k for k in Y.K)
               and all(Y.dot(c.cls, total) % 2 == 0 for c in Y.curves)
               and surface.even_pairing(Y, total))
    xa = classify.no_p1_example(a8=True)
    E = xa.ambient.curve("F1").cls
    cg = surface.class_group(xa)
    generator = cg.free_rank == 1 and cg.image(E)[0] in ((1,), (-1,))
    EE = surface.pair(xa, E, E)
    t = surface.tiger_test(classify.tiger_example(), "C")
    ok = lattice and generator and EE == F(1, 2) and t.beta == F(1, 2) and not t.supports_tiger
    return ok, (lattice, generator, EE, t.beta, t.alpha, t.supports_tiger)


def c10_fe():
    verdicts = {e: classify.fe_check(e).no_generating_decomposition for e in (0, 2)}
    exhaustive = True
    for e in [0] + list(range(2, 11)):
        found = set()
        for a1 in range(-3, 6):
            for b1 in range(-3, e + 8):
                a2, b2 = 2 - a1, e + 2 - b1
                if (classify.fe_irreducible_allowed(a1, b1, e)
                        and classify.fe_irreducible_allowed(a2, b2, e)):
                    found.add(frozenset([(a1, b1), (a2, b2)]))
        scanned = {frozenset([a, b]) for a, b, _ in classify.fe_check(e).candidates}
        exhaustive &= scanned == found
    return all(verdicts.values()) and exhaustive, (verdicts, exhaustive)


def c11_properties():
    rng = random.Random(11)
    snf = all(snf_is_valid(A, exact.smith_normal_form(A))
              for A in (random_matrix(rng) for _ in range(200)))
    adj = all(adjunction_holds(random_blowup_model(rng, rng.randint(0, 8))) for _ in range(100))
    orth = all(orthogonal_to_contracted(x, c.cls)
               for _, x in all_constructions() for c in x.ambient.curves)
    lct = True
    for g in recognizer_corpus():
        if not dualgraph.is_klt(g):
            continue
        for v in g.ids:
            one = dualgraph.lct_local(g, {v: 1})
            lct &= one <= 1 and dualgraph.lct_local(g, {v: 2}) <= one
    return snf and adj and orth and lct, (snf, adj, orth, lct)


CRITERIA = [
    ("01 rejection of <2;2,1;3,1;3,2>", c01_reject_2332),
    ("02 survivor screen", c02_survivor_screen),
    ("03 attachment enumeration", c03_attachment),
    ("04 E8 invariants", c04_e8),
    ("05 recognition and HJ round trip", c05_recognition),
    ("06 constructions", c06_constructions),
    ("07 Mumford consistency", c07_mumford),
    ("08 rational non-quotient example", c08_rational_example),
    ("09 no-P1 and tiger examples", c09_examples),
    ("10 F_e check", c10_fe),
    ("11 property suites", c11_properties),
]


def _report(name, fn):
    start = time.perf_counter()
    ok, detail = fn()
    elapsed = time.perf_counter() - start
    line = f"{'PASS' if ok else 'FAIL'}  criterion {name}  ({elapsed:.2f}s)"
    if not ok:
        line += f"  got {detail!r}"
    return ok, line


@pytest.mark.parametrize("name,fn", CRITERIA, ids=[n.split()[0] for n, _ in CRITERIA])
def test_criterion(name, fn, capsys):
    ok, line = _report(name, fn)
    with capsys.disabled():
        print("\n" + line)
    assert ok, line


def test_verify_suite_agrees():
    assert paper_suite().passed


if __name__ == "__main__":
    results = [_report(name, fn) for name, fn in CRITERIA]
    for _, line in results:
        print(line)
    sys.exit(0 if all(ok for ok, _ in results) else 1)
