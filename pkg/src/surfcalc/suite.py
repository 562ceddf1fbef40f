"""Self-contained verification run over every computation in the classification.

:func:`paper_suite` needs no input files; each :class:`Check` records the
computed and expected values so a failure is readable on its own.
"""
from __future__ import annotations

import random
from math import gcd
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from . import classify, dualgraph, exact, surface
from .classify import ConstructionParams
from .dualgraph import Cyclic, WeightedDualGraph
from .surface import BlowupStep

SEED = 20161027


@dataclass
class Check:
    name: str
    passed: bool
    computed: object
    expected: object


@dataclass
class SuiteReport:
    checks: list[Check]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)


def fork_2235() -> WeightedDualGraph:
    return dualgraph.fork(2, [(2, 1), (3, 1), (5, 1)])


def fork_2332() -> WeightedDualGraph:
    return dualgraph.fork(2, [(2, 1), (3, 1), (3, 2)])


def recognizer_corpus() -> list[WeightedDualGraph]:
    """Every graph the recognizer is exercised on: HJ chains, ADE, forks, the rational fork."""
    out = [dualgraph.hj_expand(n, q) for n in range(2, 13) for q in range(1, n)
           if gcd(n, q) == 1]
    out += [dualgraph.dynkin("A", k) for k in range(1, 9)]
    out += [dualgraph.dynkin("D", k) for k in range(4, 9)]
    out += [dualgraph.dynkin("E", k) for k in (6, 7, 8)]
    out += classify.screen_candidates()
    out += [dualgraph.fork(b, br) for b in (2, 3)
            for br in ([(2, 1), (2, 1), (5, 2)], [(2, 1), (3, 2), (4, 1)], [(3, 1), (3, 1), (2, 1)])]
    out += [classify.rational_fork(m) for m in (5, 6)]
    return out


def random_matrix(rng: random.Random) -> list[list[int]]:
    rows, cols = rng.randint(1, 6), rng.randint(1, 6)
    return [[rng.randint(-9, 9) for _ in range(cols)] for _ in range(rows)]


def snf_is_valid(A, snf: exact.SmithDecomposition) -> bool:
    if exact.matmul(exact.matmul(snf.U, A), snf.V) != snf.D:
        return False
    if abs(exact.determinant(snf.U)) != 1 or abs(exact.determinant(snf.V)) != 1:
        return False
    rows, cols = exact.shape(snf.D)
    if any(snf.D[i][j] for i in range(rows) for j in range(cols) if i != j):
        return False
    diag = snf.diagonal
    if any(d < 0 for d in diag):
        return False
    for a, b in zip(diag, diag[1:]):
        if (a == 0 and b != 0) or (a and b % a):
            return False
    return True


def random_blowup_model(rng: random.Random, length: int) -> surface.SurfaceModel:
    m = rng.choice([surface.base_S_E8, surface.base_P2])()
    if not m.curves:
        m = surface.add_curve(m, "L", (Fraction(1),), 0)
        m = surface.add_curve(m, "Q", (Fraction(3),), 1)
    for i in range(length):
        mults = {}
        for c in m.curves:
            if rng.random() < 0.4:
                top = 1
                while c.pa - (top + 1) * top // 2 >= 0 and top < 3:
                    top += 1
                mults[c.id] = rng.randint(0, top)
        m = surface.blowup(m, BlowupStep(f"x{i}", mults))
    return m


def adjunction_holds(m: surface.SurfaceModel) -> bool:
    return all(m.dot(c.cls, c.cls) + m.dot(m.K, c.cls) == 2 * c.pa - 2 for c in m.curves)


def all_constructions():
    params = [ConstructionParams("node", m, ch) for m in (1, 2, 3)
              for ch in classify.node_choice_patterns(m)]
    params += [ConstructionParams("cusp", m) for m in (1, 2, 4)]
    return [(p, classify.construct_X(p)) for p in params]


def orthogonal_to_contracted(x: surface.SingularSurfaceModel, D) -> bool:
    pb = surface.pullback(x, D)
    return all(x.ambient.dot(pb, x.ambient.curve(cid).cls) == 0 for cid in x.contracted)


def is_log_canonical(g: WeightedDualGraph) -> bool:
    return all(d <= 1 for d in dualgraph.discrepancy_cycle(g).values())


def lct_properties(g: WeightedDualGraph) -> bool:
    """Cap and monotonicity; vacuous off the log canonical locus, where no t >= 0 works."""
    if not is_log_canonical(g):
        return True
    for vid in g.ids:
        one = dualgraph.lct_local(g, {vid: 1})
        two = dualgraph.lct_local(g, {vid: 2})
        if not (two <= one <= 1):
            return False
        for other in g.ids:
            if other != vid and dualgraph.lct_local(g, {vid: 1, other: 1}) > one:
                return False
    return True


def _checks() -> list[tuple[str, Callable[[], tuple[object, object]]]]:
    out = []

    def check(name):
        def deco(fn):
            out.append((name, fn))
            return fn
        return deco

    @check("1. <2;2,1;3,1;3,2> rejected")
    def _():
        g = fork_2332()
        d = dualgraph.discrepancy_cycle(g)
        rep = classify.noether_screen([g])
        return ((d["b2_1"], rep.KG, rep.r, rep.rho, rep.integral),
                (Fraction(5, 9), Fraction(5, 9), 9, Fraction(94, 9), False))

    @check("2. unique integral survivor <2;2,1;3,1;5,1>, rho = 13")
    def _():
        survivors = [(str(r.candidate[0]), r.rho, r.r) for r in classify.screen_forks()
                     if r.integral]
        det = abs(exact.determinant(dualgraph.intersection_matrix(fork_2235())))
        return (survivors, det), ([("<2;2,1;3,1;5,1>", Fraction(13), 29)], 29)

    @check("3. attachment enumeration on <2;2,1;3,1;5,1>")
    def _():
        passing = [(v, [c for c in coeffs.values()])
                   for v, coeffs, ok in classify.attachment_enumeration(fork_2235()) if ok]
        return passing, [("c", [2, 1, 1, 1])]

    @check("4. E8 invariants")
    def _():
        g = dualgraph.dynkin("E", 8)
        det = exact.determinant(dualgraph.intersection_matrix(g))
        cg = dualgraph.local_class_group(g)
        z = dualgraph.fundamental_cycle(g)
        return ((abs(det), cg.divisors, dualgraph.local_index(g), min(z.values())),
                (1, (), 1, 2))

    @check("5. recognition and HJ round trip for n <= 50")
    def _():
        t = dualgraph.recognize(dualgraph.chain([-3, -3]))
        bad = []
        for n in range(2, 51):
            for q in range(1, n):
                if gcd(n, q) != 1:
                    continue
                r = dualgraph.recognize(dualgraph.hj_expand(n, q))
                if not (isinstance(r, Cyclic) and r.n == n and q in (r.q, r.q_inverse)
                        and (r.q * r.q_inverse) % n == 1 % n):
                    bad.append((n, q))
        return (str(t), bad), ("1/8(1,3)", [])

    @check("6. constructions: Cl(X) = Z(-K_X), -K_Y relations, cusp m=4 fork")
    def _():
        failures = []
        fork_type = None
        for p, x in all_constructions():
            rep = classify.verify_construction(x, classify.expected_relation(p))
            if not (rep.anticanonical_generated and rep.relation):
                failures.append((p.kind, p.m, p.choices))
            if p.kind == "cusp" and p.m == 4:
                fork_type = str(rep.types[0])
        return (failures, fork_type), ([], "<2;2,1;3,1;5,1>")

    @check("7. K_X^2 = 1/r = 10 - rho + K_Y.G on every construction")
    def _():
        bad = []
        for p, x in all_constructions():
            rep = classify.verify_construction(x)
            if not (rep.KK == Fraction(1, rep.r) == rep.noether):
                bad.append((p.kind, p.m, p.choices, rep.KK, rep.r, rep.noether))
        return bad, []

    @check("8. rational non-quotient example, m = 5, 6")
    def _():
        return ([classify.rational_example(m)[2].passed for m in (5, 6)], [True, True])

    @check("9. no-P1 and tiger example lattice facts")
    def _():
        x = classify.no_p1_example()
        Y = x.ambient
        c1, c2 = Y.curve("C1").cls, Y.curve("C2").cls
        total = Y.combination({"C1": 1, "C2": 1})
        facts = (Y.dot(c1, c1), Y.dot(c2, c2), Y.dot(c1, c2),
                 total == tuple(-2 * k for k in Y.K), surface.even_pairing(Y, total),
                 str(dualgraph.recognize(x.points[0].graph)))
        xa = classify.no_p1_example(a8=True)
        F1 = xa.ambient.curve("F1").cls
        cg = surface.class_group(xa)
        E2 = (cg.free_rank, cg.image(F1)[0] in ((1,), (-1,)), surface.pair(xa, F1, F1))
        t = surface.tiger_test(classify.tiger_example(), "C")
        return ((facts, E2, (t.beta, t.supports_tiger)),
                ((-3, -3, 1, True, True, "1/8(1,3)"), (1, True, Fraction(1, 2)),
                 (Fraction(1, 2), False)))

    @check("10. F_e: no generating anticanonical splitting")
    def _():
        verdicts = [classify.fe_check(e).no_generating_decomposition for e in (0, 2)]
        exhaustive = all(_fe_scan_is_exhaustive(e) for e in [0] + list(range(2, 11)))
        return (verdicts, exhaustive), ([True, True], True)

    @check("11. property suites")
    def _():
        rng = random.Random(SEED)
        snf_ok = all(snf_is_valid(A, exact.smith_normal_form(A))
                     for A in (random_matrix(rng) for _ in range(200)))
        adj_ok = all(adjunction_holds(random_blowup_model(rng, rng.randint(0, 8)))
                     for _ in range(100))
        orth_ok = True
        for _, x in all_constructions():
            for c in x.ambient.curves:
                orth_ok &= orthogonal_to_contracted(x, c.cls)
            orth_ok &= orthogonal_to_contracted(x, x.ambient.K)
        lct_ok = all(lct_properties(g) for g in recognizer_corpus())
        return (snf_ok, adj_ok, orth_ok, lct_ok), (True, True, True, True)

    return out


def _fe_scan_is_exhaustive(e: int) -> bool:
    """Compare the scan with a blind search over a box much larger than needed."""
    found = set()
    for a1 in range(-3, 6):
        for b1 in range(-3, e + 8):
            a2, b2 = 2 - a1, e + 2 - b1
            if (classify.fe_irreducible_allowed(a1, b1, e)
                    and classify.fe_irreducible_allowed(a2, b2, e)):
                found.add(frozenset([(a1, b1), (a2, b2)]))
    scanned = {frozenset([m1, m2]) for m1, m2, _ in classify.fe_check(e).candidates}
    return found == scanned


def paper_suite() -> SuiteReport:
    checks = []
    for name, fn in _checks():
        try:
            computed, expected = fn()
            checks.append(Check(name, computed == expected, computed, expected))
        except Exception as exc:  # a crash is a failed check, not a crashed suite
            checks.append(Check(name, False, f"error: {exc!r}", None))
    return SuiteReport(checks)
