"""Classification procedures for rank-one surfaces without smooth rational curves.

* :func:`noether_screen` tests ``rho = 10 + K_Y.G - 1/r`` for integrality.
* :func:`screen_forks` runs that screen over the ``<2;2;3;5>`` family and
  ``<2;2,1;3,1;3,2>``.
* :func:`attachment_enumeration` tries every vertex as the attachment point of
  an anticanonical curve and keeps the integral solutions.
* :func:`construct_X` builds ``X(Ybar, Gamma; q_1..q_m)`` from ``S(E8)`` by
  blowups and contractions; :func:`verify_construction` checks it.
* :func:`rational_example`, :func:`no_p1_example` and :func:`tiger_example`
  build the remaining example lattices; :func:`fe_check` scans Hirzebruch
  surfaces for generating anticanonical splittings.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from math import lcm
from typing import Sequence

from . import dualgraph, exact, surface
from .dualgraph import SingularityType, WeightedDualGraph
from .errors import InvalidParameters, PreconditionViolated
from .surface import BlowupStep, SingularSurfaceModel, SurfaceModel


@dataclass(frozen=True)
class ScreenReport:
    candidate: tuple[SingularityType, ...]
    rho: Fraction
    r: int
    KG: Fraction

    @property
    def integral(self) -> bool:
        return self.rho.denominator == 1


def noether_screen(candidate: Sequence[WeightedDualGraph]) -> ScreenReport:
    """Picard number forced by ``K_X^2 = 10 - rho + K_Y.G = 1/r``."""
    for g in candidate:
        if not dualgraph.is_klt(g):
            raise PreconditionViolated("screened points must be klt")
    KG = sum((dualgraph.canonical_pairing(g) for g in candidate), Fraction(0))
    r = 1
    for g in candidate:
        r = lcm(r, dualgraph.local_index(g))
    types = tuple(dualgraph.recognize(g) for g in candidate)
    return ScreenReport(types, 10 + KG - Fraction(1, r), r, KG)


def screen_candidates() -> list[WeightedDualGraph]:
    """Non-Du Val ``<2;2,1;3,q2;5,q3>`` forks, then ``<2;2,1;3,1;3,2>``."""
    out = []
    for q2 in (1, 2):
        for q3 in (1, 2, 3, 4):
            g = dualgraph.fork(2, [(2, 1), (3, q2), (5, q3)])
            if not isinstance(dualgraph.recognize(g), dualgraph.DuVal):
                out.append(g)
    out.append(dualgraph.fork(2, [(2, 1), (3, 1), (3, 2)]))
    return out


def screen_forks() -> list[ScreenReport]:
    return [noether_screen([g]) for g in screen_candidates()]


def attachment_enumeration(g: WeightedDualGraph):
    """``(vertex, coefficients, passes)`` for a unit attachment at each vertex."""
    out = []
    for vid in g.ids:
        sol = dualgraph.attachment_solve(g, {vid: 1})
        out.append((vid, sol.coefficients, sol.passes))
    return out


# ----------------------------------------------------------------------------
# the X(Ybar, Gamma; q_1, ..., q_m) family

NODE_CHOICES = ("prev", "other")


@dataclass(frozen=True)
class ConstructionParams:
    """``kind`` is "node" or "cusp".

    For nodes, ``choices[i-2]`` places ``q_i`` on the newest exceptional curve
    ``E_{i-1}``: "prev" at its meeting point with ``E_{i-2}``, "other" at its
    meeting point with its other neighbour in the anticanonical cycle.  For
    ``i = 2`` both neighbours are branches of ``Gamma`` and the two labels
    give isomorphic lattices.
    """

    kind: str
    m: int
    choices: tuple[str, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "choices", tuple(self.choices))
        if self.kind not in ("node", "cusp"):
            raise InvalidParameters(f"kind must be 'node' or 'cusp', got {self.kind!r}")
        if not isinstance(self.m, int) or self.m < 1:
            raise InvalidParameters("m must be a positive integer")
        if self.kind == "cusp":
            if self.m not in (1, 2, 4):
                raise InvalidParameters("cuspidal constructions need m in {1, 2, 4}")
            if self.choices:
                raise InvalidParameters("cuspidal constructions take no choices")
        else:
            if len(self.choices) != self.m - 1:
                raise InvalidParameters(f"node construction with m={self.m} needs "
                                        f"{self.m - 1} choices, got {len(self.choices)}")
            bad = [c for c in self.choices if c not in NODE_CHOICES]
            if bad:
                raise InvalidParameters(f"unknown choices {bad}; use {NODE_CHOICES}")


def node_choice_patterns(m: int) -> list[tuple[str, ...]]:
    return [tuple(p) for p in product(NODE_CHOICES, repeat=m - 1)]


def _node_steps(choices: Sequence[str]) -> list[BlowupStep]:
    steps = [BlowupStep("E1", {"Gamma": 2})]
    cycle = ["Gamma", "E1"]  # cyclically consecutive curves meet
    for i, choice in enumerate(choices, start=2):
        prev, new = f"E{i - 1}", f"E{i}"
        k = cycle.index(prev)
        left, right = cycle[k - 1], cycle[(k + 1) % len(cycle)]
        prev_side = "right" if i > 2 and right == f"E{i - 2}" else "left"
        side = prev_side if choice == "prev" else ("left" if prev_side == "right" else "right")
        target = left if side == "left" else right
        steps.append(BlowupStep(new, {prev: 1, target: 1}))
        cycle.insert(k if side == "left" else k + 1, new)
    return steps


def _cusp_steps(m: int) -> list[BlowupStep]:
    steps = [
        BlowupStep("E1", {"Gamma": 2}),
        BlowupStep("E2", {"Gamma": 1, "E1": 1}),
        BlowupStep("E3", {"Gamma": 1, "E1": 1, "E2": 1}),
        BlowupStep("E4", {"E3": 1}),
    ]
    return steps[:m]


def blowup_steps(p: ConstructionParams) -> list[BlowupStep]:
    return _node_steps(p.choices) if p.kind == "node" else _cusp_steps(p.m)


def construct_X(p: ConstructionParams) -> SingularSurfaceModel:
    """Blow up ``S(E8)`` at the singular point of ``Gamma`` and infinitely near
    points, then contract ``Gamma`` and ``E_1 .. E_{m-1}``."""
    Y = surface.blowups(surface.base_S_E8(), blowup_steps(p))
    return surface.contract(Y, [["Gamma"] + [f"E{i}" for i in range(1, p.m)]])


def expected_relation(p: ConstructionParams) -> dict[str, int]:
    """Curves (with multiplicity) summing to ``-K_Y``."""
    rel = {"Gamma": 1, **{f"E{i}": 1 for i in range(1, p.m + 1)}}
    if p.kind == "cusp" and p.m == 4:
        rel["E3"] = 2
    return rel


def relation_holds(m: SurfaceModel, relation: dict[str, int]) -> bool:
    return m.combination(relation) == tuple(-k for k in m.K)


@dataclass
class ConstructionReport:
    anticanonical_generated: bool
    types: list[SingularityType | None]
    admissible: list[bool | None]
    KK: Fraction
    r: int
    noether: Fraction | None  # 10 - rho + sum K_Y.G over the points
    relation: bool | None
    failures: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures


def verify_construction(x: SingularSurfaceModel,
                        relation: dict[str, int] | None = None) -> ConstructionReport:
    """Check the properties every member of the family must have.

    (a) ``Cl(X) = Z (-K_X)``; (b) recognition of each point, admissibility of
    cyclic points and a unique non-Du Val point; (c) ``K_X^2 = 1/r`` and its
    agreement with ``10 - rho + K_Y.G``; (d) the ``-K_Y`` relation if given.
    """
    failures = []
    try:
        cg = surface.class_group(x)
        anti = cg.anticanonical_generated
    except ValueError as exc:
        anti = False
        failures.append(f"class group: {exc}")
    if not anti:
        failures.append("Cl(X) is not generated by -K_X")

    types, admissible = [], []
    for g in x.local_graphs():
        try:
            t = dualgraph.recognize(g)
        except ValueError as exc:
            failures.append(f"recognition failed: {exc}")
            t = None
        types.append(t)
        admissible.append(dualgraph.is_admissible_cyclic(t) if isinstance(t, dualgraph.Cyclic)
                          else None)
    if any(a is False for a in admissible):
        failures.append("a cyclic point violates (q,n) = (q+1,n) = 1")
    non_du_val = [t for t in types if not isinstance(t, dualgraph.DuVal)
                  and not (isinstance(t, dualgraph.Cyclic) and t.is_du_val)]
    if len(non_du_val) != 1:
        failures.append(f"expected one non-Du Val point, found {len(non_du_val)}")

    K = x.ambient.K
    KK = surface.pair(x, K, K)
    r = x.global_index()
    if KK != Fraction(1, r):
        failures.append(f"K_X^2 = {KK} but 1/r = 1/{r}")
    noether = None
    if all(p.minimal for p in x.points):
        rho = x.ambient.picard_number()
        noether = 10 - rho + sum((dualgraph.canonical_pairing(g) for g in x.local_graphs()),
                                 Fraction(0))
        if noether != KK:
            failures.append(f"10 - rho + K_Y.G = {noether} disagrees with K_X^2 = {KK}")

    rel = None
    if relation is not None:
        rel = relation_holds(x.ambient, relation)
        if not rel:
            failures.append("-K_Y relation does not hold")
    return ConstructionReport(anti, types, admissible, KK, r, noether, rel, failures)


# ----------------------------------------------------------------------------
# the non-quotient rational example

def rational_fork(m: int) -> WeightedDualGraph:
    """Central (-2) with branches (-2), (-3) and (-2)...(-2)-(-m-1)."""
    if m < 4:
        raise InvalidParameters("need m >= 4")
    return dualgraph.fork(2, [(2, 1), (3, 1), dualgraph.hj_fraction([2] * (m - 4) + [m + 1])])


def rational_example_steps(m: int) -> list[BlowupStep]:
    steps = _cusp_steps(3)
    for i in range(4, m):
        steps.append(BlowupStep(f"E{i}", {"Gamma": 1, f"E{i - 1}": 1}))
    steps.append(BlowupStep(f"E{m}", {f"E{m - 1}": 1}))
    return steps


def rational_example_relation(m: int) -> dict[str, int]:
    rel = {"Gamma": 1, "E1": 1, "E2": 1, f"E{m}": 1}
    rel.update({f"E{i}": 2 for i in range(3, m)})
    return rel


def star_signature(g: WeightedDualGraph):
    """Isomorphism invariant of a tree with at most one branch point."""
    weight = {v.id: v.self_intersection for v in g.vertices}
    centres = [v for v in g.ids if g.degree(v) >= 3]
    if len(centres) != 1:
        return None
    c = centres[0]
    arms = []
    for nb in g.neighbours(c):
        arm, prev, cur = [], c, nb
        while cur is not None:
            arm.append(weight[cur])
            nxt = [w for w in g.neighbours(cur) if w != prev]
            prev, cur = cur, (nxt[0] if nxt else None)
        arms.append(tuple(arm))
    return weight[c], tuple(sorted(arms))


@dataclass
class RationalExampleReport:
    rational: bool
    klt: bool
    graph_matches: bool
    relation: bool
    anticanonical_generated: bool
    generated_by_last: bool  # image of E_m generates Cl(X) and equals -K_X

    @property
    def passed(self) -> bool:
        return (self.rational and not self.klt and self.graph_matches and self.relation
                and self.anticanonical_generated and self.generated_by_last)


def rational_example(m: int):
    if not isinstance(m, int) or m < 5:
        raise InvalidParameters("the rational example needs m >= 5")
    g = rational_fork(m)
    Y = surface.blowups(surface.base_S_E8(), rational_example_steps(m))
    x = surface.contract(Y, [["Gamma"] + [f"E{i}" for i in range(1, m)]])
    cg = surface.class_group(x)
    last = Y.curve(f"E{m}").cls
    free, tors = cg.image(last)
    report = RationalExampleReport(
        rational=dualgraph.is_rational(g),
        klt=dualgraph.is_klt(g),
        graph_matches=star_signature(g) == star_signature(x.points[0].graph),
        relation=relation_holds(Y, rational_example_relation(m)),
        anticanonical_generated=cg.anticanonical_generated,
        generated_by_last=(cg.free_rank == 1 and not cg.torsion and free in ((1,), (-1,))
                           and cg.multiple_of_minus_K(last) == 1),
    )
    return g, x, report


# ----------------------------------------------------------------------------
# degree one del Pezzo lattices

def _dp1_lattice() -> tuple[tuple[str, ...], tuple, tuple]:
    basis = ("H",) + tuple(f"e{i}" for i in range(1, 9))
    gram = tuple(tuple(Fraction(1 if (i == j == 0) else -1 if i == j else 0)
                       for j in range(9)) for i in range(9))
    K = (Fraction(-3),) + (Fraction(1),) * 8
    return basis, gram, K


A8_ROOTS = (
    {"H": 3, "e1": -2, **{f"e{i}": -1 for i in range(2, 9)}},
    *({f"e{i}": 1, f"e{i + 1}": -1} for i in range(1, 8)),
)


def del_pezzo_1(a8: bool = False) -> SurfaceModel:
    """``P2`` blown up at eight points, optionally with an A8 chain of (-2)-curves.

    With ``a8`` the curves ``a1..a8`` form the chain (``a1.a2 = ... = 1``) and
    span a rank-8 sublattice, so contracting them leaves a rank-one surface.
    """
    basis, gram, K = _dp1_lattice()
    m = SurfaceModel(basis, gram, K)
    if a8:
        for i, spec in enumerate(A8_ROOTS, start=1):
            m = surface.add_curve(m, f"a{i}", m.class_of(spec), 0)
    return m


def a8_ids() -> list[str]:
    return [f"a{i}" for i in range(1, 9)]


def no_p1_example(a8: bool = False) -> SingularSurfaceModel:
    """Two nodal anticanonical curves, nodes blown up, strict transforms contracted."""
    T = del_pezzo_1(a8)
    minus_K = tuple(-k for k in T.K)
    T = surface.add_curve(T, "C1", minus_K, 1)
    T = surface.add_curve(T, "C2", minus_K, 1)
    Y = surface.blowups(T, [BlowupStep("F1", {"C1": 2}), BlowupStep("F2", {"C2": 2})])
    groups = ([a8_ids()] if a8 else []) + [["C1", "C2"]]
    return surface.contract(Y, groups)


def tiger_example() -> SingularSurfaceModel:
    """A8 del Pezzo, node of an anticanonical curve ``D`` and one infinitely near
    point blown up, ``D`` and the first exceptional curve contracted.

    ``C`` is the (-1)-curve ``H - e1 - e2``; it meets ``a3`` and ``D`` once.
    """
    T = del_pezzo_1(a8=True)
    T = surface.add_curve(T, "D", tuple(-k for k in T.K), 1)
    T = surface.add_curve(T, "C", T.class_of({"H": 1, "e1": -1, "e2": -1}), 0)
    Y = surface.blowups(T, [BlowupStep("F1", {"D": 2}), BlowupStep("F2", {"D": 1, "F1": 1})])
    return surface.contract(Y, [a8_ids(), ["D", "F1"]])


# ----------------------------------------------------------------------------
# Hirzebruch surfaces

@dataclass(frozen=True)
class FeVerdict:
    e: int
    candidates: tuple[tuple[tuple[int, int], tuple[int, int], int], ...]
    # ((a1, b1), (a2, b2), det): unordered splittings allowed by irreducibility

    @property
    def no_generating_decomposition(self) -> bool:
        return all(abs(d) != 1 for _, _, d in self.candidates)


def fe_irreducible_allowed(a: int, b: int, e: int) -> bool:
    """Necessary condition for ``a C0 + b F`` to be an irreducible curve."""
    if (a, b) == (0, 0):
        return False
    return (a, b) == (1, 0) or (a >= 0 and b >= a * e >= 0)


def fe_check(e: int) -> FeVerdict:
    """Scan ``-K = 2 C0 + (e+2) F = M1 + M2`` on ``F_e`` for generating pairs."""
    if not isinstance(e, int) or e < 0 or e == 1:
        raise InvalidParameters("need e = 0 or e >= 2")
    total = (2, e + 2)
    found = []
    for a1 in range(0, 3):
        for b1 in range(0, e + 3):
            a2, b2 = total[0] - a1, total[1] - b1
            if (a1, b1) > (a2, b2):
                continue
            if fe_irreducible_allowed(a1, b1, e) and fe_irreducible_allowed(a2, b2, e):
                found.append(((a1, b1), (a2, b2), exact.determinant([[a1, b1], [a2, b2]])))
    return FeVerdict(e, tuple(found))
