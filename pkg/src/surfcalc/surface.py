"""Lattice models of smooth rational surfaces and their contractions.

A :class:`SurfaceModel` is the class lattice of a surface ``Y`` (a Gram matrix
on named basis vectors), its canonical class and a list of tracked curves with
their arithmetic genera.  Singular points already present on the base surface
but invisible in the lattice (the E8 point of ``S(E8)``) ride along as
``carried`` dual graphs.

Blowing up a point where tracked curves have multiplicities ``mu`` appends an
orthogonal ``(-1)`` basis vector ``e`` and updates ``K -> K + e``,
``C -> C - mu e``, ``p_a(C) -> p_a(C) - mu(mu-1)/2``.  Tangencies and
infinitely near points are expressed through those multiplicities only.

Contracting groups of tracked curves gives a :class:`SingularSurfaceModel`
carrying one dual graph per singular point; Mumford pullback, the pairing on
Weil divisors and the class group presentation are computed from it.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm
from typing import Iterable, Mapping, Sequence

from . import dualgraph, exact
from .dualgraph import WeightedDualGraph
from .errors import (
    AdjunctionError,
    CurveContracted,
    DegenerateCurve,
    Disconnected,
    DuplicateId,
    NegativeGenus,
    NonIntegralClasses,
    NotNegativeDefinite,
    OverlappingGroups,
    ParseError,
    PreconditionViolated,
    RankNotOne,
    UnknownCurve,
)

DivisorClass = tuple[Fraction, ...]


def _vec(xs: Iterable) -> DivisorClass:
    return tuple(Fraction(x) for x in xs)


@dataclass(frozen=True)
class TrackedCurve:
    id: str
    cls: DivisorClass
    pa: int


@dataclass(frozen=True)
class BlowupStep:
    new_id: str
    center_mults: Mapping[str, int] = field(default_factory=dict)


@dataclass(frozen=True)
class SurfaceModel:
    basis: tuple[str, ...]
    gram: tuple[tuple[Fraction, ...], ...]
    K: DivisorClass
    curves: tuple[TrackedCurve, ...] = ()
    carried: tuple[WeightedDualGraph, ...] = ()

    def __post_init__(self):
        n = len(self.basis)
        if len(set(self.basis)) != n:
            raise DuplicateId("duplicate basis label")
        if len(self.gram) != n or not exact.is_symmetric(self.gram):
            raise ValueError("gram must be a symmetric square matrix on the basis")
        if exact.determinant(self.gram) == 0:
            raise ValueError("gram is degenerate")
        if len(self.K) != n:
            raise ValueError("canonical class has the wrong length")
        seen = set()
        for c in self.curves:
            if c.id in seen:
                raise DuplicateId(f"duplicate curve id {c.id!r}")
            seen.add(c.id)
            if len(c.cls) != n:
                raise ValueError(f"class of {c.id!r} has the wrong length")
            if c.pa < 0:
                raise NegativeGenus(f"curve {c.id!r} has negative genus")
            lhs = self.dot(c.cls, c.cls) + self.dot(self.K, c.cls)
            if lhs != 2 * c.pa - 2:
                raise AdjunctionError(
                    f"curve {c.id!r}: C^2 + K.C = {lhs} but 2 p_a - 2 = {2 * c.pa - 2}")

    @property
    def rank(self) -> int:
        return len(self.basis)

    def dot(self, a: Sequence, b: Sequence) -> Fraction:
        total = Fraction(0)
        nonzero_b = [(j, y) for j, y in enumerate(b) if y]
        for x, row in zip(a, self.gram):
            if x:
                total += x * sum((row[j] * y for j, y in nonzero_b if row[j]), Fraction(0))
        return total

    def curve(self, cid: str) -> TrackedCurve:
        for c in self.curves:
            if c.id == cid:
                return c
        raise UnknownCurve(f"unknown curve {cid!r}")

    @property
    def curve_ids(self) -> list[str]:
        return [c.id for c in self.curves]

    def class_of(self, spec: Mapping[str, object]) -> DivisorClass:
        """Linear combination of basis labels, e.g. ``{"H": 3, "e1": -1}``."""
        out = [Fraction(0)] * self.rank
        for label, coef in spec.items():
            try:
                out[self.basis.index(label)] += Fraction(coef)
            except ValueError:
                raise UnknownCurve(f"unknown basis label {label!r}") from None
        return tuple(out)

    def combination(self, coeffs: Mapping[str, object]) -> DivisorClass:
        """Linear combination of tracked curve classes."""
        out = [Fraction(0)] * self.rank
        for cid, coef in coeffs.items():
            for i, x in enumerate(self.curve(cid).cls):
                out[i] += Fraction(coef) * x
        return tuple(out)

    def picard_number(self) -> int:
        """Picard number of the minimal resolution (lattice plus carried points)."""
        return self.rank + sum(len(g) for g in self.carried)

    def is_unimodular(self) -> bool:
        return (all(x.denominator == 1 for row in self.gram for x in row)
                and abs(exact.determinant(self.gram)) == 1)


def base_S_E8() -> SurfaceModel:
    """``S(E8)`` with a rational anticanonical curve ``Gamma`` of arithmetic genus 1.

    ``Cl = Z A`` with ``A^2 = 1`` and ``K = -A``; the E8 point is carried and
    lies off ``Gamma``.
    """
    one = Fraction(1)
    return SurfaceModel(
        basis=("A",),
        gram=((one,),),
        K=(-one,),
        curves=(TrackedCurve("Gamma", (one,), 1),),
        carried=(dualgraph.dynkin("E", 8),),
    )


def base_P2() -> SurfaceModel:
    one = Fraction(1)
    return SurfaceModel(basis=("H",), gram=((one,),), K=(Fraction(-3),))


def blowup(m: SurfaceModel, step: BlowupStep) -> SurfaceModel:
    new_id = step.new_id
    if new_id in m.basis or new_id in m.curve_ids:
        raise DuplicateId(f"id {new_id!r} already in use")
    mults = dict(step.center_mults)
    for cid, mu in mults.items():
        m.curve(cid)
        if mu < 0:
            raise ValueError(f"negative multiplicity for {cid!r}")
    curves = []
    for c in m.curves:
        mu = mults.get(c.id, 0)
        pa = c.pa - mu * (mu - 1) // 2
        if pa < 0:
            raise NegativeGenus(f"curve {c.id!r} cannot have a point of multiplicity {mu}")
        curves.append(TrackedCurve(c.id, c.cls + (Fraction(-mu),), pa))
    zero = Fraction(0)
    gram = tuple(row + (zero,) for row in m.gram) + (
        tuple(zero for _ in m.basis) + (Fraction(-1),),)
    curves.append(TrackedCurve(new_id, tuple(zero for _ in m.basis) + (Fraction(1),), 0))
    return SurfaceModel(
        basis=m.basis + (new_id,),
        gram=gram,
        K=m.K + (Fraction(1),),
        curves=tuple(curves),
        carried=m.carried,
    )


def blowups(m: SurfaceModel, steps: Iterable[BlowupStep]) -> SurfaceModel:
    for s in steps:
        m = blowup(m, s)
    return m


def add_curve(m: SurfaceModel, cid: str, cls: Sequence, pa: int) -> SurfaceModel:
    """Start tracking a curve of the given class; adjunction is checked."""
    return SurfaceModel(m.basis, m.gram, m.K,
                        m.curves + (TrackedCurve(cid, _vec(cls), pa),), m.carried)


# ----------------------------------------------------------------------------
# contraction

@dataclass(frozen=True)
class SingularPoint:
    curves: tuple[str, ...]
    graph: WeightedDualGraph

    @property
    def minimal(self) -> bool:
        return all(v.self_intersection <= -2 for v in self.graph.vertices)


@dataclass(frozen=True)
class SingularSurfaceModel:
    ambient: SurfaceModel
    points: tuple[SingularPoint, ...]

    @property
    def contracted(self) -> set[str]:
        return {cid for p in self.points for cid in p.curves}

    def point_of(self, cid: str) -> SingularPoint | None:
        for p in self.points:
            if cid in p.curves:
                return p
        return None

    def global_index(self) -> int:
        """lcm of the local indices, carried points included."""
        r = 1
        for g in self.local_graphs():
            r = lcm(r, dualgraph.local_index(g))
        return r

    def local_graphs(self) -> list[WeightedDualGraph]:
        return [p.graph for p in self.points] + list(self.ambient.carried)


def _configuration_graph(m: SurfaceModel, ids: Sequence[str]) -> WeightedDualGraph:
    vertices = []
    edges = []
    for i, a in enumerate(ids):
        ca = m.curve(a)
        self_int = m.dot(ca.cls, ca.cls)
        if self_int.denominator != 1:
            raise NonIntegralClasses(f"{a!r} has non-integral self-intersection")
        vertices.append((a, int(self_int), ca.pa))
        for b in ids[i + 1:]:
            x = m.dot(ca.cls, m.curve(b).cls)
            if x.denominator != 1:
                raise NonIntegralClasses(f"{a!r}.{b!r} is not an integer")
            if x < 0:
                raise PreconditionViolated(
                    f"distinct curves {a!r}, {b!r} have negative intersection {x}")
            if x:
                edges.append((a, b, int(x)))
    return WeightedDualGraph.build(vertices, edges)


def contract(m: SurfaceModel, groups: Iterable[Iterable[str]]) -> SingularSurfaceModel:
    points = []
    used: set[str] = set()
    for grp in groups:
        ids = list(grp)
        if not ids:
            raise PreconditionViolated("empty contraction group")
        if len(set(ids)) != len(ids) or used & set(ids):
            raise OverlappingGroups(f"curves contracted twice in {ids}")
        used |= set(ids)
        g = _configuration_graph(m, ids)
        if not g.is_connected():
            raise Disconnected(f"group {ids} is not connected")
        if not exact.is_negative_definite(dualgraph.intersection_matrix(g)):
            raise NotNegativeDefinite(f"group {ids} is not negative definite")
        points.append(SingularPoint(tuple(ids), g))
    return SingularSurfaceModel(m, tuple(points))


# ----------------------------------------------------------------------------
# class group

def _integral(v: Sequence[Fraction], what: str) -> list[int]:
    if any(Fraction(x).denominator != 1 for x in v):
        raise NonIntegralClasses(f"{what} is not integral")
    return [int(x) for x in v]


@dataclass(frozen=True)
class ClassGroup:
    """``Z^n / span(contracted classes)`` presented by Smith normal form.

    In the coordinates ``y = x V`` the quotient is
    ``Z/d_1 + ... + Z/d_r + Z^(n - r)``; trivial factors are dropped.
    """

    free_rank: int
    torsion: tuple[int, ...]
    V: exact.IntMatrix
    diagonal: tuple[int, ...]
    minus_K: tuple[tuple[int, ...], tuple[int, ...]]

    def image(self, cls: Sequence) -> tuple[tuple[int, ...], tuple[int, ...]]:
        """(free coordinates, torsion residues) of a class."""
        x = _integral(cls, "class")
        y = [sum(x[i] * self.V[i][j] for i in range(len(x))) for j in range(len(self.V))]
        r = sum(1 for d in self.diagonal if d)
        torsion = tuple(y[i] % d for i, d in enumerate(self.diagonal[:r]) if d > 1)
        return tuple(y[r:]), torsion

    @property
    def anticanonical_generated(self) -> bool:
        free, _ = self.minus_K
        return self.free_rank == 1 and not self.torsion and free in ((1,), (-1,))

    def multiple_of_minus_K(self, cls: Sequence) -> int | None:
        """``k`` with ``cls = k (-K)`` when the group is ``Z (-K)``, else None."""
        if not self.anticanonical_generated:
            return None
        return self.image(cls)[0][0] * self.minus_K[0][0]


def class_group(x: SingularSurfaceModel) -> ClassGroup:
    m = x.ambient
    if not m.is_unimodular():
        raise NonIntegralClasses("ambient gram is not integral unimodular")
    _integral(m.K, "canonical class")
    rows = [_integral(m.curve(cid).cls, f"class of {cid!r}")
            for p in x.points for cid in p.curves]
    n = m.rank
    if rows:
        snf = exact.smith_normal_form(rows)
        V = snf.V
        diagonal = tuple(snf.diagonal)
    else:
        V = exact.identity(n)
        diagonal = ()
    r = sum(1 for d in diagonal if d)
    partial = ClassGroup(n - r, tuple(d for d in diagonal if d > 1), V, diagonal, ((), ()))
    minus_K = partial.image([-k for k in m.K])
    return ClassGroup(partial.free_rank, partial.torsion, V, diagonal, minus_K)


# ----------------------------------------------------------------------------
# Mumford pullback and pairing

def pullback(x: SingularSurfaceModel, D: Sequence) -> DivisorClass:
    """``D`` plus the exceptional correction orthogonal to every contracted curve."""
    m = x.ambient
    out = list(_vec(D))
    for p in x.points:
        M = dualgraph.intersection_matrix(p.graph)
        classes = [m.curve(cid).cls for cid in p.curves]
        rhs = [-m.dot(D, c) for c in classes]
        coeffs = exact.solve(M, rhs)
        for a, c in zip(coeffs, classes):
            for i, ci in enumerate(c):
                out[i] += a * ci
    return tuple(out)


def pair(x: SingularSurfaceModel, A: Sequence, B: Sequence) -> Fraction:
    return x.ambient.dot(pullback(x, A), pullback(x, B))


def attachment(x: SingularSurfaceModel, point: SingularPoint, cls: Sequence) -> dict[str, Fraction]:
    m = x.ambient
    return {cid: m.dot(cls, m.curve(cid).cls) for cid in point.curves}


# ----------------------------------------------------------------------------
# curve tests

def adjoint_empty(m: SurfaceModel, ids: Iterable[str]) -> bool:
    """``|K_Y + D| = 0`` for reduced ``D``: each component of ``D`` is a rational tree."""
    ids = list(dict.fromkeys(ids))
    return dualgraph.is_rational_tree(_configuration_graph(m, ids))


def even_pairing(m: SurfaceModel, cls: Sequence) -> bool:
    """Whether ``cls`` pairs evenly with every integral class of the lattice."""
    for i in range(m.rank):
        unit = [0] * m.rank
        unit[i] = 1
        v = m.dot(cls, unit)
        if v.denominator != 1 or v.numerator % 2:
            return False
    return True


@dataclass(frozen=True)
class SmoothRationalVerdict:
    curve: str
    genus_zero: bool
    transversal: bool  # meets every contracted configuration with total multiplicity <= 1
    adjoint_multiple: int | None  # K_X + C = k (-K_X), when Cl(X) = Z (-K_X)

    @property
    def adjoint_empty(self) -> bool | None:
        if self.adjoint_multiple is None:
            return None
        return self.adjoint_multiple < 0

    def __bool__(self) -> bool:
        return self.genus_zero


def is_smooth_rational(x: SingularSurfaceModel, cid: str) -> SmoothRationalVerdict:
    """Genus verdict for the image of a tracked curve, with the adjoint test alongside.

    The boolean value is ``p_a = 0`` for the tracked curve.  That equals the
    genus of the image only for transversal curves, so ``transversal`` must be
    checked before trusting it.
    """
    if cid in x.contracted:
        raise CurveContracted(f"curve {cid!r} is contracted")
    m = x.ambient
    c = m.curve(cid)
    transversal = all(
        sum(attachment(x, p, c.cls).values()) <= 1 for p in x.points)
    multiple = None
    try:
        cg = class_group(x)
    except NonIntegralClasses:
        cg = None
    if cg is not None:
        multiple = cg.multiple_of_minus_K([k + v for k, v in zip(m.K, c.cls)])
    return SmoothRationalVerdict(cid, c.pa == 0, transversal, multiple)


@dataclass(frozen=True)
class TigerReport:
    alpha: Fraction
    beta: Fraction
    local_thresholds: dict[str, Fraction]  # keyed by the first curve of each point

    @property
    def supports_tiger(self) -> bool:
        # (K + beta C).C <= 0  <=>  beta <= alpha, as C^2 > 0 on a rank one surface
        return self.alpha >= self.beta


def tiger_test(x: SingularSurfaceModel, cid: str) -> TigerReport:
    """Compare ``alpha`` (``K_X + alpha C = 0``) with ``beta = lct(X, C)``."""
    if class_group(x).free_rank != 1:
        raise RankNotOne("class group does not have rank one")
    if cid in x.contracted:
        raise CurveContracted(f"curve {cid!r} is contracted")
    m = x.ambient
    C = m.curve(cid).cls
    cc = pair(x, C, C)
    if cc == 0:
        raise DegenerateCurve(f"curve {cid!r} has zero self-intersection on X")
    alpha = -pair(x, m.K, C) / cc
    beta = Fraction(1)
    local = {}
    for p in x.points:
        att = attachment(x, p, C)
        if any(att.values()):
            t = dualgraph.lct_local(p.graph, {k: int(v) for k, v in att.items()})
            local[p.curves[0]] = t
            beta = min(beta, t)
    return TigerReport(alpha, beta, local)


# ----------------------------------------------------------------------------
# blowup scripts

BASES = {"S_E8": base_S_E8, "P2": base_P2}


def run_script(obj) -> SingularSurfaceModel:
    """Execute a blowup-script object (see README for the schema)."""
    if not isinstance(obj, dict):
        raise ParseError("script must be a JSON object")
    base = obj.get("base")
    if base not in BASES:
        raise ParseError(f"base: expected one of {sorted(BASES)}, got {base!r}")
    m = BASES[base]()
    for k, step in enumerate(obj.get("steps", [])):
        where = f"steps[{k}]"
        if not isinstance(step, dict):
            raise ParseError(f"{where}: expected an object")
        if "curve" in step:
            cid, cls, pa = step.get("curve"), step.get("cls"), step.get("pa", 0)
            if not isinstance(cid, str) or not isinstance(cls, dict):
                raise ParseError(f"{where}: curve steps need 'curve' (str) and 'cls' (object)")
            m = add_curve(m, cid, m.class_of(cls), pa)
            continue
        new_id = step.get("new_id")
        mults = step.get("mults", {})
        if not isinstance(new_id, str):
            raise ParseError(f"{where}.new_id: expected a string")
        if not isinstance(mults, dict) or not all(
                isinstance(v, int) and not isinstance(v, bool) and v >= 0
                for v in mults.values()):
            raise ParseError(f"{where}.mults: expected an object of nonnegative integers")
        m = blowup(m, BlowupStep(new_id, mults))
    groups = obj.get("contract", [])
    if not isinstance(groups, list) or not all(isinstance(g, list) for g in groups):
        raise ParseError("contract: expected a list of lists of curve ids")
    return contract(m, groups)
