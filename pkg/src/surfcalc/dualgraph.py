"""Resolution dual graphs of normal surface singularities.

A :class:`WeightedDualGraph` records the exceptional curves of a resolution
(self-intersection and genus per vertex) and their mutual intersection
numbers (edge multiplicities).  Everything local to a singular point is
computed from its intersection matrix ``M``:

* the fundamental cycle, by Laufer's computation sequence;
* the discrepancy cycle ``d`` solving ``M d = -k`` where ``k_i = K.E_i``;
* local index, local class group ``coker M``, klt and rationality tests;
* recognition of cyclic quotient chains, forks and Du Val graphs;
* thresholds and pullback corrections for curves attached to the graph.

Cycles and attachments are ``dict``s keyed by vertex id, always returned in
vertex order.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Iterable, Mapping, Sequence, Union

from . import exact
from .errors import (
    DuplicateId,
    InvalidParameters,
    NonIntegralCycle,
    NonRationalVertex,
    NotContractible,
    ParseError,
    PreconditionViolated,
    SelfLoop,
    UnknownVertex,
)

Cycle = dict[str, Fraction]
Attachment = Mapping[str, int]


@dataclass(frozen=True)
class Vertex:
    id: str
    self_intersection: int
    genus: int = 0


@dataclass(frozen=True)
class Edge:
    a: str
    b: str
    mult: int = 1


@dataclass(frozen=True)
class WeightedDualGraph:
    vertices: tuple[Vertex, ...]
    edges: tuple[Edge, ...] = ()
    _index: dict = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(self.vertices))
        object.__setattr__(self, "edges", tuple(self.edges))
        index = {}
        for i, v in enumerate(self.vertices):
            if v.id in index:
                raise DuplicateId(f"duplicate vertex id {v.id!r}")
            if v.genus < 0:
                raise InvalidParameters(f"vertex {v.id!r} has negative genus")
            index[v.id] = i
        for e in self.edges:
            for end in (e.a, e.b):
                if end not in index:
                    raise UnknownVertex(f"edge refers to unknown vertex {end!r}")
            if e.a == e.b:
                raise SelfLoop(f"edge joins {e.a!r} to itself")
            if e.mult < 1:
                raise InvalidParameters(
                    f"edge {e.a!r}-{e.b!r} has multiplicity {e.mult} < 1")
        object.__setattr__(self, "_index", index)

    @classmethod
    def build(cls, vertices: Iterable, edges: Iterable = ()) -> "WeightedDualGraph":
        """Build from ``(id, self[, genus])`` and ``(a, b[, mult])`` tuples."""
        return cls(tuple(Vertex(*v) for v in vertices),
                   tuple(Edge(*e) for e in edges))

    @property
    def ids(self) -> list[str]:
        return [v.id for v in self.vertices]

    def __len__(self) -> int:
        return len(self.vertices)

    def index(self, vid: str) -> int:
        try:
            return self._index[vid]
        except KeyError:
            raise UnknownVertex(f"unknown vertex {vid!r}") from None

    def vertex(self, vid: str) -> Vertex:
        return self.vertices[self.index(vid)]

    def neighbours(self, vid: str) -> dict[str, int]:
        out: dict[str, int] = {}
        for e in self.edges:
            if e.a == vid:
                out[e.b] = out.get(e.b, 0) + e.mult
            elif e.b == vid:
                out[e.a] = out.get(e.a, 0) + e.mult
        return out

    def degree(self, vid: str) -> int:
        return sum(self.neighbours(vid).values())

    def is_connected(self, subset: Iterable[str] | None = None) -> bool:
        keep = set(self.ids if subset is None else subset)
        if not keep:
            return True
        start = next(iter(keep))
        seen = {start}
        stack = [start]
        while stack:
            v = stack.pop()
            for w in self.neighbours(v):
                if w in keep and w not in seen:
                    seen.add(w)
                    stack.append(w)
        return seen == keep

    def to_dict(self) -> dict:
        return {
            "vertices": [{"id": v.id, "self": v.self_intersection, "genus": v.genus}
                         for v in self.vertices],
            "edges": [{"a": e.a, "b": e.b, "mult": e.mult} for e in self.edges],
        }

    @classmethod
    def from_dict(cls, obj) -> "WeightedDualGraph":
        """Parse the graph JSON schema; raises :class:`ParseError` on bad input."""
        if not isinstance(obj, dict) or "vertices" not in obj:
            raise ParseError("graph object needs a 'vertices' list")
        vertices = []
        for k, v in enumerate(obj["vertices"]):
            where = f"vertices[{k}]"
            if not isinstance(v, dict):
                raise ParseError(f"{where}: expected an object")
            vid = v.get("id")
            if not isinstance(vid, str):
                raise ParseError(f"{where}.id: expected a string")
            si = v.get("self")
            if not _is_int(si):
                raise ParseError(f"{where}.self: expected an integer")
            genus = v.get("genus", 0)
            if not _is_int(genus) or genus < 0:
                raise ParseError(f"{where}.genus: expected a nonnegative integer")
            vertices.append(Vertex(vid, si, genus))
        known = {v.id for v in vertices}
        edges = []
        for k, e in enumerate(obj.get("edges", [])):
            where = f"edges[{k}]"
            if not isinstance(e, dict):
                raise ParseError(f"{where}: expected an object")
            for end in ("a", "b"):
                if not isinstance(e.get(end), str):
                    raise ParseError(f"{where}.{end}: expected a string")
                if e[end] not in known:
                    raise ParseError(f"{where}.{end}: unknown vertex id {e[end]!r}")
            mult = e.get("mult", 1)
            if not _is_int(mult) or mult < 1:
                raise ParseError(f"{where}.mult: multiplicity must be an integer >= 1")
            edges.append(Edge(e["a"], e["b"], mult))
        return cls(tuple(vertices), tuple(edges))


def _is_int(x) -> bool:
    return isinstance(x, int) and not isinstance(x, bool)


# ----------------------------------------------------------------------------
# standard graphs

def chain(weights: Sequence[int], prefix: str = "v") -> WeightedDualGraph:
    """Chain with the given self-intersections, ids ``prefix1, prefix2, ...``."""
    ids = [f"{prefix}{i + 1}" for i in range(len(weights))]
    return WeightedDualGraph.build(
        [(vid, w) for vid, w in zip(ids, weights)],
        [(ids[i], ids[i + 1]) for i in range(len(ids) - 1)],
    )


def hj_weights(n: int, q: int) -> list[int]:
    """Hirzebruch-Jung expansion ``n/q = b1 - 1/(b2 - ...)``, all ``b_i >= 2``."""
    if not (_is_int(n) and _is_int(q)) or not 0 < q < n or gcd(n, q) != 1:
        raise InvalidParameters(f"need 0 < q < n with gcd(n, q) = 1, got n={n}, q={q}")
    out = []
    while q:
        b = -(-n // q)
        out.append(b)
        n, q = q, b * q - n
    return out


def hj_fraction(bs: Sequence[int]) -> tuple[int, int]:
    """Inverse of :func:`hj_weights`: the pair ``(n, q)`` of ``[b1, ..., bk]``."""
    num, den = bs[-1], 1
    for b in reversed(bs[:-1]):
        num, den = b * num - den, num
    return num, den


def hj_expand(n: int, q: int) -> WeightedDualGraph:
    """Resolution chain of the cyclic quotient singularity ``1/n(1,q)``."""
    return chain([-b for b in hj_weights(n, q)])


def fork(b: int, branches: Sequence[tuple[int, int]]) -> WeightedDualGraph:
    """Star-shaped graph: central ``(-b)`` curve plus one HJ chain per branch.

    Each branch chain is read from the vertex adjacent to the centre.  Vertex
    ids are ``c`` for the centre and ``b<i>_<j>`` along branch ``i``.
    """
    vertices = [("c", -b)]
    edges = []
    for i, (n, q) in enumerate(branches, start=1):
        prev = "c"
        for j, w in enumerate(hj_weights(n, q), start=1):
            vid = f"b{i}_{j}"
            vertices.append((vid, -w))
            edges.append((prev, vid))
            prev = vid
    return WeightedDualGraph.build(vertices, edges)


def dynkin(family: str, rank: int) -> WeightedDualGraph:
    """All-(-2) ADE graph.  E-type ids follow Bourbaki (``e1..e8``)."""
    family = family.upper()
    if family == "A" and rank >= 1:
        return chain([-2] * rank, prefix="a")
    if family == "D" and rank >= 4:
        return fork(2, [(2, 1), (2, 1), (rank - 2, rank - 3)])
    if family == "E" and rank in (6, 7, 8):
        ids = [f"e{i}" for i in range(1, rank + 1)]
        # Bourbaki: e1-e3-e4-...-e_rank chain, e2 attached to e4
        path = ["e1"] + ids[2:]
        edges = [(path[i], path[i + 1]) for i in range(len(path) - 1)]
        edges.append(("e2", "e4"))
        return WeightedDualGraph.build([(v, -2) for v in ids], edges)
    raise InvalidParameters(f"no Dynkin diagram {family}{rank}")


# ----------------------------------------------------------------------------
# intersection theory on the graph

def intersection_matrix(g: WeightedDualGraph) -> exact.IntMatrix:
    n = len(g)
    M = [[0] * n for _ in range(n)]
    for i, v in enumerate(g.vertices):
        M[i][i] = v.self_intersection
    for e in g.edges:
        i, j = g.index(e.a), g.index(e.b)
        M[i][j] += e.mult
        M[j][i] += e.mult
    return M


def canonical_numbers(g: WeightedDualGraph) -> list[int]:
    """``K.E_i = 2 g_i - 2 - E_i^2`` by adjunction."""
    return [2 * v.genus - 2 - v.self_intersection for v in g.vertices]


def _require_resolution(g: WeightedDualGraph) -> exact.IntMatrix:
    if not len(g):
        raise PreconditionViolated("empty graph")
    if not g.is_connected():
        raise PreconditionViolated("graph is not connected")
    M = intersection_matrix(g)
    if not exact.is_negative_definite(M):
        raise NotContractible("intersection matrix is not negative definite")
    return M


@lru_cache(maxsize=512)
def _inverse(g: WeightedDualGraph) -> tuple[tuple[Fraction, ...], ...]:
    # graphs are immutable, so the checks and the inverse are shared across calls
    return tuple(tuple(row) for row in exact.inverse(_require_resolution(g)))


def _solve(g: WeightedDualGraph, rhs: Sequence) -> list[Fraction]:
    return exact.matvec(_inverse(g), [Fraction(x) for x in rhs])


def _require_rational_vertices(g: WeightedDualGraph) -> None:
    bad = [v.id for v in g.vertices if v.genus > 0]
    if bad:
        raise NonRationalVertex(f"vertices of positive genus: {bad}")


def _as_vector(g: WeightedDualGraph, values: Mapping[str, object]) -> list[Fraction]:
    vec = [Fraction(0)] * len(g)
    for k, v in values.items():
        vec[g.index(k)] = Fraction(v)
    return vec


def _as_cycle(g: WeightedDualGraph, vec: Sequence) -> Cycle:
    return {vid: Fraction(x) for vid, x in zip(g.ids, vec)}


def _check_attachment(g: WeightedDualGraph, attach: Attachment) -> list[Fraction]:
    vec = _as_vector(g, attach)
    if any(x < 0 for x in vec):
        raise PreconditionViolated("attachment entries must be nonnegative")
    if not any(vec):
        raise PreconditionViolated("attachment is zero")
    return vec


def pairing(g: WeightedDualGraph, A: Mapping[str, object], B: Mapping[str, object]) -> Fraction:
    """Intersection number of two cycles supported on the graph."""
    M = intersection_matrix(g)
    a, b = _as_vector(g, A), _as_vector(g, B)
    return sum((x * y for x, y in zip(a, exact.matvec(M, b))), Fraction(0))


def fundamental_cycle(g: WeightedDualGraph) -> Cycle:
    """Artin's fundamental cycle via Laufer's computation sequence.

    Starts from the reduced cycle and keeps adding the lowest-index ``E_i``
    with ``Z.E_i > 0`` until ``Z`` is anti-nef.
    """
    M = _require_resolution(g)
    n = len(g)
    Z = [1] * n
    while True:
        products = exact.matvec(M, Z)
        i = next((i for i in range(n) if products[i] > 0), None)
        if i is None:
            return _as_cycle(g, Z)
        Z[i] += 1


def cycle_genus(g: WeightedDualGraph, Z: Mapping[str, object]) -> Fraction:
    """Arithmetic genus ``p_a(Z) = 1 + (Z.Z + K.Z) / 2`` of an integral cycle."""
    z = _as_vector(g, Z)
    if any(x.denominator != 1 for x in z):
        raise NonIntegralCycle("cycle must have integer coefficients")
    if any(x < 0 for x in z):
        raise PreconditionViolated("cycle must be effective")
    k = canonical_numbers(g)
    kz = sum((a * b for a, b in zip(k, z)), Fraction(0))
    return 1 + (pairing(g, Z, Z) + kz) / 2


def is_rational(g: WeightedDualGraph) -> bool:
    """Artin's criterion: the fundamental cycle has arithmetic genus 0."""
    return cycle_genus(g, fundamental_cycle(g)) == 0


def discrepancy_cycle(g: WeightedDualGraph) -> Cycle:
    """Coefficients ``d`` with ``K_Y + sum d_i E_i`` numerically trivial on every ``E_i``."""
    _inverse(g)
    _require_rational_vertices(g)
    k = canonical_numbers(g)
    return _as_cycle(g, _solve(g, [-x for x in k]))


def canonical_pairing(g: WeightedDualGraph) -> Fraction:
    """``K_Y . G`` for the discrepancy cycle ``G``."""
    d = discrepancy_cycle(g)
    return sum((di * ki for di, ki in zip(d.values(), canonical_numbers(g))), Fraction(0))


def local_index(g: WeightedDualGraph) -> int:
    """Least ``m >= 1`` making ``m K`` Cartier: lcm of the discrepancy denominators."""
    return exact.lcm_of_denominators(discrepancy_cycle(g).values())


def is_klt(g: WeightedDualGraph) -> bool:
    return all(d < 1 for d in discrepancy_cycle(g).values())


@dataclass(frozen=True)
class LocalClassGroup:
    divisors: tuple[int, ...]  # elementary divisors > 1
    order: int
    index: int | None  # local index, None when some vertex has positive genus

    @property
    def cyclic(self) -> bool:
        return len(self.divisors) <= 1

    @property
    def cyclic_of_index_order(self) -> bool | None:
        if self.index is None:
            return None
        return self.cyclic and self.order == self.index


def local_class_group(g: WeightedDualGraph) -> LocalClassGroup:
    """Cokernel of the intersection matrix, read off its Smith normal form."""
    M = _require_resolution(g)
    divisors = tuple(d for d in exact.elementary_divisors(M) if d > 1)
    order = abs(exact.determinant(M))
    index = local_index(g) if all(v.genus == 0 for v in g.vertices) else None
    return LocalClassGroup(divisors, order, index)


def is_rational_tree(g: WeightedDualGraph, subset: Iterable[str] | None = None) -> bool:
    """Every chosen vertex has genus 0 and the induced multigraph is a forest."""
    keep = list(g.ids if subset is None else dict.fromkeys(subset))
    chosen = set(keep)
    for vid in keep:
        if g.vertex(vid).genus != 0:
            return False
    edges = sum(e.mult for e in g.edges if e.a in chosen and e.b in chosen)
    components = _count_components(g, chosen)
    return edges == len(chosen) - components


def _count_components(g: WeightedDualGraph, keep: set[str]) -> int:
    seen: set[str] = set()
    count = 0
    for start in g.ids:
        if start not in keep or start in seen:
            continue
        count += 1
        stack = [start]
        seen.add(start)
        while stack:
            v = stack.pop()
            for w in g.neighbours(v):
                if w in keep and w not in seen:
                    seen.add(w)
                    stack.append(w)
    return count


@dataclass(frozen=True)
class AttachmentSolution:
    coefficients: Cycle
    attached_values: dict[str, Fraction]

    @property
    def integral(self) -> bool:
        return all(x.denominator == 1 for x in self.coefficients.values())

    @property
    def all_at_least_one(self) -> bool:
        return all(x >= 1 for x in self.coefficients.values())

    @property
    def passes(self) -> bool:
        return self.integral and self.all_at_least_one


def attachment_solve(g: WeightedDualGraph, attach: Attachment) -> AttachmentSolution:
    """Solve ``M a = -(k + t)`` for a curve meeting ``E_i`` with multiplicity ``t_i``.

    This makes ``K_Y + C + sum a_i E_i`` numerically trivial on each ``E_i``.
    """
    _inverse(g)
    t = _check_attachment(g, attach)
    k = canonical_numbers(g)
    a = _as_cycle(g, _solve(g, [-(ki + ti) for ki, ti in zip(k, t)]))
    touched = {vid: a[vid] for vid, ti in zip(g.ids, t) if ti}
    return AttachmentSolution(a, touched)


def lct_local(g: WeightedDualGraph, attach: Attachment) -> Fraction:
    """Log canonical threshold at the point of a curve with the given attachment.

    Each exceptional coefficient of ``pi^*(K + tC) - K_Y - tC~`` is affine in
    ``t``: ``d_i + t c_i`` with ``c = -M^{-1} attach``.  The threshold is the
    largest ``t <= 1`` keeping all of them at most 1.
    """
    t = _check_attachment(g, attach)
    d = list(discrepancy_cycle(g).values())
    c = _solve(g, [-x for x in t])
    beta = Fraction(1)
    for di, ci in zip(d, c):
        if ci > 0:
            beta = min(beta, (1 - di) / ci)
    return beta


def mumford_correction(g: WeightedDualGraph, attach_a: Mapping[str, object],
                       attach_b: Mapping[str, object]) -> Fraction:
    """``-a^T M^{-1} b``: the exceptional part of ``pi^*A . pi^*B``."""
    _inverse(g)
    a, b = _as_vector(g, attach_a), _as_vector(g, attach_b)
    x = _solve(g, b)
    return -sum((ai * xi for ai, xi in zip(a, x)), Fraction(0))


# ----------------------------------------------------------------------------
# recognition

@dataclass(frozen=True)
class Cyclic:
    """``1/n(1,q)``; ``q`` is the smaller of the two chain readings."""

    n: int
    q: int
    q_inverse: int  # q * q_inverse = 1 mod n, the reading from the other end

    @property
    def other_convention(self) -> tuple[int, int]:
        # 1/n(1,q) is written 1/n(1,n-q) by authors who swap the action sign
        return self.n, self.n - self.q

    @property
    def is_du_val(self) -> bool:
        return self.q == self.n - 1

    def __str__(self) -> str:
        return f"1/{self.n}(1,{self.q})"


@dataclass(frozen=True)
class Fork:
    b: int
    branches: tuple[tuple[int, int], ...]

    def __str__(self) -> str:
        inner = ";".join(f"{n},{q}" for n, q in self.branches)
        return f"<{self.b};{inner}>"


@dataclass(frozen=True)
class DuVal:
    family: str
    rank: int

    def __str__(self) -> str:
        return f"{self.family}{self.rank}"


@dataclass(frozen=True)
class NotQuotient:
    reason: str = ""

    def __str__(self) -> str:
        return "not a quotient singularity"


SingularityType = Union[Cyclic, Fork, DuVal, NotQuotient]


def is_admissible_cyclic(t: SingularityType) -> bool:
    """Cyclic with ``gcd(q, n) = gcd(q + 1, n) = 1``."""
    return isinstance(t, Cyclic) and gcd(t.q, t.n) == 1 and gcd(t.q + 1, t.n) == 1


def _path_from(g: WeightedDualGraph, start: str, banned: str | None) -> list[str]:
    path = [start]
    prev, cur = banned, start
    while True:
        nxt = [w for w in g.neighbours(cur) if w != prev]
        if not nxt:
            return path
        prev, cur = cur, nxt[0]
        path.append(cur)


def _cyclic_from_weights(bs: Sequence[int]) -> Cyclic:
    n, q = hj_fraction(bs)
    _, q_rev = hj_fraction(list(reversed(bs)))
    lo, hi = sorted((q, q_rev))
    return Cyclic(n, lo, hi)


def recognize(g: WeightedDualGraph) -> SingularityType:
    """Classify a minimal good resolution graph against the quotient list."""
    _require_resolution(g)
    _require_rational_vertices(g)
    if any(e.mult != 1 for e in g.edges):
        raise PreconditionViolated("edge multiplicities > 1 are not normal crossings")
    if any(v.self_intersection > -2 for v in g.vertices):
        raise PreconditionViolated("graph is not minimal (a curve has self-intersection > -2)")
    if len(g.edges) != len(g) - 1:
        return NotQuotient("dual graph contains a cycle")
    degrees = {vid: g.degree(vid) for vid in g.ids}
    weight = {v.id: -v.self_intersection for v in g.vertices}
    branch_points = [vid for vid, d in degrees.items() if d >= 3]
    if not branch_points:
        start = next(vid for vid in g.ids if degrees[vid] <= 1)
        return _cyclic_from_weights([weight[v] for v in _path_from(g, start, None)])
    if len(branch_points) > 1 or degrees[branch_points[0]] > 3:
        return NotQuotient("graph is not a chain or a three-branch star")
    centre = branch_points[0]
    branches = []
    for nb in g.neighbours(centre):
        bs = [weight[v] for v in _path_from(g, nb, centre)]
        n, q = hj_fraction(bs)
        branches.append((n, q, len(bs)))
    branches.sort()
    ns = tuple(n for n, _, _ in branches)
    if sum(Fraction(1, n) for n in ns) <= 1:
        return NotQuotient(f"branch indices {ns} are not platonic")
    if all(w == 2 for w in weight.values()):
        if ns[:2] == (2, 2):
            return DuVal("D", len(g))
        return DuVal("E", len(g))
    return Fork(weight[centre], tuple((n, q) for n, q, _ in branches))
