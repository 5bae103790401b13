"""Harmonic Z/ell-cochains on semi-graphs, topological Z/ell covers, and the
rank of H^1(X, mu_ell) assembled from a decorated skeleton.

An oriented edge is ``(edge_id, head_branch_id)``: the orientation pointing
toward the vertex that branch lands on.  Closed edges have two orientations,
open edges only the one pointing toward their vertex.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from math import gcd
from typing import TYPE_CHECKING, Mapping

from .errors import DomainError, Report
from .exact import is_prime
from .modlinalg import kernel_mod, rank_mod_prime
from .semigraph import Branch, Edge, SemiGraph, betti, spanning_tree

if TYPE_CHECKING:
    from .skeleton import Skeleton

OrientedEdge = tuple[str, str]


def oriented_edges(g: SemiGraph) -> list[OrientedEdge]:
    out = []
    for e in sorted(g.edges, key=lambda e: e.id):
        for b in e.branches:
            out.append((e.id, b.id))
    return out


def reverse(g: SemiGraph, oe: OrientedEdge) -> OrientedEdge:
    e = g.edge(oe[0])
    if e.is_open:
        raise DomainError("open_edge", f"open edge {e.id} has a single orientation")
    return (e.id, e.opposite(oe[1]).id)


@dataclass(frozen=True)
class HarmonicCochain:
    modulus: int
    values: Mapping[OrientedEdge, int]

    def __call__(self, edge_id: str, head_branch: str) -> int:
        return self.values[edge_id, head_branch]

    def toward(self, g: SemiGraph, edge_id: str, vertex: str) -> int:
        """Value on the orientation of ``edge_id`` pointing toward ``vertex`` (first branch for loops)."""
        for b in g.edge(edge_id).branches:
            if b.vertex == vertex:
                return self.values[edge_id, b.id]
        raise DomainError("not_incident", f"edge {edge_id} does not reach {vertex}")

    def vector(self, g: SemiGraph) -> list[int]:
        """Coordinates on the canonical orientation of each edge (toward its last branch)."""
        return [self.values[e.id, e.branches[-1].id] for e in sorted(g.edges, key=lambda e: e.id)]

    def is_zero(self) -> bool:
        return not any(self.values.values())

    def to_json(self) -> dict:
        return {
            "modulus": self.modulus,
            "values": [{"edge": e, "head": b, "value": v} for (e, b), v in sorted(self.values.items())],
        }


def _from_vector(g: SemiGraph, vec: list[int], ell: int) -> HarmonicCochain:
    values = {}
    for e, x in zip(sorted(g.edges, key=lambda e: e.id), vec):
        x %= ell
        values[e.id, e.branches[-1].id] = x
        if e.is_closed:
            values[e.id, e.branches[0].id] = (-x) % ell
    return HarmonicCochain(ell, values)


def check_cochain(g: SemiGraph, c: HarmonicCochain) -> Report:
    """Verify antisymmetry and zero divergence value by value."""
    ell = c.modulus
    for e in g.edges:
        for b in e.branches:
            if (e.id, b.id) not in c.values:
                return Report.failed("missing_value", f"no value on {e.id} toward {b.vertex}", e.id, b.id)
        if e.is_closed:
            b0, b1 = e.branches
            if (c.values[e.id, b0.id] + c.values[e.id, b1.id]) % ell:
                return Report.failed("not_antisymmetric", f"c(-{e.id}) != -c({e.id})", e.id)
    for v in g.vertices:
        # a loop contributes both of its orientations here, so it cancels
        div = sum(c.values[e.id, b.id] for e, b in g.incident(v)) % ell
        if div:
            return Report.failed("divergence", f"divergence {div} at vertex {v}", v)
    return Report.passed()


def incidence_matrix(g: SemiGraph) -> list[list[int]]:
    """Rows: vertices (sorted); columns: edges (sorted) on their canonical orientation."""
    vs = sorted(g.vertices)
    row = {v: i for i, v in enumerate(vs)}
    es = sorted(g.edges, key=lambda e: e.id)
    a = [[0] * len(es) for _ in vs]
    for j, e in enumerate(es):
        if e.is_open:
            a[row[e.head]][j] += 1
        elif not e.is_loop:
            a[row[e.head]][j] += 1
            a[row[e.tail]][j] -= 1
    return a


@dataclass(frozen=True)
class HarmBasis:
    modulus: int
    generators: tuple[HarmonicCochain, ...]
    rank: int | None  # only for prime modulus

    def to_json(self) -> dict:
        return {"modulus": self.modulus, "rank": self.rank,
                "generators": [c.to_json() for c in self.generators]}


def _require_connected(g: SemiGraph) -> None:
    if not g.is_connected():
        raise DomainError("disconnected", "semi-graph must be connected; split it into components first")


def harm_basis(g: SemiGraph, ell: int) -> HarmBasis:
    """Generators of Harm(g, Z/ell); a basis with its dimension when ell is prime."""
    _require_connected(g)
    if ell < 2:
        raise DomainError("bad_modulus", "modulus must be >= 2")
    vecs = kernel_mod(incidence_matrix(g), len(g.edges), ell)
    gens = tuple(_from_vector(g, v, ell) for v in vecs)
    rank = None
    if is_prime(ell):
        rank = rank_mod_prime(vecs, ell) if vecs else 0
    return HarmBasis(ell, gens, rank)


def harm_rank_formula(g: SemiGraph) -> int:
    """Closed-form dimension for a connected semi-graph over a prime field."""
    e, v, o = len(g.closed_edges), len(g.vertices), len(g.open_edges)
    return e - v + 1 + max(o - 1, 0)


def _vertex_path(g: SemiGraph, src: str, dst: str) -> list[tuple[Edge, Branch]]:
    """Shortest path as a list of (edge, branch toward the next vertex)."""
    prev: dict[str, tuple[str, Edge, Branch] | None] = {src: None}
    queue = deque([src])
    while queue and dst not in prev:
        x = queue.popleft()
        for e, b in sorted(g.incident(x), key=lambda eb: eb[1].id):
            if e.is_open or e.is_loop:
                continue
            far = e.opposite(b.id)
            if far.vertex not in prev:
                prev[far.vertex] = (x, e, far)
                queue.append(far.vertex)
    path = []
    node = dst
    while prev[node] is not None:
        x, e, far = prev[node]
        path.append((e, far))
        node = x
    return path[::-1]


def prescribed_cochain(g: SemiGraph, e1: str, e2: str, e3: str, a: int, a2: int, ell: int) -> HarmonicCochain:
    """Harmonic cochain with values a, a2, -(a + a2) on three open edges and 0 on the other open edges.

    Built as the sum of two flows: a along a path from the end of ``e1`` to the
    end of ``e3``, and a2 along a path from the end of ``e2`` to the end of ``e3``.
    """
    _require_connected(g)
    if len(g.open_edges) < 3:
        raise DomainError("too_few_open_edges", "need at least three open edges")
    if len({e1, e2, e3}) != 3:
        raise DomainError("edges_not_distinct", "the three open edges must be distinct")
    for eid in (e1, e2, e3):
        if eid not in {e.id for e in g.open_edges}:
            raise DomainError("not_open", f"{eid} is not an open edge")
    values = {oe: 0 for oe in oriented_edges(g)}

    def push(start_edge: str, amount: int) -> None:
        src, dst = g.edge(start_edge), g.edge(e3)
        values[src.id, src.branches[0].id] += amount
        for e, far in _vertex_path(g, src.head, dst.head):
            values[e.id, far.id] += amount
            values[e.id, e.opposite(far.id).id] -= amount
        values[dst.id, dst.branches[0].id] -= amount

    push(e1, a)
    push(e2, a2)
    return HarmonicCochain(ell, {k: v % ell for k, v in values.items()})


def in_span(g: SemiGraph, c: HarmonicCochain, basis: HarmBasis) -> bool:
    """Membership test over a prime field."""
    ell = basis.modulus
    if not is_prime(ell):
        raise DomainError("bad_modulus", "span membership is only decided over prime moduli")
    vecs = [b.vector(g) for b in basis.generators]
    base = rank_mod_prime(vecs, ell) if vecs else 0
    return rank_mod_prime(vecs + [c.vector(g)], ell) == base


@dataclass(frozen=True)
class DecorationFreeCover:
    base: SemiGraph
    total: SemiGraph
    vertex_map: Mapping[str, str]
    edge_map: Mapping[str, str]
    degree: int

    def components(self) -> int:
        return len(self.total.components())


def cover_from_class(g: SemiGraph, ell: int, cls: Mapping[str, int]) -> DecorationFreeCover:
    """Degree-ell cover with monodromy ``cls`` on the edges outside the spanning tree.

    The closed edge e from tail v to head w with class s joins (v, i) to (w, i + s).
    """
    _require_connected(g)
    tree = spanning_tree(g)
    for eid in cls:
        e = g.edge(eid)
        if e.is_open or eid in tree:
            raise DomainError("class_on_tree_edge", f"{eid} is not a closed edge outside the spanning tree")
    vmap, emap, verts, edges = {}, {}, [], []
    for v in g.vertices:
        for i in range(ell):
            vid = f"{v}#{i}"
            verts.append(vid)
            vmap[vid] = v
    for e in g.edges:
        shift = cls.get(e.id, 0) % ell
        for i in range(ell):
            eid = f"{e.id}#{i}"
            if e.is_open:
                b = e.branches[0]
                branches = (Branch(f"{b.id}#{i}", f"{b.vertex}#{i}"),)
            else:
                b0, b1 = e.branches
                branches = (Branch(f"{b0.id}#{i}", f"{b0.vertex}#{i}"),
                            Branch(f"{b1.id}#{i}", f"{b1.vertex}#{(i + shift) % ell}"))
            edges.append(Edge(eid, branches))
            emap[eid] = e.id
    return DecorationFreeCover(g, SemiGraph(verts, edges), vmap, emap, ell)


def monodromy_orbit(ell: int, cls: Mapping[str, int]) -> int:
    """Size of the subgroup of Z/ell generated by the class values."""
    d = ell
    for s in cls.values():
        d = gcd(d, s % ell)
    return ell // d


def h1_rank(sk: "Skeleton", ell: int) -> int:
    """betti + sum of 2 g(x) over vertices + rank Harm(skeleton, Z/ell)."""
    if not is_prime(ell):
        raise DomainError("bad_modulus", f"ell = {ell} must be prime")
    if ell == sk.p:
        raise DomainError("bad_modulus", f"ell must differ from the residue characteristic {sk.p}")
    g = sk.graph
    basis = harm_basis(g, ell)
    genus = sum(2 * sk.vertex(v).genus for v in g.vertices)
    return betti(g) + genus + basis.rank
