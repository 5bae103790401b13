"""Decorated, metrized skeletons and the combinatorics of their triangulations.

Vertices carry the genus of the residual curve, the point type (2 or 3), the
number ``missing_branches`` of residual points not reached by a branch of the
curve (positive exactly on the analytic boundary) and a ``truncated`` flag for
the rim of a finite window cut out of an unbounded skeleton.  Edges carry a
length in ``log_p`` units (``INF`` allowed) and, when open, a cusp type.
"""
from __future__ import annotations

import random
from collections import Counter
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .errors import DomainError, InputError, Report
from .exact import INF, Extended, format_extended, is_infinite, parse_extended, to_fraction
from .semigraph import Branch, Edge, SemiGraph, fresh_ids, validate

CORONAL_FINITE = "coronal_finite"
PUNCTURED_DISC = "punctured_disc"
OTHER = "other"
CUSP_TYPES = (CORONAL_FINITE, PUNCTURED_DISC, OTHER)

REL_COMPACT = "RelCompact"
ALL_CUSPS_CORONAL_FINITE = "AllCuspsCoronalFinite"
FINITE_GRAPH_MIXED_CUSPS = "FiniteGraphMixedCusps"


@dataclass(frozen=True)
class DecoratedVertex:
    genus: int = 0
    point_type: int = 2
    missing_branches: int = 0
    # rim of a finite window: the true neighbourhood is cut off, so the vertex
    # is kept as a frozen (hyperbolic) node instead of being analysed
    truncated: bool = False

    @property
    def on_boundary(self) -> bool:
        return self.missing_branches > 0


@dataclass(frozen=True)
class SkeletonEdge:
    length: Extended = Fraction(1)
    cusp_type: str | None = None


DEFAULT_VERTEX = DecoratedVertex()


class Skeleton:
    def __init__(
        self,
        graph: SemiGraph,
        vertex_decor: Mapping[str, DecoratedVertex] | None = None,
        edge_decor: Mapping[str, SkeletonEdge] | None = None,
        p: int = 2,
        mixed_characteristic: bool = True,
        finite: bool = True,
    ) -> None:
        self.graph = graph
        self._vdecor = dict(vertex_decor or {})
        self._edecor = dict(edge_decor or {})
        self.p = p
        self.mixed_characteristic = mixed_characteristic
        self.finite = finite

    def __repr__(self) -> str:
        return f"Skeleton({self.graph!r}, p={self.p})"

    def vertex(self, v: str) -> DecoratedVertex:
        return self._vdecor.get(v, DEFAULT_VERTEX)

    def edge_decor(self, eid: str) -> SkeletonEdge:
        d = self._edecor.get(eid)
        if d is not None:
            return d
        if self.graph.edge(eid).is_open:
            return SkeletonEdge(INF, OTHER)
        return SkeletonEdge()

    def replace(self, graph=None, vertex_decor=None, edge_decor=None) -> "Skeleton":
        return Skeleton(
            graph if graph is not None else self.graph,
            vertex_decor if vertex_decor is not None else self._vdecor,
            edge_decor if edge_decor is not None else self._edecor,
            self.p, self.mixed_characteristic, self.finite,
        )

    def interior_valence_counts(self) -> Counter:
        """Histogram of generalized valences over the non-truncated vertices."""
        return Counter(generalized_valence(self, v) for v in self.graph.vertices
                       if not self.vertex(v).truncated)

    def to_json(self) -> dict:
        out = self.graph.to_json()
        out.update({"p": self.p, "mixed_characteristic": self.mixed_characteristic, "finite": self.finite})
        vd = {}
        for v in sorted(self.graph.vertices):
            d = self.vertex(v)
            vd[v] = {"genus": d.genus, "point_type": d.point_type,
                     "missing_branches": d.missing_branches, "truncated": d.truncated}
        ed = {}
        for e in sorted(self.graph.edges, key=lambda e: e.id):
            d = self.edge_decor(e.id)
            ed[e.id] = {"length": format_extended(d.length), "cusp_type": d.cusp_type}
        out["decor"] = {"vertices": vd, "edges": ed}
        return out


@dataclass(frozen=True)
class EmptySkeleton:
    """The skeleton of the projective line: no points at all."""

    p: int = 2
    mixed_characteristic: bool = True

    def to_json(self) -> dict:
        return {"empty": True, "p": self.p, "mixed_characteristic": self.mixed_characteristic}


def skeleton_from_json(data: dict) -> Skeleton | EmptySkeleton:
    try:
        p = int(data.get("p", 2))
        mixed = bool(data.get("mixed_characteristic", True))
        if data.get("empty"):
            return EmptySkeleton(p, mixed)
        graph = SemiGraph.from_json(data)
        decor = data.get("decor", {})
        vdecor = {}
        for v, d in decor.get("vertices", {}).items():
            vdecor[str(v)] = DecoratedVertex(
                int(d.get("genus", 0)), int(d.get("point_type", 2)),
                int(d.get("missing_branches", 0)), bool(d.get("truncated", False)),
            )
        edecor = {}
        for eid, d in decor.get("edges", {}).items():
            length = parse_extended(d["length"]) if "length" in d else None
            cusp = d.get("cusp_type")
            if length is None:
                length = INF if graph.edge(str(eid)).is_open else Fraction(1)
            edecor[str(eid)] = SkeletonEdge(length, cusp)
        sk = Skeleton(graph, vdecor, edecor, p, mixed, bool(data.get("finite", True)))
    except (KeyError, TypeError, AttributeError) as exc:
        raise InputError("bad_skeleton", f"malformed Skeleton JSON: {exc}") from None
    report = check_skeleton(sk)
    if not report:
        raise InputError(report.code, report.detail)
    return sk


def check_skeleton(sk: Skeleton) -> Report:
    """Graph validity, connectedness and the decoration invariants."""
    g = sk.graph
    report = validate(g)
    if not report:
        return report
    if not g.vertices:
        return Report.failed("empty_graph", "use EmptySkeleton for the projective line")
    if not g.is_connected():
        return Report.failed("disconnected", "a skeleton must be connected")
    for v in g.vertices:
        d = sk.vertex(v)
        if d.genus < 0 or d.missing_branches < 0:
            return Report.failed("bad_vertex", f"negative decoration at {v}", v)
        if d.point_type not in (2, 3):
            return Report.failed("bad_vertex", f"point type {d.point_type} at {v}", v)
        if d.point_type == 3 and (d.genus != 0 or g.valence(v) > 2):
            return Report.failed("bad_type3", f"type-3 vertex {v} needs genus 0 and at most two branches", v)
    for e in g.edges:
        d = sk.edge_decor(e.id)
        if d.length <= 0:
            return Report.failed("bad_length", f"edge {e.id} must have positive length", e.id)
        if e.is_closed and d.cusp_type is not None:
            return Report.failed("bad_cusp", f"closed edge {e.id} cannot carry a cusp type", e.id)
        if e.is_open:
            if d.cusp_type not in CUSP_TYPES:
                return Report.failed("bad_cusp", f"open edge {e.id} has cusp type {d.cusp_type!r}", e.id)
            if d.cusp_type == PUNCTURED_DISC and not is_infinite(d.length):
                return Report.failed("bad_cusp", f"punctured-disc cusp {e.id} must have infinite length", e.id)
            if d.cusp_type == CORONAL_FINITE and is_infinite(d.length):
                return Report.failed("bad_cusp", f"coronal-finite cusp {e.id} must have finite length", e.id)
    return Report.passed()


# -- nodes --------------------------------------------------------------

def generalized_valence(sk: Skeleton, v: str) -> int:
    """Branches of the skeleton at v plus the residual points no branch reaches."""
    return sk.graph.valence(v) + sk.vertex(v).missing_branches


def is_node(sk: Skeleton, v: str) -> bool:
    d = sk.vertex(v)
    return d.truncated or sk.graph.valence(v) >= 3 or d.on_boundary or d.genus > 0


def is_hyperbolic_node(sk: Skeleton, v: str) -> bool:
    if not is_node(sk, v):
        raise DomainError("not_a_node", f"{v} is not a node")
    d = sk.vertex(v)
    if d.truncated:
        return True
    if d.point_type == 3:
        return False
    return 2 * d.genus + generalized_valence(sk, v) > 2


def node_set(sk: Skeleton | EmptySkeleton) -> frozenset[str]:
    if isinstance(sk, EmptySkeleton):
        return frozenset()
    return frozenset(v for v in sk.graph.vertices if is_node(sk, v))


# -- triangulations -----------------------------------------------------

def _check_triangulation(sk: Skeleton, S: frozenset[str]) -> None:
    unknown = [v for v in S if not sk.graph.has_vertex(v)]
    if unknown:
        raise DomainError("unknown_vertex", f"{sorted(unknown)} are not vertices")
    missing = node_set(sk) - S
    if missing:
        raise DomainError("invalid_triangulation", f"triangulation misses the nodes {sorted(missing)}")


def _interval_component(sk: Skeleton, S: frozenset[str], s: str) -> bool:
    """Is the component of the skeleton minus ``S - {s}`` containing s an open
    interval, or a half-open interval closed at s?"""
    g = sk.graph
    cut = S - {s}
    visited = {s}
    walked: set[str] = set()
    stack = [s]
    while stack:
        x = stack.pop()
        val = g.valence(x)
        if val > 2:
            return False
        if x == s and val == 0:
            return False
        if x != s and val == 1:
            return False  # a closed end other than s
        for e, b in g.incident(x):
            if e.id in walked:
                continue
            walked.add(e.id)
            if e.is_open:
                continue
            if e.is_loop:
                return False
            y = e.opposite(b.id).vertex
            if y in cut:
                continue
            if y in visited:
                return False
            visited.add(y)
            stack.append(y)
    return True


def is_superfluous(sk: Skeleton, S: Iterable[str], s: str) -> bool:
    S = frozenset(S)
    if s not in S:
        raise DomainError("not_in_triangulation", f"{s} is not in the triangulation")
    _check_triangulation(sk, S)
    d = sk.vertex(s)
    if d.on_boundary or d.genus != 0 or d.truncated:
        return False
    return _interval_component(sk, S, s)


def minimize_triangulation(sk: Skeleton, S: Iterable[str] | None = None,
                           rng: random.Random | None = None) -> frozenset[str]:
    """Remove superfluous points until none is left.

    Candidates are scanned in sorted order, or in a random order drawn from
    ``rng`` at every round (used to exercise confluence).
    """
    S = frozenset(sk.graph.vertices if S is None else S)
    _check_triangulation(sk, S)
    while True:
        order = sorted(S)
        if rng is not None:
            rng.shuffle(order)
        for s in order:
            if is_superfluous(sk, S, s):
                S = S - {s}
                sk = _retract_leaf(sk, S, s)
                break
        else:
            return S


def _retract_leaf(sk: Skeleton, S: frozenset[str], s: str) -> Skeleton:
    """Once a genus 0 leaf s leaves the triangulation, the segment from s to
    the next point of S lies in a disc and drops out of the skeleton."""
    g = sk.graph
    inc = list(g.incident(s))
    if len(inc) != 1 or inc[0][0].is_open:
        return sk
    dead_v, dead_e = {s}, set()
    e, b = inc[0]
    while True:
        dead_e.add(e.id)
        y = e.opposite(b.id).vertex
        if y in S:
            break
        dead_v.add(y)
        nxt = [(f, c) for f, c in g.incident(y) if f.id not in dead_e]
        if len(nxt) != 1 or nxt[0][0].is_open:
            return sk
        e, b = nxt[0]
    graph = SemiGraph([v for v in g.vertices if v not in dead_v],
                      [f for f in g.edges if f.id not in dead_e])
    return sk.replace(graph=graph)


@dataclass(frozen=True)
class CompactClass:
    kind: str  # HasMinimal | TateCircle | ProjectiveLine
    nodes: frozenset[str] = field(default_factory=frozenset)

    def to_json(self) -> dict:
        return {"kind": self.kind, "nodes": sorted(self.nodes)}


def classify_compact(sk: Skeleton | EmptySkeleton) -> CompactClass:
    if isinstance(sk, EmptySkeleton):
        return CompactClass("ProjectiveLine")
    g = sk.graph
    if g.open_edges or any(is_infinite(sk.edge_decor(e.id).length) for e in g.edges):
        raise DomainError("not_compact", "a compact curve has no open edges and only finite lengths")
    nodes = node_set(sk)
    if nodes:
        return CompactClass("HasMinimal", nodes)
    if g.is_connected() and len(g.closed_edges) == len(g.vertices) and all(g.valence(v) == 2 for v in g.vertices):
        return CompactClass("TateCircle")
    raise DomainError("inconsistent_skeleton", "no nodes, yet the skeleton is not a circle")


@dataclass(frozen=True)
class CurveClass:
    hyperbolic: bool
    rel_compact_edges: bool
    certificate: str | None

    def to_json(self) -> dict:
        return {"hyperbolic": self.hyperbolic, "rel_compact_edges": self.rel_compact_edges,
                "certificate": self.certificate}


def classify_curve(sk: Skeleton | EmptySkeleton) -> CurveClass:
    """Hyperbolicity plus the first sufficient anabelianity certificate that applies.

    ``certificate=None`` only means that no certificate applies.
    """
    if isinstance(sk, EmptySkeleton):
        return CurveClass(False, True, None)
    if not sk.graph.is_connected():
        raise DomainError("disconnected", "skeleton must be connected")
    nodes = node_set(sk)
    hyperbolic = bool(nodes) and all(is_hyperbolic_node(sk, v) for v in nodes)
    cusps = [sk.edge_decor(e.id).cusp_type for e in sk.graph.open_edges]
    rel_compact = not cusps
    cert = None
    if hyperbolic:
        if rel_compact:
            cert = REL_COMPACT
        elif sk.mixed_characteristic and all(c == CORONAL_FINITE for c in cusps):
            cert = ALL_CUSPS_CORONAL_FINITE
        elif (sk.mixed_characteristic and sk.finite
              and all(c in (CORONAL_FINITE, PUNCTURED_DISC) for c in cusps)):
            cert = FINITE_GRAPH_MIXED_CUSPS
    return CurveClass(hyperbolic, rel_compact, cert)


# -- edits --------------------------------------------------------------

def subdivide(sk: Skeleton, eid: str, offsets: Sequence[Fraction], names: Sequence[str] | None = None
              ) -> tuple[Skeleton, list[str]]:
    """Insert genus-0 type-2 vertices on edge ``eid`` at the given offsets.

    Offsets are measured from the edge's first branch and must lie strictly
    inside the edge.  Returns the new skeleton and the new vertex ids.
    """
    g = sk.graph
    e = g.edge(eid)
    dec = sk.edge_decor(eid)
    offs = sorted(set(to_fraction(o) for o in offsets))
    for o in offs:
        if not (0 < o < dec.length):
            raise DomainError("bad_offset", f"offset {o} outside (0, {format_extended(dec.length)}) on {eid}")
    taken = set(g.vertices) | {x.id for x in g.edges} | {b.id for x in g.edges for b in x.branches}
    if names is None:
        names = list(_take(fresh_ids(f"{eid}~", taken), len(offs)))
    new_vs = list(names)
    ids = fresh_ids(f"{eid}:", taken | set(new_vs))
    pieces: list[Edge] = []
    edecor = {k: v for k, v in sk._edecor.items() if k != eid}
    chain = [e.branches[0].vertex] + new_vs
    cuts = [Fraction(0)] + offs
    for i in range(len(new_vs)):
        pid = next(ids)
        pieces.append(Edge(pid, (Branch(f"{pid}.0", chain[i]), Branch(f"{pid}.1", chain[i + 1]))))
        edecor[pid] = SkeletonEdge(cuts[i + 1] - cuts[i])
    pid = next(ids)
    rest = dec.length - cuts[-1]
    if e.is_open:
        pieces.append(Edge(pid, (Branch(f"{pid}.0", chain[-1]),)))
        edecor[pid] = SkeletonEdge(rest, dec.cusp_type)
    else:
        pieces.append(Edge(pid, (Branch(f"{pid}.0", chain[-1]), Branch(f"{pid}.1", e.branches[1].vertex))))
        edecor[pid] = SkeletonEdge(rest)
    graph = SemiGraph(list(g.vertices) + new_vs, [x for x in g.edges if x.id != eid] + pieces)
    return sk.replace(graph=graph, edge_decor=edecor), new_vs


def _take(it, n):
    return [next(it) for _ in range(n)]


@dataclass(frozen=True)
class Marking:
    """A rigid point removed from the curve, located by where it retracts.

    Exactly one of: ``vertex``; ``edge`` with ``offset``; ``cluster`` (a new
    branch vertex shared by several markings lying in one disc).
    """

    vertex: str | None = None
    edge: str | None = None
    offset: Fraction | None = None
    cluster: str | None = None


@dataclass(frozen=True)
class Cluster:
    """New branch vertex, joined by an edge of ``length`` to its anchor
    (a vertex, or a point of an edge).  No anchor only on the empty skeleton."""

    id: str
    anchor_vertex: str | None = None
    anchor_edge: str | None = None
    anchor_offset: Fraction | None = None
    length: Fraction = Fraction(1)


def mark_points(sk: Skeleton | EmptySkeleton, markings: Sequence[Marking],
                clusters: Sequence[Cluster] = ()) -> Skeleton:
    """Skeleton of the curve with the marked rigid points removed.

    Each marking adds an open edge of infinite length (a punctured-disc cusp)
    at the point it retracts to.
    """
    for m in markings:
        if sum(x is not None for x in (m.vertex, m.edge, m.cluster)) != 1:
            raise DomainError("bad_marking", f"marking {m} must name exactly one location")
        if m.edge is not None and m.offset is None:
            raise DomainError("bad_marking", "an edge marking needs an offset")
    cl = {c.id: c for c in clusters}
    for m in markings:
        if m.cluster is not None and m.cluster not in cl:
            raise DomainError("unknown_cluster", f"cluster {m.cluster} is not declared")

    if isinstance(sk, EmptySkeleton):
        if not markings:
            raise DomainError("bad_marking", "marking the projective line needs at least one point")
        used = {m.cluster for m in markings}
        if None in used or len(used) != 1 or cl[next(iter(used))].anchor_vertex or cl[next(iter(used))].anchor_edge:
            raise DomainError("bad_marking", "on the projective line all markings share one unanchored cluster")
        centre = next(iter(used))
        base = Skeleton(SemiGraph([centre], []), {}, {}, sk.p, sk.mixed_characteristic, True)
        return _attach_cusps(base, [centre] * len(markings))

    # split edges at edge markings and edge-anchored clusters (one pass per edge)
    cuts: dict[str, set[Fraction]] = {}
    for m in markings:
        if m.edge is not None:
            cuts.setdefault(m.edge, set()).add(to_fraction(m.offset))
    for c in clusters:
        if c.anchor_edge is not None:
            cuts.setdefault(c.anchor_edge, set()).add(to_fraction(c.anchor_offset))
    split_at: dict[tuple[str, Fraction], str] = {}
    cur = sk
    for eid in sorted(cuts):
        if not cur.graph._edge_index.get(eid):
            raise DomainError("unknown_edge", f"no edge {eid}")
        offs = sorted(cuts[eid])
        cur, names = subdivide(cur, eid, offs)
        split_at.update({(eid, o): n for o, n in zip(offs, names)})

    def where(vertex, e, off):
        if vertex is not None:
            if not cur.graph.has_vertex(vertex):
                raise DomainError("unknown_vertex", f"no vertex {vertex}")
            return vertex
        return split_at[e, to_fraction(off)]

    # new branch vertices for clusters
    vertices = list(cur.graph.vertices)
    edges = list(cur.graph.edges)
    edecor = dict(cur._edecor)
    taken = set(vertices) | {e.id for e in edges}
    ids = fresh_ids("join", taken)
    for c in clusters:
        if c.anchor_vertex is None and c.anchor_edge is None:
            raise DomainError("bad_marking", f"cluster {c.id} needs an anchor on a nonempty skeleton")
        if c.id in taken:
            raise DomainError("bad_marking", f"cluster id {c.id} clashes with an existing id")
        anchor = where(c.anchor_vertex, c.anchor_edge, c.anchor_offset)
        jid = next(ids)
        vertices.append(c.id)
        edges.append(Edge(jid, (Branch(f"{jid}.0", anchor), Branch(f"{jid}.1", c.id))))
        edecor[jid] = SkeletonEdge(to_fraction(c.length))
    cur = cur.replace(graph=SemiGraph(vertices, edges), edge_decor=edecor)
    targets = [m.cluster if m.cluster is not None else where(m.vertex, m.edge, m.offset) for m in markings]
    return _attach_cusps(cur, targets)


def _attach_cusps(sk: Skeleton, targets: Sequence[str]) -> Skeleton:
    g = sk.graph
    taken = set(g.vertices) | {e.id for e in g.edges}
    ids = fresh_ids("mark", taken)
    edges = list(g.edges)
    edecor = dict(sk._edecor)
    for t in targets:
        mid = next(ids)
        edges.append(Edge(mid, (Branch(f"{mid}.0", t),)))
        edecor[mid] = SkeletonEdge(INF, PUNCTURED_DISC)
    return sk.replace(graph=SemiGraph(g.vertices, edges), edge_decor=edecor)


def with_vertex(sk: Skeleton, v: str, **changes) -> Skeleton:
    """Copy of ``sk`` with the decoration of ``v`` updated."""
    vdecor = dict(sk._vdecor)
    vdecor[v] = replace(sk.vertex(v), **changes)
    return sk.replace(vertex_decor=vdecor)
