"""Semi-graphs: graphs whose edges carry one or two branches.

An edge with two branches is closed (a loop when both branches land on the
same vertex); an edge with a single branch is open, a half-edge running off
to infinity.  Everything is immutable; derived indices are cached.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator

from .errors import InputError, Report


@dataclass(frozen=True)
class Branch:
    id: str
    vertex: str


@dataclass(frozen=True)
class Edge:
    id: str
    branches: tuple[Branch, ...]

    @property
    def is_open(self) -> bool:
        return len(self.branches) == 1

    @property
    def is_closed(self) -> bool:
        return len(self.branches) == 2

    @property
    def is_loop(self) -> bool:
        return self.is_closed and self.branches[0].vertex == self.branches[1].vertex

    @property
    def tail(self) -> str:
        return self.branches[0].vertex

    @property
    def head(self) -> str:
        return self.branches[-1].vertex

    def opposite(self, branch_id: str) -> Branch:
        b0, b1 = self.branches
        return b1 if branch_id == b0.id else b0


def edge(eid: str, *vertices: str) -> Edge:
    """Shorthand: ``edge("e", "u", "v")`` closed, ``edge("e", "u")`` open."""
    return Edge(str(eid), tuple(Branch(f"{eid}.{i}", str(v)) for i, v in enumerate(vertices)))


class SemiGraph:
    def __init__(self, vertices: Iterable[str], edges: Iterable[Edge]) -> None:
        self._vertices = tuple(vertices)
        self._edges = tuple(edges)

    @property
    def vertices(self) -> tuple[str, ...]:
        return self._vertices

    @property
    def edges(self) -> tuple[Edge, ...]:
        return self._edges

    def __repr__(self) -> str:
        return f"SemiGraph(V={len(self.vertices)}, E={len(self.closed_edges)}, O={len(self.open_edges)})"

    def __eq__(self, other) -> bool:
        if not isinstance(other, SemiGraph):
            return NotImplemented
        return (sorted(self.vertices) == sorted(other.vertices)
                and sorted(self.edges, key=lambda e: e.id) == sorted(other.edges, key=lambda e: e.id))

    __hash__ = None

    @cached_property
    def _edge_index(self) -> dict[str, Edge]:
        return {e.id: e for e in self.edges}

    @cached_property
    def _branch_index(self) -> dict[str, tuple[Edge, Branch]]:
        return {b.id: (e, b) for e in self.edges for b in e.branches}

    @cached_property
    def _incidence(self) -> dict[str, list[tuple[Edge, Branch]]]:
        inc: dict[str, list] = {v: [] for v in self.vertices}
        for e in self.edges:
            for b in e.branches:
                inc.setdefault(b.vertex, []).append((e, b))
        return inc

    def edge(self, eid: str) -> Edge:
        return self._edge_index[eid]

    def branch(self, bid: str) -> tuple[Edge, Branch]:
        return self._branch_index[bid]

    def has_vertex(self, v: str) -> bool:
        return v in self._incidence

    def incident(self, v: str) -> list[tuple[Edge, Branch]]:
        """(edge, branch) pairs for every branch attached at ``v``; loops appear twice."""
        return self._incidence[v]

    def valence(self, v: str) -> int:
        return len(self._incidence[v])

    @cached_property
    def open_edges(self) -> tuple[Edge, ...]:
        return tuple(e for e in self.edges if e.is_open)

    @cached_property
    def closed_edges(self) -> tuple[Edge, ...]:
        return tuple(e for e in self.edges if e.is_closed)

    def neighbours(self, v: str) -> Iterator[tuple[Edge, str]]:
        for e, b in self.incident(v):
            if e.is_closed:
                yield e, e.opposite(b.id).vertex

    def components(self) -> list[list[str]]:
        seen: set[str] = set()
        comps = []
        for v in sorted(self.vertices):
            if v in seen:
                continue
            comp, queue = [], deque([v])
            seen.add(v)
            while queue:
                x = queue.popleft()
                comp.append(x)
                for _, y in self.neighbours(x):
                    if y not in seen:
                        seen.add(y)
                        queue.append(y)
            comps.append(comp)
        return comps

    def is_connected(self) -> bool:
        return len(self.components()) <= 1

    # -- serialization -------------------------------------------------
    def to_json(self) -> dict:
        return {
            "vertices": sorted(self.vertices),
            "edges": [
                {"id": e.id, "branches": [{"id": b.id, "vertex": b.vertex} for b in e.branches]}
                for e in sorted(self.edges, key=lambda e: e.id)
            ],
        }

    @classmethod
    def from_json(cls, data: dict) -> "SemiGraph":
        try:
            vertices = [str(v) for v in data["vertices"]]
            edges = [
                Edge(str(e["id"]), tuple(Branch(str(b["id"]), str(b["vertex"])) for b in e["branches"]))
                for e in data["edges"]
            ]
        except (KeyError, TypeError) as exc:
            raise InputError("bad_semigraph", f"malformed SemiGraph JSON: {exc}") from None
        g = cls(vertices, edges)
        report = validate(g)
        if not report:
            raise InputError(report.code, report.detail)
        return g


def validate(g: SemiGraph) -> Report:
    """Check id uniqueness, branch counts, dangling branches and branch disjointness."""
    seen_v: set[str] = set()
    for v in g.vertices:
        if v in seen_v:
            return Report.failed("duplicate_vertex", f"vertex {v} listed twice", v)
        seen_v.add(v)
    seen_e: set[str] = set()
    owner: dict[str, str] = {}
    for e in g.edges:
        if e.id in seen_e:
            return Report.failed("duplicate_edge", f"edge {e.id} listed twice", e.id)
        seen_e.add(e.id)
        if len(e.branches) not in (1, 2):
            return Report.failed("bad_branch_count", f"edge {e.id} has {len(e.branches)} branches", e.id)
        for b in e.branches:
            if b.id in owner:
                return Report.failed(
                    "shared_branch", f"branch {b.id} belongs to both {owner[b.id]} and {e.id}",
                    b.id, owner[b.id], e.id,
                )
            owner[b.id] = e.id
            if b.vertex not in seen_v:
                return Report.failed("dangling_branch", f"branch {b.id} attaches to unknown vertex {b.vertex}",
                                     b.id, b.vertex)
        if e.is_closed and e.branches[0].id == e.branches[1].id:
            return Report.failed("shared_branch", f"edge {e.id} repeats a branch id", e.id)
    return Report.passed()


def truncate(g: SemiGraph) -> SemiGraph:
    """Drop every open edge; vertices are kept."""
    if not g.open_edges:
        return g
    return SemiGraph(g.vertices, g.closed_edges)


def betti(g: SemiGraph) -> int:
    """First Betti number of the truncated graph."""
    return len(g.closed_edges) - len(g.vertices) + len(g.components())


def spanning_tree(g: SemiGraph) -> frozenset[str]:
    """Deterministic BFS spanning forest (edge ids), roots at the smallest vertex of each component."""
    tree: set[str] = set()
    seen: set[str] = set()
    for root in sorted(g.vertices):
        if root in seen:
            continue
        seen.add(root)
        queue = deque([root])
        while queue:
            x = queue.popleft()
            for e, y in sorted(g.neighbours(x), key=lambda ey: ey[0].id):
                if y not in seen:
                    seen.add(y)
                    tree.add(e.id)
                    queue.append(y)
    return frozenset(tree)


def cotree_edges(g: SemiGraph) -> list[str]:
    """Closed edges outside :func:`spanning_tree`, sorted; these carry a cover's class."""
    tree = spanning_tree(g)
    return sorted(e.id for e in g.closed_edges if e.id not in tree)


def fresh_ids(prefix: str, taken: Iterable[str]) -> Iterator[str]:
    taken = set(taken)
    i = 0
    while True:
        cand = f"{prefix}{i}"
        if cand not in taken:
            taken.add(cand)
            yield cand
        i += 1

