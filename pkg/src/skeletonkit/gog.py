"""Graphs of finite groups: validation, symbolic screening, finite covers
from permutation actions, and tower bookkeeping.

Every closed edge e has an alpha branch (its first branch) and an omega
branch (its second).  A closed edge outside the spanning tree contributes a
letter t_e subject to ``t_e alpha(a) t_e^-1 = omega(a)``; tree edges impose
``alpha(a) = omega(a)``.  Open edges carry an edge group but no letter.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .errors import DomainError, InputError, Report
from .groups import (FiniteGroup, Perm, check_hom, compose, extend_to_hom, group_from_json,
                     is_injective, is_permutation, perm_inverse, subgroup_as_group)
from .semigraph import Branch, Edge, SemiGraph, betti, spanning_tree, truncate, validate


class GraphOfGroups:
    def __init__(
        self,
        graph: SemiGraph,
        vertex_groups: Mapping[str, FiniteGroup],
        edge_groups: Mapping[str, FiniteGroup],
        embeddings: Mapping[str, Sequence[int]],
        tree: frozenset[str] | None = None,
        base: str | None = None,
        check: bool = True,
    ) -> None:
        self.graph = graph
        self.vertex_groups = dict(vertex_groups)
        self.edge_groups = dict(edge_groups)
        self.embeddings = {b: tuple(v) for b, v in embeddings.items()}
        self.tree = frozenset(spanning_tree(graph) if tree is None else tree)
        self.base = base if base is not None else (min(graph.vertices) if graph.vertices else None)
        if check:
            report = check_gog(self)
            if not report:
                raise DomainError(report.code, report.detail)

    def __repr__(self) -> str:
        return f"GraphOfGroups({self.graph!r})"

    def letters(self) -> list[str]:
        """Closed edges outside the spanning tree, sorted."""
        return sorted(e.id for e in self.graph.closed_edges if e.id not in self.tree)

    def branch_group(self, bid: str) -> tuple[FiniteGroup, FiniteGroup, tuple[int, ...]]:
        """(edge group, vertex group, embedding) of a branch."""
        e, b = self.graph.branch(bid)
        return self.edge_groups[e.id], self.vertex_groups[b.vertex], self.embeddings[bid]

    def vertex_labels(self) -> dict[str, int]:
        return {v: self.vertex_groups[v].order for v in self.graph.vertices}

    def edge_labels(self, closed_only: bool = True) -> dict[str, int]:
        edges = self.graph.closed_edges if closed_only else self.graph.edges
        return {e.id: self.edge_groups[e.id].order for e in edges}

    def to_json(self) -> dict:
        return {
            "graph": self.graph.to_json(),
            "vertex_groups": {v: self.vertex_groups[v].to_json() for v in sorted(self.vertex_groups)},
            "edge_groups": {e: self.edge_groups[e].to_json() for e in sorted(self.edge_groups)},
            "embeddings": {b: list(self.embeddings[b]) for b in sorted(self.embeddings)},
            "tree": sorted(self.tree),
            "base": self.base,
        }

    @classmethod
    def from_json(cls, data: dict) -> "GraphOfGroups":
        try:
            graph = SemiGraph.from_json(data["graph"])
            vg = {str(v): group_from_json(g) for v, g in data["vertex_groups"].items()}
            eg = {str(e): group_from_json(g) for e, g in data["edge_groups"].items()}
            emb = {str(b): [int(x) for x in imgs] for b, imgs in data["embeddings"].items()}
            tree = frozenset(str(t) for t in data["tree"]) if "tree" in data else None
            base = data.get("base")
        except (KeyError, TypeError, AttributeError, ValueError) as exc:
            raise InputError("bad_gog", f"malformed GraphOfGroups JSON: {exc}") from None
        return cls(graph, vg, eg, emb, tree, base)


def check_gog(gog: GraphOfGroups) -> Report:
    g = gog.graph
    report = validate(g)
    if not report:
        return report
    if not g.vertices:
        return Report.failed("empty_graph", "a graph of groups needs a vertex")
    if not g.is_connected():
        return Report.failed("disconnected", "underlying graph must be connected")
    if gog.base not in gog.vertex_groups or not g.has_vertex(gog.base):
        return Report.failed("bad_base", f"base vertex {gog.base} unknown")
    for v in g.vertices:
        if v not in gog.vertex_groups:
            return Report.failed("missing_group", f"no group at vertex {v}", v)
    for e in g.edges:
        if e.id not in gog.edge_groups:
            return Report.failed("missing_group", f"no group on edge {e.id}", e.id)
        for b in e.branches:
            if b.id not in gog.embeddings:
                return Report.failed("missing_embedding", f"no embedding for branch {b.id}", b.id)
            src, dst, imgs = gog.edge_groups[e.id], gog.vertex_groups[b.vertex], gog.embeddings[b.id]
            r = check_hom(src, dst, imgs)
            if not r:
                return Report.failed(r.code, f"branch {b.id}: {r.detail}", b.id)
            if not is_injective(imgs):
                return Report.failed("not_injective", f"embedding of branch {b.id} is not injective", b.id)
    closed = {e.id: e for e in g.closed_edges}
    if any(t not in closed for t in gog.tree):
        return Report.failed("bad_tree", "spanning tree must consist of closed edges")
    tg = SemiGraph(g.vertices, [closed[t] for t in gog.tree])
    if len(gog.tree) != len(g.vertices) - 1 or not tg.is_connected() or any(closed[t].is_loop for t in gog.tree):
        return Report.failed("bad_tree", "tree edges do not form a spanning tree")
    return Report.passed()


def trivial_gog(graph: SemiGraph) -> GraphOfGroups:
    """Every vertex and edge group trivial."""
    from .groups import trivial
    one = trivial()
    return GraphOfGroups(graph, {v: one for v in graph.vertices}, {e.id: one for e in graph.edges},
                         {b.id: (0,) for e in graph.edges for b in e.branches})


# -- symbolic screen ----------------------------------------------------

@dataclass(frozen=True)
class ScreenFailure:
    vertex: str
    mechanism: str

    def to_json(self) -> dict:
        return {"vertex": self.vertex, "mechanism": self.mechanism}


@dataclass(frozen=True)
class ScreenResult:
    passed: bool
    failures: tuple[ScreenFailure, ...] = ()

    def to_json(self) -> dict:
        return {"pass": self.passed, "failures": [f.to_json() for f in self.failures]}


def screen_mochizuki(graph: SemiGraph, data: Mapping[str, tuple[int, int]]) -> ScreenResult:
    """Vertex data is (g, n) with n the generalized valence.  A vertex passes
    when 2g + n > 2; otherwise the failure names the hypothesis that breaks."""
    if not graph.is_connected():
        raise DomainError("disconnected", "graph must be connected")
    failures = []
    for v in sorted(graph.vertices):
        if v not in data:
            raise InputError("missing_vertex_data", f"no (g, n) for vertex {v}")
        g, n = data[v]
        val = graph.valence(v)
        if g < 0 or n < val:
            raise InputError("bad_vertex_data", f"vertex {v}: need g >= 0 and n >= valence {val}")
        if 2 * g + n > 2:
            continue
        if g == 1 or (g == 0 and n == 0):
            mech = "not_verticially_slim"  # abelian or trivial vertex group
        elif n - val > 0 or val == 2:
            mech = "not_totally_detached"
        else:
            mech = "not_injective_type"
        failures.append(ScreenFailure(v, mech))
    return ScreenResult(not failures, tuple(failures))


# -- permutation actions -------------------------------------------------

@dataclass
class PermutationAction:
    """The fibre is 0..size-1.  ``vertex[v]`` gives the permutation of some
    elements of the vertex group (extended multiplicatively); ``letters``
    gives t_e for letters, identity when absent."""

    size: int
    vertex: dict[str, dict[int, Perm]] = field(default_factory=dict)
    letters: dict[str, Perm] = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "size": self.size,
            "vertex": {v: {str(a): list(p) for a, p in sorted(m.items())} for v, m in sorted(self.vertex.items())},
            "letters": {e: list(p) for e, p in sorted(self.letters.items())},
        }

    @classmethod
    def from_json(cls, data: dict) -> "PermutationAction":
        try:
            return cls(
                int(data["size"]),
                {str(v): {int(a): tuple(int(x) for x in p) for a, p in m.items()}
                 for v, m in data.get("vertex", {}).items()},
                {str(e): tuple(int(x) for x in p) for e, p in data.get("letters", {}).items()},
            )
        except (KeyError, TypeError, AttributeError, ValueError) as exc:
            raise InputError("bad_action", f"malformed PermutationAction JSON: {exc}") from None


@dataclass(frozen=True)
class ResolvedAction:
    size: int
    vertex: dict[str, list[Perm]]  # full list indexed by group element
    letters: dict[str, Perm]  # every closed edge; identity on tree edges

    def branch_perm(self, gog: GraphOfGroups, bid: str, a: int) -> Perm:
        e, b = gog.graph.branch(bid)
        return self.vertex[b.vertex][gog.embeddings[bid][a]]


def _resolve(gog: GraphOfGroups, act: PermutationAction) -> ResolvedAction:
    n = act.size
    if n < 1:
        raise DomainError("size_mismatch", "fibre must be nonempty")
    ident = tuple(range(n))
    vperm = {}
    for v in gog.graph.vertices:
        given = act.vertex.get(v, {})
        grp = gog.vertex_groups[v]
        for a, p in given.items():
            if not 0 <= a < grp.order:
                raise DomainError("size_mismatch", f"vertex {v} has no element {a}")
            if len(p) != n:
                raise DomainError("size_mismatch", f"permutation of {a} at {v} has length {len(p)}, not {n}")
            if not is_permutation(p, n):
                raise DomainError("not_permutation", f"image of {a} at {v} is not a permutation")
        given = dict(given)
        if grp.order > 1:
            missing = set(grp.elements) - grp.generated(given)
            if missing:
                # unspecified generators act trivially
                for a in grp.generating_set():
                    given.setdefault(a, ident)
        try:
            vperm[v] = extend_to_hom(grp, given, compose, ident)
        except DomainError as exc:
            raise DomainError("not_homomorphism", f"vertex {v}: {exc.message}") from None
    letters = {}
    for e in gog.graph.closed_edges:
        p = act.letters.get(e.id, ident)
        if len(p) != n:
            raise DomainError("size_mismatch", f"letter {e.id} has length {len(p)}, not {n}")
        if not is_permutation(p, n):
            raise DomainError("not_permutation", f"letter {e.id} is not a permutation")
        if e.id in gog.tree and p != ident:
            raise DomainError("tree_relation", f"tree edge {e.id} must act trivially")
        letters[e.id] = tuple(p)
    unknown = set(act.letters) - {e.id for e in gog.graph.closed_edges}
    if unknown:
        raise DomainError("size_mismatch", f"letters for unknown edges {sorted(unknown)}")
    return ResolvedAction(n, vperm, letters)


def resolve_action(gog: GraphOfGroups, act: PermutationAction) -> ResolvedAction:
    """Complete the action to every element and check all relations."""
    res = _resolve(gog, act)
    for e in gog.graph.closed_edges:
        alpha, omega = e.branches
        t = res.letters[e.id]
        tinv = perm_inverse(t)
        for a in gog.edge_groups[e.id].elements:
            lhs = compose(t, compose(res.branch_perm(gog, alpha.id, a), tinv))
            rhs = res.branch_perm(gog, omega.id, a)
            if lhs != rhs:
                code = "tree_relation" if e.id in gog.tree else "britton_relation"
                raise DomainError(code, f"relation for edge {e.id} fails at edge-group element {a}")
    return res


def validate_action(gog: GraphOfGroups, act: PermutationAction) -> Report:
    try:
        resolve_action(gog, act)
    except DomainError as exc:
        return Report.failed(exc.code, exc.message)
    return Report.passed()


# -- covers --------------------------------------------------------------

def _orbits(n: int, perms: Sequence[Perm]) -> list[list[int]]:
    seen = [False] * n
    out = []
    for x in range(n):
        if seen[x]:
            continue
        orb = [x]
        seen[x] = True
        i = 0
        while i < len(orb):
            y = orb[i]
            for p in perms:
                z = p[y]
                if not seen[z]:
                    seen[z] = True
                    orb.append(z)
            i += 1
        out.append(sorted(orb))
    return out


@dataclass(frozen=True)
class ActionCover:
    cover: GraphOfGroups
    vertex_map: dict[str, str]
    edge_map: dict[str, str]
    degree: int

    def to_json(self) -> dict:
        return {
            "cover": self.cover.to_json(),
            "vertex_map": dict(sorted(self.vertex_map.items())),
            "edge_map": dict(sorted(self.edge_map.items())),
            "degree": self.degree,
        }


def cover_from_action(gog: GraphOfGroups, act: PermutationAction) -> ActionCover:
    """The finite cover of ``gog`` attached to a (valid) action.

    Vertices over v are the G_v-orbits of the fibre and carry the stabilizer
    of the smallest point of the orbit; edges over e are the alpha(G_e)-orbits.
    """
    res = resolve_action(gog, act)
    n = res.size
    g = gog.graph

    vert_of: dict[tuple[str, int], str] = {}  # (v, point) -> cover vertex
    rep_of: dict[str, int] = {}
    vertex_map, vgroups, vembed = {}, {}, {}
    for v in sorted(g.vertices):
        grp = gog.vertex_groups[v]
        for k, orb in enumerate(_orbits(n, res.vertex[v])):
            cid = f"{v}#{k}"
            x0 = orb[0]
            for y in orb:
                vert_of[v, y] = cid
            rep_of[cid] = x0
            stab = [a for a in grp.elements if res.vertex[v][a][x0] == x0]
            vgroups[cid], vembed[cid] = subgroup_as_group(grp, stab)
            vertex_map[cid] = v

    def transporter(v: str, x: int) -> int:
        """Some h in G_v with h . rep = x."""
        x0 = rep_of[vert_of[v, x]]
        for h in gog.vertex_groups[v].elements:
            if res.vertex[v][h][x0] == x:
                return h
        raise AssertionError("point outside its orbit")

    edges, egroups, embeddings, edge_map = [], {}, {}, {}
    for e in sorted(g.edges, key=lambda e: e.id):
        egrp = gog.edge_groups[e.id]
        first = e.branches[0]
        orbs = _orbits(n, [res.branch_perm(gog, first.id, a) for a in egrp.elements])
        for k, orb in enumerate(orbs):
            cid = f"{e.id}#{k}"
            x = orb[0]
            stab = [a for a in egrp.elements if res.branch_perm(gog, first.id, a)[x] == x]
            egroups[cid], e_emb = subgroup_as_group(egrp, stab)
            branches = []
            points = [x] if e.is_open else [x, res.letters[e.id][x]]
            for b, y in zip(e.branches, points):
                cv = vert_of[b.vertex, y]
                vgrp = gog.vertex_groups[b.vertex]
                h = transporter(b.vertex, y)
                back = {orig: i for i, orig in enumerate(vembed[cv])}
                imgs = [back[vgrp.conj(h, gog.embeddings[b.id][a])] for a in e_emb]
                bid = f"{b.id}#{k}"
                branches.append(Branch(bid, cv))
                embeddings[bid] = imgs
            edges.append(Edge(cid, tuple(branches)))
            edge_map[cid] = e.id
    total = SemiGraph(sorted(vgroups), edges)
    cover = GraphOfGroups(total, vgroups, egroups, embeddings, tree=spanning_tree(truncate(total))
                          if total.is_connected() else frozenset(), base=None, check=total.is_connected())
    return ActionCover(cover, vertex_map, edge_map, n)


def is_transitive(gog: GraphOfGroups, act: PermutationAction) -> bool:
    res = resolve_action(gog, act)
    perms = [p for v in res.vertex.values() for p in v] + list(res.letters.values())
    return len(_orbits(res.size, perms)) == 1


def _equivariant_map(gens_hi: Sequence[Perm], gens_lo: Sequence[Perm], n_hi: int, n_lo: int) -> list[int] | None:
    """A map F_hi -> F_lo commuting with the generators, if one exists."""
    for start in range(n_lo):
        phi = {0: start}
        stack = [0]
        ok = True
        while stack and ok:
            x = stack.pop()
            for ph, pl in zip(gens_hi, gens_lo):
                y, want = ph[x], pl[phi[x]]
                if y in phi:
                    if phi[y] != want:
                        ok = False
                        break
                else:
                    phi[y] = want
                    stack.append(y)
        if ok and len(phi) == n_hi:
            return [phi[x] for x in range(n_hi)]
    return None


def _generator_perms(gog: GraphOfGroups, res: ResolvedAction) -> list[Perm]:
    out = []
    for v in sorted(gog.graph.vertices):
        out.extend(res.vertex[v])
    for e in sorted(res.letters):
        out.append(res.letters[e])
    return out


@dataclass(frozen=True)
class TowerLevel:
    degree: int
    betti: int
    vertices: int
    closed_edges: int
    nested: bool | None
    cover: ActionCover

    def to_json(self, with_cover: bool = False) -> dict:
        out = {"degree": self.degree, "betti": self.betti, "rank_T": self.betti,
               "vertices": self.vertices, "closed_edges": self.closed_edges,
               "nested_in_previous": self.nested}
        if with_cover:
            out["cover"] = self.cover.to_json()
        return out


def tempered_tower(gog: GraphOfGroups, actions: Sequence[PermutationAction]) -> list[TowerLevel]:
    """Per level: the cover, the rank of its free part T_i (the Betti number
    of its graph) and its degree; ``nested`` says whether the level maps
    equivariantly onto the previous one."""
    levels = []
    prev = None
    for i, act in enumerate(actions):
        res = resolve_action(gog, act)
        if not is_transitive(gog, act):
            raise DomainError("not_transitive", f"action at level {i} is not transitive")
        cov = cover_from_action(gog, act)
        gens = _generator_perms(gog, res)
        nested = None
        if prev is not None:
            nested = _equivariant_map(gens, prev[1], res.size, prev[0]) is not None
        levels.append(TowerLevel(res.size, betti(cov.cover.graph), len(cov.cover.graph.vertices),
                                 len(cov.cover.graph.closed_edges), nested, cov))
        prev = (res.size, gens)
    return levels


# -- labelled graph isomorphism -----------------------------------------

def labeled_isomorphic(g1: SemiGraph, vl1: Mapping[str, int], el1: Mapping[str, int],
                       g2: SemiGraph, vl2: Mapping[str, int], el2: Mapping[str, int]) -> bool:
    """Isomorphism of closed-edge multigraphs carrying vertex and edge labels.

    Backtracking over label-respecting vertex bijections; meant for the small
    quotients produced here.
    """
    g1, g2 = truncate(g1), truncate(g2)
    if len(g1.vertices) != len(g2.vertices) or len(g1.edges) != len(g2.edges):
        return False

    def bundles(g, el):
        out: dict[frozenset, list[int]] = {}
        for e in g.edges:
            key = frozenset((e.branches[0].vertex, e.branches[1].vertex))
            out.setdefault(key, []).append(el[e.id])
        return {k: sorted(v) for k, v in out.items()}

    b1, b2 = bundles(g1, el1), bundles(g2, el2)

    def signature(g, vl, b, v):
        inc = sorted((vl[next(iter(k - {v}), v)] if len(k) > 1 else vl[v], tuple(lab))
                     for k, lab in b.items() if v in k)
        return (vl[v], g.valence(v), tuple(inc))

    sig1 = {v: signature(g1, vl1, b1, v) for v in g1.vertices}
    sig2 = {v: signature(g2, vl2, b2, v) for v in g2.vertices}
    if sorted(sig1.values()) != sorted(sig2.values()):
        return False
    order = sorted(g1.vertices)
    mapping: dict[str, str] = {}
    used: set[str] = set()

    def consistent(v: str, w: str) -> bool:
        for u, x in mapping.items():
            if b1.get(frozenset((u, v)), []) != b2.get(frozenset((x, w)), []):
                return False
        return b1.get(frozenset((v,)), []) == b2.get(frozenset((w,)), [])

    def search(i: int) -> bool:
        if i == len(order):
            return True
        v = order[i]
        for w in sorted(g2.vertices):
            if w in used or sig1[v] != sig2[w] or not consistent(v, w):
                continue
            mapping[v] = w
            used.add(w)
            if search(i + 1):
                return True
            del mapping[v]
            used.discard(w)
        return False

    return search(0)
