"""Normal forms in the fundamental group of a graph of finite groups, balls
in its Bass–Serre tree, and recovery of the graph of groups from a ball.

Words live in the path groupoid.  Leaving a vertex through branch b costs a
letter tau_b with ``b(a) tau_b = tau_b opp(b)(a)`` and ``tau_opp(b) = tau_b^-1``;
for a non-tree edge, tau of the omega branch is t_e.  A reduced word is
``r_1 tau_b1 r_2 ... r_n tau_bn c`` with each r_i the chosen representative
of its left coset of b_i(G_e), no backtracking step, and c in the group of
the end vertex.  Tree vertices are reduced words without the tail c.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

from .errors import DomainError, Report
from .gog import GraphOfGroups
from .semigraph import Branch, Edge, SemiGraph

Step = tuple[str, int]
Steps = tuple[Step, ...]
Word = tuple[Steps, int]  # closed at the base vertex
Token = tuple[str, object]


class WordAlgebra:
    def __init__(self, gog: GraphOfGroups) -> None:
        self.gog = gog
        g = gog.graph
        self.base = gog.base
        self.vg = gog.vertex_groups
        self._coset: dict[str, dict[int, tuple[int, int]]] = {}
        self._reps: dict[str, list[int]] = {}
        self._transport: dict[str, dict[int, int]] = {}
        self._opp: dict[str, str] = {}
        self._start: dict[str, str] = {}
        self._end: dict[str, str] = {}
        self._out: dict[str, list[str]] = {v: [] for v in g.vertices}
        for e in sorted(g.closed_edges, key=lambda e: e.id):
            egrp = gog.edge_groups[e.id]
            for b, ob in (e.branches, e.branches[::-1]):
                G = self.vg[b.vertex]
                emb, oemb = gog.embeddings[b.id], gog.embeddings[ob.id]
                sub = sorted(emb)
                coset, reps = {}, []
                for x in sorted(G.elements, key=lambda x: (x != G.identity, x)):
                    if x in coset:
                        continue
                    reps.append(x)
                    for h in sub:
                        coset[G.mul(x, h)] = (x, h)
                self._coset[b.id] = coset
                self._reps[b.id] = reps
                self._transport[b.id] = {emb[a]: oemb[a] for a in egrp.elements}
                self._opp[b.id] = ob.id
                self._start[b.id] = b.vertex
                self._end[b.id] = ob.vertex
                self._out[b.vertex].append(b.id)
        # tree paths from the base
        self._path: dict[str, list[str]] = {self.base: []}
        queue = deque([self.base])
        tree = {e.id: e for e in g.closed_edges if e.id in gog.tree}
        while queue:
            x = queue.popleft()
            for bid in self._out[x]:
                eid = g.branch(bid)[0].id
                y = self._end[bid]
                if eid in tree and y not in self._path:
                    self._path[y] = self._path[x] + [bid]
                    queue.append(y)

    # -- core ---------------------------------------------------------
    def normalize(self, tokens: list[Token], start: str) -> tuple[Steps, int, str]:
        stack: list[Step] = []
        cur = start
        carry = self.vg[cur].identity
        for kind, val in tokens:
            if kind == "g":
                carry = self.vg[cur].mul(carry, val)
                continue
            b = val
            if self._start[b] != cur:
                raise AssertionError(f"step {b} does not start at {cur}")
            r, m = self._coset[b][carry]
            m2 = self._transport[b][m]
            ob = self._opp[b]
            if r == self.vg[cur].identity and stack and stack[-1][0] == ob:
                _, rprev = stack.pop()
                cur = self._end[b]
                carry = self.vg[cur].mul(rprev, m2)
            else:
                stack.append((b, r))
                cur = self._end[b]
                carry = m2
        return tuple(stack), carry, cur

    def tokens(self, steps: Steps, tail: int | None = None) -> list[Token]:
        out: list[Token] = []
        for b, r in steps:
            out.append(("g", r))
            out.append(("s", b))
        if tail is not None:
            out.append(("g", tail))
        return out

    def inverse_tokens(self, steps: Steps, tail: int) -> list[Token]:
        end = self.end_of(steps)
        out: list[Token] = [("g", self.vg[end].inv(tail))]
        for b, r in reversed(steps):
            out.append(("s", self._opp[b]))
            out.append(("g", self.vg[self._start[b]].inv(r)))
        return out

    def end_of(self, steps: Steps) -> str:
        return self._end[steps[-1][0]] if steps else self.base

    # -- group elements (closed words at the base) ----------------------
    def identity(self) -> Word:
        return ((), self.vg[self.base].identity)

    def mul(self, x: Word, y: Word) -> Word:
        steps, tail, end = self.normalize(self.tokens(*x) + self.tokens(*y), self.base)
        assert end == self.base
        return steps, tail

    def inv(self, x: Word) -> Word:
        steps, tail, _ = self.normalize(self.inverse_tokens(*x), self.base)
        return steps, tail

    def _walk(self, u: str) -> tuple[list[Token], list[Token]]:
        path = self._path[u]
        there = [("s", b) for b in path]
        back = [("s", self._opp[b]) for b in reversed(path)]
        return there, back

    def vertex_element(self, u: str, s: int) -> Word:
        """The element s of G_u, carried to the base along the tree."""
        there, back = self._walk(u)
        steps, tail, _ = self.normalize(there + [("g", s)] + back, self.base)
        return steps, tail

    def letter(self, eid: str) -> Word:
        e = self.gog.graph.edge(eid)
        alpha, omega = e.branches
        there, _ = self._walk(omega.vertex)
        _, back = self._walk(alpha.vertex)
        steps, tail, _ = self.normalize(there + [("s", omega.id)] + back, self.base)
        return steps, tail

    def generators(self) -> list[Word]:
        gens = []
        for u in sorted(self.gog.graph.vertices):
            for s in self.vg[u].generating_set():
                gens.append(self.vertex_element(u, s))
        for eid in self.gog.letters():
            gens.append(self.letter(eid))
        return gens

    # -- the tree -----------------------------------------------------
    def act(self, g: Word, vertex: Steps) -> Steps:
        steps, _, _ = self.normalize(self.tokens(*g) + self.tokens(vertex), self.base)
        return steps

    def stabilizer(self, vertex: Steps) -> frozenset[Word]:
        """P G_w P^-1 as a set of normal forms."""
        end = self.end_of(vertex)
        out = set()
        inv = self.inverse_tokens(vertex, self.vg[end].identity)
        for c in self.vg[end].elements:
            steps, tail, _ = self.normalize(self.tokens(vertex, c) + inv, self.base)
            out.add((steps, tail))
        return frozenset(out)

    def neighbours(self, vertex: Steps) -> list[Steps]:
        """Children first (in branch and representative order), then the parent."""
        w = self.end_of(vertex)
        out = []
        last = vertex[-1][0] if vertex else None
        for b in self._out[w]:
            for r in self._reps[b]:
                if last is not None and b == self._opp[last] and r == self.vg[w].identity:
                    continue
                out.append(vertex + ((b, r),))
        if vertex:
            out.append(vertex[:-1])
        return out

    def degree(self, v: str) -> int:
        return sum(len(self._reps[b]) for b in self._out[v])

    def is_reduced(self, vertex: Steps) -> bool:
        return self.normalize(self.tokens(vertex), self.base)[0] == vertex


def word_str(steps: Steps) -> str:
    return "/".join(f"{b}:{r}" for b, r in steps)


@dataclass
class BassSerreBall:
    algebra: WordAlgebra
    radius: int
    depth: dict[Steps, int] = field(default_factory=dict)
    edges: list[tuple[Steps, Steps]] = field(default_factory=list)  # (parent, child)

    def vertex_type(self, x: Steps) -> str:
        return self.algebra.end_of(x)

    def edge_type(self, child: Steps) -> str:
        return self.algebra.gog.graph.branch(child[-1][0])[0].id

    def to_json(self) -> dict:
        alg = self.algebra
        vs = sorted(self.depth, key=lambda x: (self.depth[x], x))
        return {
            "radius": self.radius,
            "vertices": [{"word": word_str(x), "type": self.vertex_type(x), "depth": self.depth[x],
                          "stabilizer_order": alg.vg[self.vertex_type(x)].order} for x in vs],
            "edges": [{"from": word_str(p), "to": word_str(c), "type": self.edge_type(c)}
                      for p, c in sorted(self.edges, key=lambda pc: (len(pc[1]), pc[1]))],
        }


def bass_serre_ball(gog: GraphOfGroups, radius: int, algebra: WordAlgebra | None = None) -> BassSerreBall:
    if radius < 0:
        raise DomainError("bad_radius", "radius must be >= 0")
    alg = algebra or WordAlgebra(gog)
    ball = BassSerreBall(alg, radius)
    root: Steps = ()
    ball.depth[root] = 0
    frontier = [root]
    for d in range(1, radius + 1):
        nxt = []
        for x in frontier:
            for y in alg.neighbours(x):
                if len(y) > len(x):
                    ball.depth[y] = d
                    ball.edges.append((x, y))
                    nxt.append(y)
        frontier = nxt
    return ball


def audit_ball(ball: BassSerreBall) -> Report:
    """Every label is a reduced word, labels are distinct, and the ball has
    the size predicted by the degrees."""
    alg = ball.algebra
    for x in ball.depth:
        if not alg.is_reduced(x):
            return Report.failed("not_reduced", f"{word_str(x)} is not in normal form", x)
    if len(set(ball.depth)) != len(ball.depth) or len(ball.edges) != len(ball.depth) - 1:
        return Report.failed("not_a_tree", "ball is not a tree")
    expected = 0
    for x, d in ball.depth.items():
        if d < ball.radius:
            expected += alg.degree(alg.end_of(x)) - (1 if x else 0)
    if expected != len(ball.edges):
        return Report.failed("bad_size", f"expected {expected} edges, found {len(ball.edges)}")
    return Report.passed()


@dataclass(frozen=True)
class Reconstruction:
    graph: SemiGraph
    vertex_labels: dict[str, int]
    edge_labels: dict[str, int]
    classes: dict[str, tuple[Steps, ...]]

    def to_json(self) -> dict:
        return {
            "graph": self.graph.to_json(),
            "vertex_labels": dict(sorted(self.vertex_labels.items())),
            "edge_labels": dict(sorted(self.edge_labels.items())),
        }


class _UnionFind:
    def __init__(self, items) -> None:
        self.parent = {x: x for x in items}

    def find(self, x):
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a, b) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[max(ra, rb)] = min(ra, rb)


def reconstruct_quotient(ball: BassSerreBall) -> Reconstruction:
    """Quotient graph of the tree by the group, read off from the ball.

    Vertex classes are orbits of the generators restricted to the ball; each
    class is audited by conjugating stabilizers along the witness word.
    Labels are stabilizer orders and orders of stabilizer intersections of
    adjacent vertices.
    """
    alg = ball.algebra
    R = ball.radius
    inside = ball.depth
    gens = alg.generators()
    gens = gens + [alg.inv(s) for s in gens]
    order = sorted(inside, key=lambda x: (inside[x], x))

    # vertex classes with witnesses gamma: gamma . root = x
    cls_of: dict[Steps, int] = {}
    witness: dict[Steps, tuple] = {}
    roots: list[Steps] = []
    for x in order:
        if x in cls_of:
            continue
        k = len(roots)
        roots.append(x)
        cls_of[x] = k
        witness[x] = alg.identity()
        queue = deque([x])
        while queue:
            y = queue.popleft()
            for s in gens:
                z = alg.act(s, y)
                if z in inside and z not in cls_of:
                    cls_of[z] = k
                    witness[z] = alg.mul(s, witness[y])
                    queue.append(z)

    stab_cache: dict[Steps, frozenset] = {}

    def stab(x: Steps) -> frozenset:
        if x not in stab_cache:
            stab_cache[x] = alg.stabilizer(x)
        return stab_cache[x]

    for x, k in cls_of.items():
        gamma = witness[x]
        g_inv = alg.inv(gamma)
        conj = frozenset(alg.mul(alg.mul(gamma, h), g_inv) for h in stab(roots[k]))
        if conj != stab(x):
            raise DomainError("audit_failed", f"witness for {word_str(x)} does not conjugate stabilizers")

    # edge classes
    edge_index = {frozenset(pc): i for i, pc in enumerate(ball.edges)}
    uf = _UnionFind(range(len(ball.edges)))
    for i, (p, c) in enumerate(ball.edges):
        for s in gens:
            j = edge_index.get(frozenset((alg.act(s, p), alg.act(s, c))))
            if j is not None:
                uf.union(i, j)
    eclasses: dict[int, list[int]] = {}
    for i in range(len(ball.edges)):
        eclasses.setdefault(uf.find(i), []).append(i)

    # sufficiency: interior representatives and local edge counts
    ends_at = [0] * len(roots)
    for members in eclasses.values():
        p, c = ball.edges[members[0]]
        ends_at[cls_of[p]] += 1
        ends_at[cls_of[c]] += 1
    for k in range(len(roots)):
        interior = [x for x, kk in cls_of.items() if kk == k and inside[x] < R]
        if not interior:
            raise DomainError("radius_too_small", f"vertex class of {word_str(roots[k])} has no interior point")
        x = min(interior, key=lambda y: (inside[y], y))
        star = alg.neighbours(x)
        seen: set[Steps] = set()
        orbits = 0
        for y in star:
            if y in seen:
                continue
            orbits += 1
            for h in stab(x):
                seen.add(alg.act(h, y))
        if orbits != ends_at[k]:
            raise DomainError("radius_too_small",
                              f"class of {word_str(roots[k])}: {orbits} edge orbits at a point, {ends_at[k]} edge classes")

    names = [f"c{k}" for k in range(len(roots))]
    edges, elabels = [], {}
    for j, rep in enumerate(sorted(eclasses, key=lambda r: min(eclasses[r]))):
        p, c = ball.edges[min(eclasses[rep])]
        eid = f"q{j}"
        edges.append(Edge(eid, (Branch(f"{eid}.0", names[cls_of[p]]), Branch(f"{eid}.1", names[cls_of[c]]))))
        elabels[eid] = len(stab(p) & stab(c))
    vlabels = {names[k]: len(stab(roots[k])) for k in range(len(roots))}
    classes = {names[k]: tuple(sorted(x for x, kk in cls_of.items() if kk == k)) for k in range(len(roots))}
    return Reconstruction(SemiGraph(names, edges), vlabels, elabels, classes)
