"""Seeded generators of random inputs, shared by the self-test and the tests."""
from __future__ import annotations

import random
from fractions import Fraction

from .gog import GraphOfGroups, trivial_gog
from .groups import FiniteGroup, cyclic, dihedral, direct_product, trivial
from .semigraph import SemiGraph, edge
from .skeleton import DecoratedVertex, Skeleton, SkeletonEdge, CORONAL_FINITE, PUNCTURED_DISC, OTHER
from .exact import INF


def random_semigraph(rng: random.Random, max_vertices: int = 6, max_extra: int = 4,
                     max_open: int = 4, min_open: int = 0) -> SemiGraph:
    """Connected semi-graph: a random tree plus extra edges (loops and
    parallel edges allowed) plus open edges."""
    n = rng.randint(1, max_vertices)
    vs = [f"v{i}" for i in range(n)]
    edges = []
    for i in range(1, n):
        edges.append(edge(f"t{i}", vs[rng.randrange(i)], vs[i]))
    for j in range(rng.randint(0, max_extra)):
        edges.append(edge(f"x{j}", rng.choice(vs), rng.choice(vs)))
    for k in range(rng.randint(min_open, max(min_open, max_open))):
        edges.append(edge(f"o{k}", rng.choice(vs)))
    return SemiGraph(vs, edges)


def random_skeleton(rng: random.Random, p: int = 3, bare_leaves: bool = False) -> Skeleton:
    """Random decorated skeleton.  Unless ``bare_leaves`` is set, no vertex
    is a genus 0 interior leaf, so the result is the skeleton of a curve
    rather than that of a non-minimal triangulation."""
    g = random_semigraph(rng, max_vertices=7, max_extra=3, max_open=3)
    vdecor = {}
    extra_open = []
    for v in g.vertices:
        roll = rng.random()
        genus = rng.choice([1, 2]) if roll < 0.15 else 0
        missing = rng.choice([1, 2]) if 0.15 <= roll < 0.3 else 0
        if not bare_leaves and genus == 0 and missing == 0 and g.valence(v) == 1:
            fix = rng.randrange(3)
            if fix == 0:
                genus = 1
            elif fix == 1:
                missing = 1
            else:
                extra_open.append(edge(f"c{len(extra_open)}", v))
        vdecor[v] = DecoratedVertex(genus, 2, missing)
    if extra_open:
        g = SemiGraph(g.vertices, list(g.edges) + extra_open)
    edecor = {}
    for e in g.edges:
        if e.is_open:
            cusp = rng.choice([CORONAL_FINITE, PUNCTURED_DISC, OTHER])
            length = INF if cusp != CORONAL_FINITE else Fraction(rng.randint(1, 6), rng.randint(1, 3))
            edecor[e.id] = SkeletonEdge(length, cusp)
        else:
            edecor[e.id] = SkeletonEdge(Fraction(rng.randint(1, 6), rng.randint(1, 3)))
    return Skeleton(g, vdecor, edecor, p=p, mixed_characteristic=rng.random() < 0.7)


def _cyclic_embedding(src: FiniteGroup, dst: FiniteGroup, gen_image: int) -> list[int]:
    """Embedding of a cyclic group (generator 1) sending 1 to ``gen_image``."""
    out = [dst.identity]
    for _ in range(1, src.order):
        out.append(dst.mul(out[-1], gen_image))
    return out


_GROUPS = {
    "1": trivial, "Z2": lambda: cyclic(2), "Z3": lambda: cyclic(3), "Z4": lambda: cyclic(4),
    "Z6": lambda: cyclic(6), "S3": lambda: dihedral(3), "V4": lambda: direct_product(cyclic(2), cyclic(2)),
    "D4": lambda: dihedral(4), "Z2xZ6": lambda: direct_product(cyclic(2), cyclic(6)),
}


def random_gog(rng: random.Random, max_vertices: int = 3, max_extra: int = 2) -> GraphOfGroups:
    """Graph of groups with vertex groups of order <= 12 and cyclic edge
    groups embedded through elements of matching order."""
    g = random_semigraph(rng, max_vertices=max_vertices, max_extra=max_extra, max_open=0)
    vg = {v: _GROUPS[rng.choice(sorted(_GROUPS))]() for v in g.vertices}
    eg, emb = {}, {}
    for e in g.edges:
        a, b = e.branches
        Ga, Gb = vg[a.vertex], vg[b.vertex]
        oa = {x: Ga.element_order(x) for x in Ga.elements}
        ob = {x: Gb.element_order(x) for x in Gb.elements}
        common = sorted(set(oa.values()) & set(ob.values()))
        m = rng.choice(common)
        E = cyclic(m)
        eg[e.id] = E
        emb[a.id] = _cyclic_embedding(E, Ga, rng.choice([x for x in Ga.elements if oa[x] == m]))
        emb[b.id] = _cyclic_embedding(E, Gb, rng.choice([x for x in Gb.elements if ob[x] == m]))
    return GraphOfGroups(g, vg, eg, emb)


def gog_corpus() -> dict[str, GraphOfGroups]:
    """Hand-built graphs of groups used by the reconstruction checks."""
    one, Z = trivial(), cyclic
    S3, V4 = dihedral(3), direct_product(cyclic(2), cyclic(2))

    def seg(ga, gb, ge, ea, eb):
        return GraphOfGroups(SemiGraph(["a", "b"], [edge("e", "a", "b")]),
                             {"a": ga, "b": gb}, {"e": ge}, {"e.0": ea, "e.1": eb})

    def loop(gv, ge, e0, e1):
        return GraphOfGroups(SemiGraph(["v"], [edge("e", "v", "v")]), {"v": gv}, {"e": ge},
                             {"e.0": e0, "e.1": e1})

    def theta(ga, gb):
        es = "efg"
        return GraphOfGroups(SemiGraph(["a", "b"], [edge(x, "a", "b") for x in es]),
                             {"a": ga, "b": gb}, {x: one for x in es},
                             {f"{x}.{i}": [0] for x in es for i in (0, 1)})

    c = {}
    c["circle"] = trivial_gog(SemiGraph(["v"], [edge("e", "v", "v")]))
    c["segment_Z2_Z3"] = seg(Z(2), Z(3), one, [0], [0])
    c["segment_Z2_Z2"] = seg(Z(2), Z(2), one, [0], [0])
    c["segment_Z4_Z6_over_Z2"] = seg(Z(4), Z(6), Z(2), [0, 2], [0, 3])
    rot = next(x for x in S3.elements if S3.element_order(x) == 3)
    ref = next(x for x in S3.elements if S3.element_order(x) == 2)
    c["segment_S3_Z6_over_Z3"] = seg(S3, Z(6), Z(3), _cyclic_embedding(Z(3), S3, rot), [0, 2, 4])
    c["segment_V4_S3_over_Z2"] = seg(V4, S3, Z(2), [0, 1], _cyclic_embedding(Z(2), S3, ref))
    c["theta_Z2"] = theta(Z(2), Z(2))
    c["theta_Z2_Z3"] = theta(Z(2), Z(3))
    c["loop_Z4_over_Z2"] = loop(Z(4), Z(2), [0, 2], [0, 2])
    c["loop_Z6_over_Z3"] = loop(Z(6), Z(3), [0, 2, 4], [0, 4, 2])
    c["loop_Z2"] = loop(Z(2), one, [0], [0])
    c["circle_two_vertices"] = GraphOfGroups(
        SemiGraph(["a", "b"], [edge("e", "a", "b"), edge("f", "b", "a")]),
        {"a": Z(2), "b": Z(3)}, {"e": one, "f": one}, {"e.0": [0], "e.1": [0], "f.0": [0], "f.1": [0]})
    c["path_Z2_Z4_Z2"] = GraphOfGroups(
        SemiGraph(["a", "b", "c"], [edge("e", "a", "b"), edge("f", "b", "c")]),
        {"a": Z(2), "b": Z(4), "c": Z(2)}, {"e": Z(2), "f": one},
        {"e.0": [0, 1], "e.1": [0, 2], "f.0": [0], "f.1": [0]})
    return c
