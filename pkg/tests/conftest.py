import random
from fractions import Fraction

import networkx as nx
import pytest

from skeletonkit.exact import INF
from skeletonkit.semigraph import SemiGraph, edge
from skeletonkit.skeleton import DecoratedVertex, Skeleton, SkeletonEdge


def nx_multigraph(g: SemiGraph) -> nx.MultiGraph:
    G = nx.MultiGraph()
    G.add_nodes_from(g.vertices)
    for e in g.closed_edges:
        G.add_edge(e.branches[0].vertex, e.branches[1].vertex, key=e.id)
    return G


def circle_skeleton(p: int = 3) -> Skeleton:
    return Skeleton(SemiGraph(["v"], [edge("e", "v", "v")]), p=p)


def tripod_skeleton(p: int = 3) -> Skeleton:
    """One genus-0 vertex with three punctured-disc cusps."""
    g = SemiGraph(["v"], [edge(f"o{i}", "v") for i in range(3)])
    return Skeleton(g, {}, {f"o{i}": SkeletonEdge(INF, "punctured_disc") for i in range(3)}, p=p)


def genus_skeleton(genus: int, p: int = 3) -> Skeleton:
    return Skeleton(SemiGraph(["v"], []), {"v": DecoratedVertex(genus=genus)}, p=p)


def annulus_skeleton(length=Fraction(2)) -> Skeleton:
    g = SemiGraph(["a", "b"], [edge("e", "a", "b")])
    ends = DecoratedVertex(missing_branches=1)
    return Skeleton(g, {"a": ends, "b": ends}, {"e": SkeletonEdge(Fraction(length))})


def theta_skeleton() -> Skeleton:
    g = SemiGraph(["a", "b"], [edge(x, "a", "b") for x in "efg"])
    return Skeleton(g)


@pytest.fixture
def rng():
    return random.Random(20261016)
