import random
from functools import lru_cache

import networkx as nx
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from skeletonkit.bass_serre import WordAlgebra, audit_ball, bass_serre_ball, reconstruct_quotient
from skeletonkit.corpus import gog_corpus, random_gog
from skeletonkit.errors import DomainError
from skeletonkit.gog import PermutationAction, labeled_isomorphic, resolve_action, trivial_gog
from skeletonkit.groups import compose, perm_inverse
from skeletonkit.semigraph import SemiGraph, edge, truncate

CORPUS = gog_corpus()


def quotient_diameter(gog) -> int:
    G = nx.MultiGraph()
    G.add_nodes_from(gog.graph.vertices)
    for e in gog.graph.closed_edges:
        G.add_edge(e.branches[0].vertex, e.branches[1].vertex)
    return nx.diameter(G)


# -- oracle: evaluate words in permutation actions ---------------------------

def _homs_to(G, n, rng, tries=400):
    """Random homomorphisms G -> S_n, as dicts on a generating set."""
    from skeletonkit.groups import extend_to_hom
    gens = G.generating_set()
    ident = tuple(range(n))
    out = [{a: ident for a in gens}]
    for _ in range(tries):
        imgs = {}
        for a in gens:
            p = list(range(n))
            rng.shuffle(p)
            imgs[a] = tuple(p)
        try:
            extend_to_hom(G, imgs, compose, ident)
        except DomainError:
            continue
        out.append(imgs)
    return out


@lru_cache(maxsize=None)
def valid_actions(name: str, n: int = 4, want: int = 6):
    gog = CORPUS[name]
    rng = random.Random(hash((name, n)) & 0xFFFF)
    homs = {v: _homs_to(gog.vertex_groups[v], n, rng) for v in sorted(gog.graph.vertices)}
    found = []
    for _ in range(4000):
        vertex = {v: rng.choice(h) for v, h in homs.items()}
        letters = {}
        for e in gog.letters():
            p = list(range(n))
            rng.shuffle(p)
            letters[e] = tuple(p)
        act = PermutationAction(n, vertex, letters)
        try:
            res = resolve_action(gog, act)
        except DomainError:
            continue
        found.append(res)
        if len(found) >= want:
            break
    return found


def evaluate(alg, res, tokens, start):
    """Permutation of a token sequence, computed without any normal form."""
    gog = alg.gog
    n = res.size
    perm = tuple(range(n))
    cur = start
    for kind, val in tokens:
        if kind == "g":
            perm = compose(perm, res.vertex[cur][val])
            continue
        e, b = gog.graph.branch(val)
        alpha, omega = e.branches
        if e.id in gog.tree:
            step = tuple(range(n))
        elif b.id == omega.id:
            step = res.letters[e.id]
        else:
            step = perm_inverse(res.letters[e.id])
        perm = compose(perm, step)
        cur = (alpha if b.id == omega.id else omega).vertex
    return perm, cur


def random_tokens(alg, rng, length):
    """A random path-groupoid word from the base back to the base."""
    gog = alg.gog
    cur = alg.base
    toks = []
    for _ in range(length):
        if rng.random() < 0.5:
            toks.append(("g", rng.randrange(gog.vertex_groups[cur].order)))
        else:
            outs = [b.id for e in gog.graph.closed_edges for b in e.branches if b.vertex == cur]
            if not outs:
                continue
            bid = rng.choice(outs)
            toks.append(("s", bid))
            e, _ = gog.graph.branch(bid)
            cur = next(b.vertex for b in e.branches if b.id != bid) if not e.is_loop else cur
    back = alg._walk(cur)[1] if cur != alg.base else []
    return toks + back


names = st.sampled_from(sorted(CORPUS))


@given(names, st.integers(0, 10 ** 9))
@settings(max_examples=150, deadline=None)
def test_normal_form_preserves_every_action(name, seed):
    alg = WordAlgebra(CORPUS[name])
    rng = random.Random(seed)
    toks = random_tokens(alg, rng, rng.randint(0, 12))
    steps, tail, end = alg.normalize(toks, alg.base)
    assert end == alg.base
    assert alg.is_reduced(steps)
    for res in valid_actions(name):
        want, where = evaluate(alg, res, toks, alg.base)
        assert where == alg.base
        assert evaluate(alg, res, alg.tokens(steps, tail), alg.base)[0] == want


def _random_word(alg, rng):
    steps, tail, _ = alg.normalize(random_tokens(alg, rng, rng.randint(0, 10)), alg.base)
    return steps, tail


@given(names, st.integers(0, 10 ** 9))
@settings(max_examples=150, deadline=None)
def test_group_axioms(name, seed):
    alg = WordAlgebra(CORPUS[name])
    rng = random.Random(seed)
    x, y, z = (_random_word(alg, rng) for _ in range(3))
    e = alg.identity()
    assert alg.mul(alg.mul(x, y), z) == alg.mul(x, alg.mul(y, z))
    assert alg.mul(e, x) == x == alg.mul(x, e)
    assert alg.mul(x, alg.inv(x)) == e == alg.mul(alg.inv(x), x)
    assert alg.inv(alg.inv(x)) == x


@given(names, st.integers(0, 10 ** 9))
@settings(max_examples=100, deadline=None)
def test_tree_action(name, seed):
    alg = WordAlgebra(CORPUS[name])
    rng = random.Random(seed)
    g, h = _random_word(alg, rng), _random_word(alg, rng)
    ball = bass_serre_ball(alg.gog, 2, alg)
    x = rng.choice(sorted(ball.depth))
    # an action: (gh).x = g.(h.x), and it preserves adjacency
    assert alg.act(alg.mul(g, h), x) == alg.act(g, alg.act(h, x))
    assert alg.act(alg.identity(), x) == x
    gx = alg.act(g, x)
    assert sorted(alg.act(g, y) for y in alg.neighbours(x)) == sorted(alg.neighbours(gx))
    # stabilizers are conjugate to the vertex group and really fix x
    st_ = alg.stabilizer(x)
    assert len(st_) == alg.gog.vertex_groups[alg.end_of(x)].order
    assert all(alg.act(s, x) == x for s in st_)
    assert alg.stabilizer(gx) == frozenset(alg.mul(alg.mul(g, s), alg.inv(g)) for s in st_)


# -- balls ----------------------------------------------------------------------

def ball_size_oracle(gog, R):
    """Vertices in the ball, by recursion on vertex types and the branch used
    to arrive; [G_v : b(G_e)] children per outgoing branch."""
    g = gog.graph
    outs = {v: [] for v in g.vertices}
    for e in g.closed_edges:
        a, b = e.branches
        for x, y in ((a, b), (b, a)):
            idx = gog.vertex_groups[x.vertex].order // gog.edge_groups[e.id].order
            outs[x.vertex].append((x.id, y.id, y.vertex, idx))

    @lru_cache(maxsize=None)
    def count(v, came_by, r):
        if r == 0:
            return 1
        total = 1
        for bid, opp, w, idx in outs[v]:
            k = idx - (1 if bid == came_by else 0)
            total += k * count(w, opp, r - 1)
        return total

    return count(gog.base, None, R)


@pytest.mark.parametrize("name", sorted(CORPUS))
def test_ball_audit_and_size(name):
    gog = CORPUS[name]
    for R in range(4):
        ball = bass_serre_ball(gog, R)
        assert audit_ball(ball)
        assert len(ball.depth) == ball_size_oracle(gog, R)
        T = nx.Graph(ball.edges)
        T.add_node(())
        assert nx.is_tree(T)


def test_ball_examples():
    circ = trivial_gog(SemiGraph(["v"], [edge("e", "v", "v")]))
    ball = bass_serre_ball(circ, 2)
    T = nx.Graph(ball.edges)
    assert len(ball.depth) == 5 and max(d for _, d in T.degree) == 2
    seg = CORPUS["segment_Z2_Z3"]
    ball = bass_serre_ball(seg, 1)
    assert len(ball.depth) == 1 + 2
    assert len(bass_serre_ball(seg, 2).depth) == 1 + 2 + 2 * 2
    assert list(bass_serre_ball(seg, 0).depth) == [()]
    js = bass_serre_ball(seg, 1).to_json()
    assert js["vertices"][0] == {"word": "", "type": "a", "depth": 0, "stabilizer_order": 2}
    with pytest.raises(DomainError):
        bass_serre_ball(seg, -1)


# -- reconstruction ----------------------------------------------------------------

def _recovers(gog, R):
    rec = reconstruct_quotient(bass_serre_ball(gog, R))
    return labeled_isomorphic(rec.graph, rec.vertex_labels, rec.edge_labels,
                              truncate(gog.graph), gog.vertex_labels(), gog.edge_labels())


@pytest.mark.parametrize("name", sorted(CORPUS))
def test_reconstruction_on_corpus(name):
    gog = CORPUS[name]
    assert _recovers(gog, quotient_diameter(gog) + 2)


def test_reconstruction_examples():
    rec = reconstruct_quotient(bass_serre_ball(CORPUS["segment_Z2_Z3"], 3))
    assert sorted(rec.vertex_labels.values()) == [2, 3] and list(rec.edge_labels.values()) == [1]
    rec = reconstruct_quotient(bass_serre_ball(CORPUS["circle"], 2))
    assert len(rec.graph.vertices) == 1 and rec.graph.edges[0].is_loop
    rec = reconstruct_quotient(bass_serre_ball(CORPUS["theta_Z2"], 3))
    assert len(rec.graph.edges) == 3 and set(rec.vertex_labels.values()) == {2}


def test_reconstruction_detects_small_radius():
    for name in ("segment_Z2_Z3", "path_Z2_Z4_Z2", "theta_Z2_Z3"):
        with pytest.raises(DomainError) as exc:
            reconstruct_quotient(bass_serre_ball(CORPUS[name], 0))
        assert exc.value.code == "radius_too_small"


@given(st.integers(0, 10 ** 9))
@settings(max_examples=25, deadline=None)
def test_reconstruction_on_random_graphs_of_groups(seed):
    gog = random_gog(random.Random(seed))
    R = quotient_diameter(gog) + 2
    if ball_size_oracle(gog, R) > 20000:
        R = quotient_diameter(gog) + 1
    assert _recovers(gog, R)


@given(st.integers(0, 10 ** 9), st.integers(0, 3))
@settings(max_examples=40, deadline=None)
def test_reconstruction_never_wrong(seed, R):
    # at any radius: either an error or the right answer
    gog = random_gog(random.Random(seed), max_vertices=3, max_extra=1)
    if ball_size_oracle(gog, R) > 20000:
        return
    try:
        ok = _recovers(gog, R)
    except DomainError as exc:
        assert exc.code == "radius_too_small"
        return
    assert ok
