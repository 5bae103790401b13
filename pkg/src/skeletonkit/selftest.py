"""Seeded randomized checks bundled with the CLI."""
from __future__ import annotations

import random
from fractions import Fraction

from .bass_serre import bass_serre_ball, reconstruct_quotient
from .corpus import random_gog, random_semigraph, random_skeleton
from .errors import DomainError
from .gog import labeled_isomorphic
from .harmonic import check_cochain, harm_basis, harm_rank_formula, prescribed_cochain
from .skeleton import minimize_triangulation, node_set
from .wild import fiber_count, fiber_count_oracle


def _rank_formula(rng: random.Random) -> str | None:
    g = random_semigraph(rng)
    got = harm_basis(g, 5).rank
    if got != harm_rank_formula(g):
        return f"rank {got} != formula {harm_rank_formula(g)} on {g.to_json()}"
    return None


def _prescribed(rng: random.Random) -> str | None:
    g = random_semigraph(rng, min_open=3, max_open=5)
    opens = sorted(e.id for e in g.open_edges)
    e1, e2, e3 = rng.sample(opens, 3)
    ell = rng.choice([2, 3, 5, 7])
    c = prescribed_cochain(g, e1, e2, e3, rng.randrange(ell), rng.randrange(ell), ell)
    report = check_cochain(g, c)
    return None if report else f"{report} on {g.to_json()}"


def _confluence(rng: random.Random) -> str | None:
    sk = random_skeleton(rng)
    results = {minimize_triangulation(sk, rng=random.Random(rng.random())) for _ in range(4)}
    nodes = node_set(sk)
    if nodes and results != {nodes}:
        return f"fixed points {sorted(map(sorted, results))} differ from the node set on {sk.to_json()}"
    if not nodes and any(len(r) > 1 for r in results):
        return f"a node-free skeleton kept several points on {sk.to_json()}"
    return None


def _wild(rng: random.Random) -> str | None:
    p, h = rng.choice([2, 3, 5]), rng.randint(0, 3)
    T = Fraction(rng.randint(-6, 6), rng.randint(1, 4))
    S = T - Fraction(rng.randint(1, 200), rng.randint(1, 12))
    if fiber_count(T, S, p, h) != fiber_count_oracle(T, S, p, h):
        return f"fiber_count mismatch at {(T, S, p, h)}"
    return None


def _reconstruct(rng: random.Random) -> str | None:
    gog = random_gog(rng)
    for R in range(1, 6):
        try:
            rec = reconstruct_quotient(bass_serre_ball(gog, R))
        except DomainError:
            continue
        if not labeled_isomorphic(rec.graph, rec.vertex_labels, rec.edge_labels,
                                  gog.graph, gog.vertex_labels(), gog.edge_labels()):
            return f"wrong quotient at radius {R} for {gog.to_json()}"
        return None
    return f"no radius <= 5 sufficed for {gog.to_json()}"


CHECKS = {
    "harm_rank_formula": _rank_formula,
    "prescribed_cochain": _prescribed,
    "minimization_confluence": _confluence,
    "wild_oracle": _wild,
    "reconstruction": _reconstruct,
}


def run_selftest(seed: int, n: int) -> dict:
    rng = random.Random(seed)
    failures = []
    for name, check in CHECKS.items():
        for _ in range(n):
            msg = check(rng)
            if msg:
                failures.append({"check": name, "detail": msg})
    return {"seed": seed, "instances": n, "checks": sorted(CHECKS), "failures": failures}
