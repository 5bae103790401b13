"""Balls in the Bruhat–Tits tree of SL2 over a local field with residue
field of size q = p^f and ramification index e, as skeletons.

A vertex is ``(n, D)``: a level n and digits D = {m: d} with m < n and
0 < d < q.  Its parent drops the digit at n - 1; its children add a digit
at n.  Inside a ball of radius R digit exponents lie in [-R, R), so the
digits pack into one integer ``sum d_m q^(m + R)``.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

import numpy as np

from .errors import DomainError, InputError
from .exact import MINUS_INF, Extended, is_prime, prime_power
from .semigraph import Branch, Edge, SemiGraph
from .skeleton import DecoratedVertex, Skeleton, SkeletonEdge
from .ultrametric import CenterSpace, DiscPoint

Digits = tuple[tuple[int, int], ...]


@dataclass(frozen=True)
class LocalFieldParams:
    p: int
    f: int = 1
    e: int = 1

    def __post_init__(self):
        if not is_prime(self.p):
            raise DomainError("not_prime", f"p = {self.p} is not prime")
        if self.f < 1 or self.e < 1:
            raise DomainError("bad_params", "f and e must be >= 1")

    @property
    def q(self) -> int:
        return self.p ** self.f

    @property
    def edge_length(self) -> Fraction:
        return Fraction(self.f, self.e)


@dataclass(frozen=True)
class BTVertex:
    level: int
    digits: Digits = ()

    def __post_init__(self):
        if any(m >= self.level for m, _ in self.digits):
            raise DomainError("bad_vertex", "digit exponents must lie below the level")
        object.__setattr__(self, "digits", tuple(sorted((m, d) for m, d in self.digits if d)))

    @property
    def id(self) -> str:
        return f"{self.level}|" + ",".join(f"{m}={d}" for m, d in self.digits)

    @classmethod
    def parse(cls, text: str) -> "BTVertex":
        try:
            level, rest = text.split("|")
            digits = tuple(tuple(int(x) for x in item.split("=")) for item in rest.split(",") if item)
            return cls(int(level), digits)
        except ValueError:
            raise InputError("bad_vertex_id", f"cannot parse tree vertex {text!r}") from None


class DigitCenterSpace(CenterSpace):
    """Centers are finitely supported digit strings; two centers first
    differing at exponent m are at log-distance -f m."""

    def __init__(self, f: int = 1) -> None:
        self.f = f
        self.centers = ()

    def __contains__(self, a) -> bool:
        return isinstance(a, tuple) and all(isinstance(x, tuple) and len(x) == 2 for x in a)

    def __eq__(self, other) -> bool:
        return isinstance(other, DigitCenterSpace) and other.f == self.f

    def __hash__(self) -> int:
        return hash(("digits", self.f))

    def logdist(self, a: Digits, b: Digits) -> Extended:
        da, db = dict(a), dict(b)
        diff = [m for m in set(da) | set(db) if da.get(m, 0) != db.get(m, 0)]
        if not diff:
            return MINUS_INF
        return Fraction(-self.f * min(diff))

    def to_json(self) -> dict:
        return {"digits": True, "f": self.f}


def embed_vertex(v: BTVertex, params: LocalFieldParams) -> DiscPoint:
    """η_{a, r} with a the digit string of v and log r = -n f."""
    if params.e != 1:
        raise DomainError("ramified", "the digit embedding is only defined for e = 1")
    return DiscPoint(DigitCenterSpace(params.f), v.digits, Fraction(-v.level * params.f))


class TreeBall(Skeleton):
    """Array-backed ball; the SemiGraph is only built on demand."""

    def __init__(self, params: LocalFieldParams, radius: int) -> None:
        if radius < 0:
            raise DomainError("bad_radius", "radius must be >= 0")
        self.params = params
        self.radius = radius
        self.p = params.p
        self.mixed_characteristic = True
        self.finite = False
        self._vdecor = {}
        self._edecor = {}
        self.level, self.code, self.parent, self.depth = _generate(params.q, radius)

    def __repr__(self) -> str:
        return f"TreeBall(q={self.params.q}, R={self.radius}, V={len(self.code)})"

    @property
    def size(self) -> int:
        return len(self.code)

    def bt_vertex(self, i: int) -> BTVertex:
        q, R = self.params.q, self.radius
        c, digits = int(self.code[i]), []
        for k in range(2 * R):
            d = c % q
            c //= q
            if d:
                digits.append((k - R, d))
        return BTVertex(int(self.level[i]), tuple(digits))

    @cached_property
    def ids(self) -> list[str]:
        return [self.bt_vertex(i).id for i in range(self.size)]

    @cached_property
    def _index(self) -> dict[str, int]:
        return {v: i for i, v in enumerate(self.ids)}

    @cached_property
    def graph(self) -> SemiGraph:
        ids = self.ids
        edges = [Edge(f"e{i}", (Branch(f"e{i}.0", ids[int(self.parent[i])]), Branch(f"e{i}.1", ids[i])))
                 for i in range(1, self.size)]
        return SemiGraph(ids, edges)

    def vertex(self, v: str) -> DecoratedVertex:
        return DecoratedVertex(truncated=bool(self.depth[self._index[v]] == self.radius))

    def edge_decor(self, eid: str) -> SkeletonEdge:
        return SkeletonEdge(self.params.edge_length)

    def valences(self) -> np.ndarray:
        val = np.bincount(self.parent[1:], minlength=self.size)
        val[1:] += 1
        return val

    def interior_valence_counts(self) -> Counter:
        val = self.valences()[self.depth < self.radius]
        values, counts = np.unique(val, return_counts=True)
        return Counter({int(v): int(c) for v, c in zip(values, counts)})

    def replace(self, graph=None, vertex_decor=None, edge_decor=None) -> Skeleton:
        vd = {v: self.vertex(v) for v in self.graph.vertices}
        ed = {e.id: self.edge_decor(e.id) for e in self.graph.edges}
        base = Skeleton(self.graph, vd, ed, self.p, True, False)
        return base.replace(graph, vertex_decor, edge_decor)


def _generate(q: int, R: int):
    qpow = np.array([q ** k for k in range(2 * R + 1)], dtype=np.int64)
    levels, codes, parents, depths = [np.zeros(1, np.int64)], [np.zeros(1, np.int64)], [np.full(1, -1, np.int64)], [np.zeros(1, np.int64)]
    f_level, f_code = levels[0], codes[0]
    went_down = np.zeros(1, bool)  # reached from its parent, so no step up
    skip = np.full(1, -1, np.int64)  # child digit leading back, or -1
    offset = 0
    digits = np.arange(q, dtype=np.int64)
    for d in range(1, R + 1):
        idx = np.arange(offset, offset + len(f_code))
        up = ~went_down
        u_level = f_level[up] - 1
        u_weight = qpow[u_level + R]
        u_code = f_code[up] % u_weight
        u_skip = (f_code[up] // u_weight) % q

        c_code = f_code[:, None] + digits[None, :] * qpow[f_level + R][:, None]
        keep = digits[None, :] != skip[:, None]
        shape = c_code.shape
        c_level = np.broadcast_to((f_level + 1)[:, None], shape)[keep]
        c_parent = np.broadcast_to(idx[:, None], shape)[keep]
        c_code = c_code[keep]

        f_level = np.concatenate([c_level, u_level])
        f_code = np.concatenate([c_code, u_code])
        went_down = np.concatenate([np.ones(len(c_code), bool), np.zeros(len(u_code), bool)])
        skip = np.concatenate([np.full(len(c_code), -1, np.int64), u_skip])
        levels.append(f_level)
        codes.append(f_code)
        parents.append(np.concatenate([c_parent, idx[up]]))
        depths.append(np.full(len(f_code), d, np.int64))
        offset += len(idx)
    return np.concatenate(levels), np.concatenate(codes), np.concatenate(parents), np.concatenate(depths)


def bt_ball(params: LocalFieldParams, radius: int) -> TreeBall:
    return TreeBall(params, radius)


def recover_invariants(sk: Skeleton) -> tuple[int, int, int]:
    """(q, p, f) from the common valence q + 1 of the interior vertices."""
    counts = sk.interior_valence_counts()
    if not counts:
        raise DomainError("no_interior", "no interior vertex to read a valence from")
    if len(counts) > 1:
        raise DomainError("non_uniform_valence", f"interior valences {sorted(counts)} differ")
    (v,) = counts
    if v < 3:
        raise DomainError("valence_too_small", f"interior valence {v} < 3")
    q = v - 1
    pf = prime_power(q)
    if pf is None:
        raise DomainError("not_prime_power", f"q = {q} is not a prime power")
    return q, pf[0], pf[1]
