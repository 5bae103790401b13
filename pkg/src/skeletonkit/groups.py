"""Finite groups given by multiplication tables, and permutations."""
from __future__ import annotations

from itertools import product
from typing import Iterable, Sequence

from .errors import DomainError, InputError, Report

Perm = tuple[int, ...]


def compose(a: Perm, b: Perm) -> Perm:
    """a after b: x -> a[b[x]]."""
    return tuple(a[x] for x in b)


def perm_inverse(a: Perm) -> Perm:
    out = [0] * len(a)
    for i, x in enumerate(a):
        out[x] = i
    return tuple(out)


def is_permutation(a: Sequence[int], n: int) -> bool:
    return len(a) == n and sorted(a) == list(range(n))


class FiniteGroup:
    """Elements are 0..n-1; ``table[a][b]`` is the product ab."""

    def __init__(self, table: Sequence[Sequence[int]], identity: int = 0, check: bool = True) -> None:
        self.table = tuple(tuple(row) for row in table)
        self.identity = identity
        if check:
            report = check_group(self.table, identity)
            if not report:
                raise InputError(report.code, report.detail)
        n = len(self.table)
        self._inv = [0] * n
        for a in range(n):
            for b in range(n):
                if self.table[a][b] == identity:
                    self._inv[a] = b
                    break

    @property
    def order(self) -> int:
        return len(self.table)

    def __len__(self) -> int:
        return len(self.table)

    def __repr__(self) -> str:
        return f"FiniteGroup(order={self.order})"

    def __eq__(self, other) -> bool:
        return isinstance(other, FiniteGroup) and self.table == other.table and self.identity == other.identity

    def __hash__(self) -> int:
        return hash((self.table, self.identity))

    @property
    def elements(self) -> range:
        return range(len(self.table))

    def mul(self, a: int, b: int) -> int:
        return self.table[a][b]

    def inv(self, a: int) -> int:
        return self._inv[a]

    def prod(self, *xs: int) -> int:
        out = self.identity
        for x in xs:
            out = self.table[out][x]
        return out

    def conj(self, h: int, a: int) -> int:
        """h^-1 a h."""
        return self.prod(self._inv[h], a, h)

    def element_order(self, a: int) -> int:
        k, x = 1, a
        while x != self.identity:
            x = self.table[x][a]
            k += 1
        return k

    def generated(self, gens: Iterable[int]) -> frozenset[int]:
        gens = list(gens)
        seen = {self.identity}
        frontier = [self.identity]
        while frontier:
            nxt = []
            for x in frontier:
                for g in gens:
                    y = self.table[x][g]
                    if y not in seen:
                        seen.add(y)
                        nxt.append(y)
            frontier = nxt
        return frozenset(seen)

    def generating_set(self) -> list[int]:
        """A small generating set, chosen greedily by element id."""
        gens: list[int] = []
        span = frozenset({self.identity})
        for a in self.elements:
            if a not in span:
                gens.append(a)
                span = self.generated(gens)
        return gens

    def is_subgroup(self, subset: Iterable[int]) -> bool:
        s = frozenset(subset)
        return self.identity in s and all(self.table[a][self._inv[b]] in s for a in s for b in s)

    def to_json(self) -> dict:
        return {"table": [list(r) for r in self.table], "identity": self.identity}


def check_group(table: Sequence[Sequence[int]], identity: int) -> Report:
    n = len(table)
    if n == 0:
        return Report.failed("empty_group", "a group needs at least one element")
    if any(len(r) != n for r in table) or any(not (0 <= x < n) for r in table for x in r):
        return Report.failed("bad_table", "table must be n x n with entries in 0..n-1")
    if not 0 <= identity < n:
        return Report.failed("bad_identity", f"identity {identity} out of range")
    for a in range(n):
        if table[identity][a] != a or table[a][identity] != a:
            return Report.failed("bad_identity", f"{identity} is not an identity", a)
        if sorted(table[a]) != list(range(n)):
            return Report.failed("no_inverse", f"row {a} is not a permutation", a)
    for a, b, c in product(range(n), repeat=3):
        if table[table[a][b]][c] != table[a][table[b][c]]:
            return Report.failed("not_associative", f"({a}{b}){c} != {a}({b}{c})", a, b, c)
    return Report.passed()


def cyclic(n: int) -> FiniteGroup:
    return FiniteGroup([[(a + b) % n for b in range(n)] for a in range(n)], check=False)


def trivial() -> FiniteGroup:
    return cyclic(1)


def from_permutations(gens: Sequence[Sequence[int]]) -> tuple[FiniteGroup, list[Perm]]:
    """The permutation group generated by ``gens``; element 0 is the identity.

    Returns the group and the permutation of each element.
    """
    if not gens:
        return trivial(), [()]
    n = len(gens[0])
    gens = [tuple(g) for g in gens]
    if any(not is_permutation(g, n) for g in gens):
        raise InputError("not_permutation", "generators must be permutations of one set")
    ident = tuple(range(n))
    elems = [ident]
    index = {ident: 0}
    i = 0
    while i < len(elems):
        for g in gens:
            y = compose(elems[i], g)
            if y not in index:
                index[y] = len(elems)
                elems.append(y)
        i += 1
    table = [[index[compose(a, b)] for b in elems] for a in elems]
    return FiniteGroup(table, check=False), elems


def dihedral(n: int) -> FiniteGroup:
    """Symmetries of the n-gon (order 2n), built on n >= 3 points."""
    if n < 1:
        raise DomainError("bad_order", "n must be >= 1")
    if n == 1:
        return cyclic(2)
    if n == 2:
        return direct_product(cyclic(2), cyclic(2))
    rot = tuple((i + 1) % n for i in range(n))
    ref = tuple((-i) % n for i in range(n))
    return from_permutations([rot, ref])[0]


def symmetric(n: int) -> FiniteGroup:
    if n <= 1:
        return trivial()
    cyc = tuple((i + 1) % n for i in range(n))
    swap = (1, 0) + tuple(range(2, n))
    return from_permutations([cyc, swap])[0]


def direct_product(g: FiniteGroup, h: FiniteGroup) -> FiniteGroup:
    """Element (a, b) has id a * |h| + b."""
    m = h.order
    size = g.order * m
    table = [[g.mul(x // m, y // m) * m + h.mul(x % m, y % m) for y in range(size)] for x in range(size)]
    return FiniteGroup(table, g.identity * m + h.identity, check=False)


def subgroup_as_group(g: FiniteGroup, subset: Iterable[int]) -> tuple[FiniteGroup, list[int]]:
    """Relabel a subgroup as a group in its own right.

    Returns the group and the list sending each new id to the element of ``g``;
    the new identity is 0.
    """
    elems = sorted(subset, key=lambda x: (x != g.identity, x))
    if not g.is_subgroup(elems):
        raise DomainError("not_subgroup", "subset is not a subgroup")
    index = {x: i for i, x in enumerate(elems)}
    table = [[index[g.mul(a, b)] for b in elems] for a in elems]
    return FiniteGroup(table, 0, check=False), elems


def check_hom(src: FiniteGroup, dst: FiniteGroup, images: Sequence[int]) -> Report:
    if len(images) != src.order or any(not 0 <= x < dst.order for x in images):
        return Report.failed("bad_embedding", "image list must have one entry per element")
    for a in src.elements:
        for b in src.elements:
            if images[src.mul(a, b)] != dst.mul(images[a], images[b]):
                return Report.failed("not_homomorphism", f"images of {a}, {b} do not multiply", a, b)
    return Report.passed()


def is_injective(images: Sequence[int]) -> bool:
    return len(set(images)) == len(images)


def extend_to_hom(src: FiniteGroup, given: dict[int, object], mul, identity) -> list:
    """Extend values on some elements of ``src`` to all of the subgroup they
    generate, multiplying with ``mul``.  Raises DomainError("not_homomorphism")
    when the values are inconsistent or do not generate ``src``."""
    values: dict[int, object] = {src.identity: identity}
    frontier = [src.identity]
    while frontier:
        nxt = []
        for x in frontier:
            for g, img in given.items():
                y = src.mul(x, g)
                val = mul(values[x], img)
                if y in values:
                    if values[y] != val:
                        raise DomainError("not_homomorphism", f"inconsistent image of element {y}")
                else:
                    values[y] = val
                    nxt.append(y)
        frontier = nxt
    if len(values) != src.order:
        raise DomainError("not_homomorphism", "given elements do not generate the group")
    out = [values[a] for a in src.elements]
    for a in src.elements:
        for b in src.elements:
            if out[src.mul(a, b)] != mul(out[a], out[b]):
                raise DomainError("not_homomorphism", f"images of {a}, {b} do not multiply")
    return out


def group_from_json(data) -> FiniteGroup:
    """Accepts a table, or one of the shorthands cyclic/dihedral/symmetric/
    product/permutations."""
    try:
        if isinstance(data, dict) and "table" in data:
            return FiniteGroup(data["table"], int(data.get("identity", 0)))
        if isinstance(data, dict) and "cyclic" in data:
            return cyclic(int(data["cyclic"]))
        if isinstance(data, dict) and "dihedral" in data:
            return dihedral(int(data["dihedral"]))
        if isinstance(data, dict) and "symmetric" in data:
            return symmetric(int(data["symmetric"]))
        if isinstance(data, dict) and "product" in data:
            parts = [group_from_json(x) for x in data["product"]]
            out = parts[0]
            for h in parts[1:]:
                out = direct_product(out, h)
            return out
        if isinstance(data, dict) and "permutations" in data:
            return from_permutations(data["permutations"])[0]
    except (TypeError, ValueError, KeyError, IndexError) as exc:
        if isinstance(exc, InputError):
            raise
        raise InputError("bad_group", f"malformed group: {exc}") from None
    raise InputError("bad_group", f"unrecognised group description {data!r}")
