"""Kernels of integer matrices modulo ell.

The matrix is diagonalised over Z by row and column operations, recording only
the column transform ``W`` (``U A W = D``).  Then ``A x = 0 (mod ell)`` iff
``D y = 0`` with ``x = W y``, which reads off a generating set coordinate by
coordinate.  For prime ell the generators are a basis.
"""
from __future__ import annotations

from math import gcd


def _diagonalize(a: list[list[int]], ncols: int) -> tuple[list[int], list[list[int]]]:
    d = [row[:] for row in a]
    m, n = len(d), ncols
    w = [[int(i == j) for j in range(n)] for i in range(n)]

    def swap_cols(j, k):
        for row in d:
            row[j], row[k] = row[k], row[j]
        for row in w:
            row[j], row[k] = row[k], row[j]

    def add_col(dst, src, q):  # col_dst -= q * col_src
        for row in d:
            row[dst] -= q * row[src]
        for row in w:
            row[dst] -= q * row[src]

    diag = []
    for t in range(min(m, n)):
        best = None
        for i in range(t, m):
            for j in range(t, n):
                if d[i][j] and (best is None or abs(d[i][j]) < abs(d[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        i, j = best
        d[t], d[i] = d[i], d[t]
        swap_cols(t, j)
        while True:
            piv = d[t][t]
            dirty = False
            for i in range(t + 1, m):
                if d[i][t]:
                    q = d[i][t] // piv
                    d[i] = [x - q * y for x, y in zip(d[i], d[t])]
                    dirty |= d[i][t] != 0
            for j in range(t + 1, n):
                if d[t][j]:
                    add_col(j, t, d[t][j] // piv)
                    dirty |= d[t][j] != 0
            if not dirty:
                break
            # a remainder survived: move the smallest one onto the pivot and retry
            best = None
            for i in range(t + 1, m):
                if d[i][t] and (best is None or abs(d[i][t]) < abs(best[2])):
                    best = ("r", i, d[i][t])
            for j in range(t + 1, n):
                if d[t][j] and (best is None or abs(d[t][j]) < abs(best[2])):
                    best = ("c", j, d[t][j])
            if best[0] == "r":
                d[t], d[best[1]] = d[best[1]], d[t]
            else:
                swap_cols(t, best[1])
        diag.append(d[t][t])
    return diag, w


def kernel_mod(a: list[list[int]], ncols: int, ell: int) -> list[list[int]]:
    """Generators (reduced mod ell, zero vectors dropped) of ``{x : a x = 0 mod ell}``."""
    if ell < 2:
        raise ValueError("modulus must be >= 2")
    diag, w = _diagonalize(a, ncols)
    gens = []
    for i in range(ncols):
        scale = ell // gcd(diag[i], ell) if i < len(diag) else 1
        vec = [(scale * w[r][i]) % ell for r in range(ncols)]
        if any(vec):
            gens.append(vec)
    return gens


def rank_mod_prime(vectors: list[list[int]], ell: int) -> int:
    """Rank of a list of vectors over the field Z/ell (ell prime)."""
    rows = [[x % ell for x in v] for v in vectors]
    rank, col = 0, 0
    ncols = len(rows[0]) if rows else 0
    while rank < len(rows) and col < ncols:
        piv = next((i for i in range(rank, len(rows)) if rows[i][col]), None)
        if piv is None:
            col += 1
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        inv = pow(rows[rank][col], -1, ell)
        rows[rank] = [(x * inv) % ell for x in rows[rank]]
        for i in range(len(rows)):
            if i != rank and rows[i][col]:
                f = rows[i][col]
                rows[i] = [(x - f * y) % ell for x, y in zip(rows[i], rows[rank])]
        rank += 1
        col += 1
    return rank
