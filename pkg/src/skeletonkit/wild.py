"""Splitting of wild μ_{p^h}-covers and tame Kummer μ_ℓ-covers over annuli.

Everything is in log_p scale with |p| = 1/p: a disc D(z0, r) with |z0| = p^T
and r = p^S is passed as the pair (T, S).
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from .errors import DomainError
from .exact import INF, Extended, format_extended, is_infinite, is_prime, to_fraction


def _check_prime(p: int) -> None:
    if not is_prime(p):
        raise DomainError("not_prime", f"p = {p} is not prime")


def roots_of_unity_gap(p: int) -> Fraction:
    """log_p of the distance between two distinct p-th roots of unity."""
    _check_prime(p)
    return Fraction(-1, p - 1)


def pushforward_step(t, s, p: int) -> tuple[Fraction, Fraction]:
    """Image of η_{z1, ρ} under z -> z^p, with t = log|z1| and s = log ρ."""
    _check_prime(p)
    t, s = to_fraction(t), to_fraction(s)
    if s >= t:
        raise DomainError("s_not_below_t", "s must be < t")
    if s <= t + roots_of_unity_gap(p):
        return p * t, s - 1 + (p - 1) * t
    return p * t, p * s


def _check_params(T, S, p: int, h: int) -> tuple[Fraction, Fraction]:
    _check_prime(p)
    if h < 0:
        raise DomainError("bad_height", "h must be >= 0")
    T, S = to_fraction(T), to_fraction(S)
    if S >= T:
        raise DomainError("s_not_below_t", "S must be < T")
    return T, S


def fiber_count(T, S, p: int, h: int) -> int:
    """Number of points of the fibre of z -> z^{p^h} above η_{z0, r}."""
    T, S = _check_params(T, S, p, h)
    d = S - T
    low = Fraction(p, p - 1)  # p/(p-1)
    high = Fraction(1, p - 1)
    if h == 0 or d >= -low:
        return 1
    for i in range(1, h):
        if -i - low <= d < -i - high:
            return p ** i
    return p ** h


def fiber_count_oracle(T, S, p: int, h: int) -> int:
    """Same count by peeling one p-th root at a time.

    At each level the preimage radius is found by inverting ``pushforward_step``
    (checked forward), the p preimage centres sit pairwise at distance
    |z̃0|·|ξ − ξ'|, and the preimage points coincide exactly when the radius
    reaches that distance.
    """
    T, S = _check_params(T, S, p, h)
    total = 1
    for _ in range(h):
        t = T / p
        gap = t + roots_of_unity_gap(p)
        candidates = [S + 1 - (p - 1) * t, S / p]
        pre = [c for c in candidates if c < t and pushforward_step(t, c, p) == (T, S)]
        if not pre:
            raise AssertionError(f"no preimage radius for {(T, S)}")
        s = min(pre)
        if s < gap:
            total *= p
        else:
            # one point; both branches agree at the threshold
            s = max(pre)
        T, S = t, s
    return total


@dataclass(frozen=True)
class TorsorLayout:
    """Fibre count of a μ_{p^h}-torsor along an annulus skeleton of length L,
    as a step function of the distance δ to the y-end."""

    length: Fraction
    eps: Fraction
    p: int
    h: int
    breakpoints: tuple[Fraction, ...]
    counts: tuple[int, ...]

    def segments(self) -> list[tuple[Fraction, Fraction, int]]:
        """(lo, hi, count): the count holds on (lo, hi], except the last
        segment, which is open at L."""
        ends = (Fraction(0),) + self.breakpoints + (self.length,)
        return [(ends[i], ends[i + 1], c) for i, c in enumerate(self.counts)]

    def count_at(self, delta) -> int:
        delta = to_fraction(delta)
        if not (0 < delta < self.length):
            raise DomainError("bad_offset", f"δ = {delta} outside (0, {self.length})")
        for i, b in enumerate(self.breakpoints):
            if delta <= b:
                return self.counts[i]
        return self.counts[-1]

    def to_json(self) -> dict:
        return {
            "L": format_extended(self.length), "eps": format_extended(self.eps),
            "p": self.p, "h": self.h,
            "breakpoints": [format_extended(b) for b in self.breakpoints],
            "segments": [{"from": format_extended(lo), "to": format_extended(hi), "count": c}
                         for lo, hi, c in self.segments()],
        }

    def ascii(self, width: int = 60) -> str:
        """Band diagram from the y-end (left) to the x-end (right)."""
        segs = self.segments()
        cols = [max(len(str(c)) + 2, round(width * (hi - lo) / self.length)) for lo, hi, c in segs]
        bar = "|".join(str(c).center(w, "=") for (_, _, c), w in zip(segs, cols))
        axis = "0"
        pos = 0
        for (_, hi, _), w in zip(segs, cols):
            pos += w + 1
            label = format_extended(hi)
            axis = axis.ljust(pos) + label
        return f"y |{bar}| x\n   {axis}\n"

    def dot(self) -> str:
        ends = (Fraction(0),) + self.breakpoints + (self.length,)
        names = ["y"] + [f"b{i}" for i in range(1, len(ends) - 1)] + ["x"]
        lines = ["graph layout {", "  rankdir=LR;"]
        for n, d in zip(names, ends):
            lines.append(f'  {n} [label="{n}\\nδ={format_extended(d)}"];')
        for i, (lo, hi, c) in enumerate(self.segments()):
            lines.append(f'  {names[i]} -- {names[i + 1]} [label="{c} point(s), length {format_extended(hi - lo)}", penwidth={1 + i}];')
        lines.append("}")
        return "\n".join(lines) + "\n"


def split_annulus_layout(L, eps, p: int, h: int) -> TorsorLayout:
    _check_prime(p)
    if h < 0:
        raise DomainError("bad_height", "h must be >= 0")
    L, eps = to_fraction(L), to_fraction(eps)
    if not L > h - 1:
        raise DomainError("length_too_short", f"need L > h - 1, got L = {L}, h = {h}")
    if L <= 0:
        raise DomainError("length_too_short", "L must be positive")
    if eps <= 0:
        raise DomainError("eps_not_positive", "ε must be > 0")
    if eps >= Fraction(p, p - 1):
        raise DomainError("eps_too_large", "need ε < p/(p-1)")
    if eps >= L - (h - 1):
        raise DomainError("eps_exceeds_room", "need ε < L - (h - 1)")
    # count(δ) = fiber_count(0, ε - p/(p-1) - δ) jumps exactly at δ = ε + j
    breakpoints = tuple(eps + j for j in range(h))
    counts = tuple(p ** i for i in range(h + 1))
    return TorsorLayout(L, eps, p, h, breakpoints, counts)


def layout_count(L, eps, p: int, h: int, delta) -> int:
    """Direct evaluation of the fibre count at distance δ from the y-end."""
    return fiber_count(0, to_fraction(eps) - Fraction(p, p - 1) - to_fraction(delta), p, h)


@dataclass(frozen=True)
class KummerCoverSummary:
    ell: int
    cls: int
    components: int
    component_length: Extended
    component_degree: int

    def to_json(self) -> dict:
        return {"ell": self.ell, "class": self.cls, "components": self.components,
                "component_length": format_extended(self.component_length),
                "component_degree": self.component_degree}


def kummer_cover(L, ell: int, c: int) -> KummerCoverSummary:
    """The μ_ℓ-torsor of class c over an annulus of length L (possibly inf)."""
    if ell < 2:
        raise DomainError("bad_modulus", "ℓ must be >= 2")
    if not 0 <= c < ell:
        raise DomainError("bad_class", f"class must lie in [0, {ell})")
    length = L if is_infinite(L) else to_fraction(L)
    if not is_infinite(length) and length <= 0:
        raise DomainError("bad_length", "L must be positive")
    k = gcd(c, ell)
    comp_len = INF if is_infinite(length) else length * k / ell
    return KummerCoverSummary(ell, c, k, comp_len, ell // k)
