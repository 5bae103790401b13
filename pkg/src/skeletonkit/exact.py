"""Exact rationals extended by signed infinities, plus small integer helpers.

Nothing here touches floating point.  ``MINUS_INF`` stands for ``log 0`` (the
radius of a rigid point, the distance from a center to itself) and ``INF`` for
the length of an annulus of infinite modulus.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Union

from .errors import InputError


class _Infinity:
    __slots__ = ("sign",)

    def __init__(self, sign: int) -> None:
        self.sign = sign

    def __repr__(self) -> str:
        return "INF" if self.sign > 0 else "MINUS_INF"

    def __hash__(self) -> int:
        return hash(("inf", self.sign))

    def __eq__(self, other: object) -> bool:
        return isinstance(other, _Infinity) and other.sign == self.sign

    def __lt__(self, other: object) -> bool:
        if isinstance(other, _Infinity):
            return self.sign < other.sign
        return self.sign < 0

    def __le__(self, other: object) -> bool:
        return self == other or self < other

    def __gt__(self, other: object) -> bool:
        if isinstance(other, _Infinity):
            return self.sign > other.sign
        return self.sign > 0

    def __ge__(self, other: object) -> bool:
        return self == other or self > other

    def __neg__(self) -> "_Infinity":
        return MINUS_INF if self.sign > 0 else INF

    def __add__(self, other: object) -> "_Infinity":
        if isinstance(other, _Infinity) and other.sign != self.sign:
            raise ArithmeticError("INF + MINUS_INF is undefined")
        return self

    __radd__ = __add__

    def __sub__(self, other: object) -> "_Infinity":
        if isinstance(other, _Infinity):
            return self + (-other)
        return self

    def __rsub__(self, other: object) -> "_Infinity":
        return (-self) + other

    def __mul__(self, other: object) -> "_Infinity":
        if isinstance(other, _Infinity):
            return INF if self.sign == other.sign else MINUS_INF
        if other > 0:
            return self
        if other < 0:
            return -self
        raise ArithmeticError("0 * infinity is undefined")

    __rmul__ = __mul__

    def __truediv__(self, other: object) -> "_Infinity":
        if isinstance(other, _Infinity) or other == 0:
            raise ArithmeticError("undefined quotient")
        return self if other > 0 else -self

    def __reduce__(self):
        return (_infinity, (self.sign,))


def _infinity(sign: int) -> _Infinity:
    return INF if sign > 0 else MINUS_INF


INF = _Infinity(1)
MINUS_INF = _Infinity(-1)

#: A log-value: an exact rational or one of the two infinities.
Extended = Union[Fraction, _Infinity]


def is_infinite(x: object) -> bool:
    return isinstance(x, _Infinity)


def to_fraction(x) -> Fraction:
    """Coerce ints, Fractions and ``"n/d"`` strings to a Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise InputError("bad_rational", f"not a rational: {x!r}")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        try:
            return Fraction(x.strip())
        except (ValueError, ZeroDivisionError):
            raise InputError("bad_rational", f"not a rational: {x!r}") from None
    raise InputError("bad_rational", f"not a rational: {x!r}")


def parse_extended(x) -> Extended:
    """Parse ``"n/d"``, ``"inf"`` or ``"-inf"`` (also accepts ints/Fractions)."""
    if isinstance(x, _Infinity):
        return x
    if isinstance(x, str):
        s = x.strip().lower()
        if s in ("inf", "+inf"):
            return INF
        if s == "-inf":
            return MINUS_INF
    return to_fraction(x)


def format_extended(x: Extended) -> str:
    """Serialize in lowest terms with a positive denominator."""
    if isinstance(x, _Infinity):
        return "inf" if x.sign > 0 else "-inf"
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def prime_power(q: int) -> tuple[int, int] | None:
    """Return ``(p, f)`` with ``q == p**f`` and p prime, or None."""
    if q < 2:
        return None
    p = 2
    while p * p <= q and q % p:
        p += 1
    if q % p:
        p = q
    f, r = 0, q
    while r % p == 0:
        r //= p
        f += 1
    return (p, f) if r == 1 else None
