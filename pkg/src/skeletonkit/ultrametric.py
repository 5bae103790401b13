"""Type-1 and type-2 points of the Berkovich projective line.

A point ``eta(a, r)`` is stored as a center id and ``log_p r``.  Centers live
in a :class:`CenterSpace`, which only has to answer ``log_p |a - b|``; the
field itself is never modelled.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Hashable, Mapping, Sequence

from .errors import DomainError, InputError, Report
from .exact import MINUS_INF, Extended, format_extended, is_infinite, parse_extended


class CenterSpace:
    """Finite set of centers with a table of pairwise ``log_p |a - b|``."""

    def __init__(self, centers: Sequence[Hashable], logdist: Mapping[tuple, Extended]) -> None:
        self.centers = tuple(centers)
        self._table = dict(logdist)
        self._index = {c: i for i, c in enumerate(self.centers)}

    @classmethod
    def from_matrix(cls, centers: Sequence[Hashable], rows: Sequence[Sequence]) -> "CenterSpace":
        centers = tuple(centers)
        if len(rows) != len(centers) or any(len(r) != len(centers) for r in rows):
            raise InputError("bad_center_space", "logdist must be a square matrix over the centers")
        table = {}
        for i, a in enumerate(centers):
            for j, b in enumerate(centers):
                table[a, b] = parse_extended(rows[i][j])
        return cls(centers, table)

    def __contains__(self, a) -> bool:
        return a in self._index

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, CenterSpace)
            and self.centers == other.centers
            and self._table == other._table
        )

    def __hash__(self) -> int:
        return hash(self.centers)

    def logdist(self, a, b) -> Extended:
        try:
            return self._table[a, b]
        except KeyError:
            raise DomainError("unknown_center", f"no distance recorded for ({a!r}, {b!r})") from None

    def to_json(self) -> dict:
        return {
            "centers": list(self.centers),
            "logdist": [[format_extended(self.logdist(a, b)) for b in self.centers] for a in self.centers],
        }

    @classmethod
    def from_json(cls, data: dict) -> "CenterSpace":
        try:
            return cls.from_matrix(data["centers"], data["logdist"])
        except (KeyError, TypeError) as exc:
            raise InputError("bad_center_space", f"malformed CenterSpace JSON: {exc}") from None


def validate_center_space(space: CenterSpace) -> Report:
    """Check diagonal, symmetry and the ultrametric inequality, in that order."""
    cs = space.centers
    for a in cs:
        if space.logdist(a, a) != MINUS_INF:
            return Report.failed("nonzero_diagonal", f"logdist({a}, {a}) must be -inf", a)
    for i, a in enumerate(cs):
        for b in cs[i + 1:]:
            if space.logdist(a, b) != space.logdist(b, a):
                return Report.failed("asymmetric", f"logdist({a}, {b}) != logdist({b}, {a})", a, b)
    for a in cs:
        for b in cs:
            ab = space.logdist(a, b)
            for c in cs:
                if space.logdist(a, c) > max(ab, space.logdist(b, c)):
                    return Report.failed(
                        "ultrametric_violation",
                        f"logdist({a}, {c}) > max(logdist({a}, {b}), logdist({b}, {c}))",
                        a, b, c,
                    )
    return Report.passed()


@dataclass(frozen=True)
class DiscPoint:
    """``eta(center, p**log_radius)``; ``log_radius == MINUS_INF`` is a rigid point."""

    space: CenterSpace
    center: Hashable
    log_radius: Extended

    def __post_init__(self):
        if self.center not in self.space:
            raise DomainError("unknown_center", f"{self.center!r} is not a center of the space")
        if not is_infinite(self.log_radius):
            object.__setattr__(self, "log_radius", Fraction(self.log_radius))
        elif self.log_radius != MINUS_INF:
            raise DomainError("bad_radius", "log-radius +inf is not a point of the line")

    @property
    def point_type(self) -> int:
        return 1 if self.log_radius == MINUS_INF else 2

    def to_json(self) -> dict:
        return {"center": self.center, "log_radius": format_extended(self.log_radius)}

    @classmethod
    def from_json(cls, space: CenterSpace, data: dict) -> "DiscPoint":
        try:
            return cls(space, data["center"], parse_extended(data["log_radius"]))
        except (KeyError, TypeError) as exc:
            raise InputError("bad_point", f"malformed DiscPoint JSON: {exc}") from None

    # the dataclass eq would compare centers, which is not point equality
    __eq__ = object.__eq__
    __hash__ = object.__hash__


def _same_space(x: DiscPoint, y: DiscPoint) -> None:
    if x.space is not y.space and x.space != y.space:
        raise DomainError("space_mismatch", "points live over different center spaces")


def point_eq(x: DiscPoint, y: DiscPoint) -> bool:
    """Equality of the underlying semi-norms: same radius, and each center in the other's disc."""
    _same_space(x, y)
    return x.log_radius == y.log_radius and x.space.logdist(x.center, y.center) <= x.log_radius


def metric_d(x: DiscPoint, y: DiscPoint) -> Fraction:
    """Path metric on type-2 points, in ``log_p`` units."""
    _same_space(x, y)
    if x.point_type != 2 or y.point_type != 2:
        raise DomainError("rigid_point", "the metric is only defined between type-2 points")
    m = x.space.logdist(x.center, y.center)
    s, t = x.log_radius, y.log_radius
    if m >= max(s, t):
        return (m - s) + (m - t)
    return abs(s - t)
