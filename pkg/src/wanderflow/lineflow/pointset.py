"""Finite unions of intervals with exact rational endpoints."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable


@dataclass(frozen=True, order=True)
class Interval:
    lo: Fraction
    hi: Fraction
    lo_closed: bool = True
    hi_closed: bool = True

    def __post_init__(self):
        object.__setattr__(self, "lo", Fraction(self.lo))
        object.__setattr__(self, "hi", Fraction(self.hi))
        if self.lo > self.hi or (self.lo == self.hi and not (self.lo_closed and self.hi_closed)):
            raise ValueError(f"empty interval {self}")

    def contains(self, x) -> bool:
        if x < self.lo or x > self.hi:
            return False
        if x == self.lo and not self.lo_closed:
            return False
        if x == self.hi and not self.hi_closed:
            return False
        return True

    def meets_open(self, a, b) -> bool:
        """Whether this interval intersects the open interval (a, b)."""
        if a >= b:
            return False
        return self.hi > a and self.lo < b and not (
            (self.hi == a) or (self.lo == b)
        )

    def __str__(self):
        if self.lo == self.hi:
            return "{" + str(self.lo) + "}"
        return f"{'[' if self.lo_closed else '('}{self.lo}, {self.hi}{']' if self.hi_closed else ')'}"


@dataclass(frozen=True)
class PointSet1D:
    """Disjoint, sorted, maximal components."""

    parts: tuple[Interval, ...] = ()

    @classmethod
    def build(cls, parts: Iterable[Interval]) -> "PointSet1D":
        items = sorted(parts, key=lambda i: (i.lo, not i.lo_closed))
        merged: list[Interval] = []
        for cur in items:
            if merged:
                last = merged[-1]
                touching = cur.lo < last.hi or (
                    cur.lo == last.hi and (cur.lo_closed or last.hi_closed)
                )
                if touching:
                    if cur.hi > last.hi:
                        hi, hi_closed = cur.hi, cur.hi_closed
                    elif cur.hi == last.hi:
                        hi, hi_closed = last.hi, last.hi_closed or cur.hi_closed
                    else:
                        hi, hi_closed = last.hi, last.hi_closed
                    lo_closed = last.lo_closed or (cur.lo == last.lo and cur.lo_closed)
                    merged[-1] = Interval(last.lo, hi, lo_closed, hi_closed)
                    continue
            merged.append(cur)
        return cls(tuple(merged))

    @classmethod
    def empty(cls) -> "PointSet1D":
        return cls(())

    @classmethod
    def point(cls, x) -> "PointSet1D":
        return cls((Interval(x, x),))

    @classmethod
    def points(cls, xs) -> "PointSet1D":
        return cls.build(Interval(x, x) for x in xs)

    @classmethod
    def closed(cls, a, b) -> "PointSet1D":
        return cls((Interval(a, b),))

    def __or__(self, other: "PointSet1D") -> "PointSet1D":
        return PointSet1D.build(self.parts + other.parts)

    def __contains__(self, x) -> bool:
        return any(i.contains(x) for i in self.parts)

    def __bool__(self) -> bool:
        return bool(self.parts)

    def meets_open(self, a, b) -> bool:
        return any(i.meets_open(a, b) for i in self.parts)

    def issubset(self, other: "PointSet1D") -> bool:
        return (self | other) == other

    def __str__(self):
        if not self.parts:
            return "{}"
        return " U ".join(str(i) for i in self.parts)
