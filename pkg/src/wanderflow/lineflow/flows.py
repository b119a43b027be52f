"""Prolongational limit sets of flows on [0,1] or the circle [0,1) mod 1."""
from __future__ import annotations

from bisect import bisect_left, bisect_right
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .pointset import Interval, PointSet1D

ONE = Fraction(1)


@dataclass(frozen=True)
class LineFlowSpec:
    """Non-fixed points move rightwards (direction +1) or leftwards (-1).

    On the interval, an endpoint that is not listed as fixed is an open end:
    orbits run into it without reaching it.
    """

    topology: str
    fixed: tuple[Fraction, ...] = ()
    direction: int = 1

    def __post_init__(self):
        fixed = tuple(Fraction(x) for x in self.fixed)
        if self.topology not in ("interval", "circle"):
            raise ValueError(f"unknown topology {self.topology!r}")
        if any(fixed[i] >= fixed[i + 1] for i in range(len(fixed) - 1)):
            raise ValueError("fixed points must be strictly increasing")
        upper_ok = (lambda x: x <= 1) if self.topology == "interval" else (lambda x: x < 1)
        if any(x < 0 or not upper_ok(x) for x in fixed):
            raise ValueError("fixed point outside the space")
        if self.direction not in (1, -1):
            raise ValueError("direction must be +1 or -1")
        object.__setattr__(self, "fixed", fixed)

    def check_point(self, x) -> Fraction:
        x = Fraction(x)
        hi_ok = x <= 1 if self.topology == "interval" else x < 1
        if x < 0 or not hi_ok:
            raise ValueError(f"point {x} outside the {self.topology}")
        return x


def reverse_spec(spec: LineFlowSpec) -> LineFlowSpec:
    return LineFlowSpec(spec.topology, spec.fixed, -spec.direction)


def _flip(spec: LineFlowSpec):
    """Reflection that turns a leftward flow into a rightward one."""
    if spec.topology == "interval":
        f = lambda x: ONE - x  # noqa: E731
    else:
        f = lambda x: (-x) % 1  # noqa: E731
    return LineFlowSpec(spec.topology, sorted(f(x) for x in spec.fixed), 1), f


def _flip_set(s: PointSet1D, topology: str) -> PointSet1D:
    parts = []
    for i in s.parts:
        if topology == "interval":
            parts.append(Interval(ONE - i.hi, ONE - i.lo, i.hi_closed, i.lo_closed))
            continue
        lo, hi = (-i.hi) % 1, (-i.lo) % 1
        if i.lo == 0 and i.hi != 0:
            # [0, b] maps to {0} and [1-b, 1)
            if i.lo_closed:
                parts.append(Interval(0, 0))
            parts.append(Interval(lo, ONE, i.hi_closed, False))
        elif i.lo == 0:
            parts.append(Interval(0, 0))
        else:
            parts.append(Interval(lo, hi, i.hi_closed, i.lo_closed))
    return PointSet1D.build(parts)


def _arc(spec: LineFlowSpec, a: Fraction, b: Fraction) -> PointSet1D:
    # closed arc from a forward to b
    if spec.topology == "interval" or a < b:
        return PointSet1D.closed(a, b)
    if a == b:
        return full_space(spec)
    return PointSet1D.build([Interval(a, ONE, True, False), Interval(0, b)])


def full_space(spec: LineFlowSpec) -> PointSet1D:
    if spec.topology == "circle":
        return PointSet1D((Interval(0, ONE, True, False),))
    return PointSet1D.closed(0, 1)


def _next_fixed(spec: LineFlowSpec, x: Fraction, strict: bool = True):
    fixed = spec.fixed
    i = bisect_right(fixed, x) if strict else bisect_left(fixed, x)
    if i < len(fixed):
        return fixed[i]
    if spec.topology == "circle" and fixed:
        return fixed[0]
    return None


def lambda1_point(spec: LineFlowSpec, x) -> PointSet1D:
    x = spec.check_point(x)
    if spec.direction < 0:
        flipped, f = _flip(spec)
        return _flip_set(lambda1_point(flipped, f(x)), spec.topology)
    if spec.topology == "circle" and not spec.fixed:
        # rigid rotation: every point is recurrent
        return full_space(spec)
    if x in spec.fixed:
        nxt = _next_fixed(spec, x)
        if nxt is not None:
            return _arc(spec, x, nxt)
        # last fixed point of the interval: orbits to its right run to the end
        if x == 1:
            return PointSet1D.point(x)
        return PointSet1D((Interval(x, ONE, True, 1 in spec.fixed),))
    nxt = _next_fixed(spec, x)
    return PointSet1D.empty() if nxt is None else PointSet1D.point(nxt)


def _gaps(spec: LineFlowSpec):
    """Open gaps between consecutive fixed points, with the point they drain into."""
    fixed = list(spec.fixed)
    if spec.topology == "circle":
        if not fixed:
            return
        for a, b in zip(fixed, fixed[1:]):
            yield a, b, b
        last, first = fixed[-1], fixed[0]
        # the wrapping gap, split at 0
        yield last, ONE, first
        yield Fraction(-1), first, first  # (-1, first) stands for [0, first)
        return
    points = [Fraction(-1)] + fixed + [Fraction(2)]
    for a, b in zip(points, points[1:]):
        yield a, b, (b if b <= 1 else None)


def lambda1_set(spec: LineFlowSpec, s: PointSet1D) -> PointSet1D:
    if spec.direction < 0:
        flipped, _ = _flip(spec)
        return _flip_set(lambda1_set(flipped, _flip_set(s, spec.topology)), spec.topology)
    if spec.topology == "circle" and not spec.fixed:
        return full_space(spec) if s else PointSet1D.empty()
    out = PointSet1D.empty()
    for x in spec.fixed:
        if x in s:
            out = out | lambda1_point(spec, x)
    for a, b, sink in _gaps(spec):
        if sink is not None and s.meets_open(a, b):
            out = out | PointSet1D.point(sink)
    return out


def lambda1k_point(spec: LineFlowSpec, x, k: int) -> PointSet1D:
    if k < 1:
        raise ValueError("k must be a positive integer")
    cur = lambda1_point(spec, x)
    for _ in range(k - 1):
        cur = lambda1_set(spec, cur)
    return cur


def nonwandering(spec: LineFlowSpec) -> PointSet1D:
    if spec.topology == "circle" and not spec.fixed:
        return full_space(spec)
    return PointSet1D.points(spec.fixed)


def omega_limit(spec: LineFlowSpec, x) -> PointSet1D:
    x = spec.check_point(x)
    if spec.direction < 0:
        flipped, f = _flip(spec)
        return _flip_set(omega_limit(flipped, f(x)), spec.topology)
    if spec.topology == "circle" and not spec.fixed:
        return full_space(spec)
    if x in spec.fixed:
        return PointSet1D.point(x)
    nxt = _next_fixed(spec, x)
    return PointSet1D.empty() if nxt is None else PointSet1D.point(nxt)


def forward_orbit(spec: LineFlowSpec, x) -> PointSet1D:
    """Forward orbit of x together with x itself."""
    x = spec.check_point(x)
    if spec.direction < 0:
        flipped, f = _flip(spec)
        return _flip_set(forward_orbit(flipped, f(x)), spec.topology)
    if x in spec.fixed:
        return PointSet1D.point(x)
    if spec.topology == "circle" and not spec.fixed:
        return full_space(spec)
    nxt = _next_fixed(spec, x)
    if nxt is None:
        return PointSet1D((Interval(x, ONE, True, False),))
    if nxt > x:
        return PointSet1D((Interval(x, nxt, True, False),))
    return PointSet1D.build([Interval(x, ONE, True, False), Interval(0, nxt, True, False)])


def prolongation(spec: LineFlowSpec, x) -> PointSet1D:
    """Points prolongationally downstream of x: forward orbit plus first limit set."""
    return forward_orbit(spec, x) | lambda1_point(spec, x)


def interval_spec(fixed: Iterable, topology: str = "interval") -> LineFlowSpec:
    return LineFlowSpec(topology, tuple(sorted(Fraction(x) for x in fixed)))
