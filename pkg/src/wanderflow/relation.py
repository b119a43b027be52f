"""Finite relation algebra over labelled nodes.

Closures, down-sets, smallest streams and recurrence detection. Every value
here is immutable; operations return new objects.
"""
from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from typing import Iterable

Pair = tuple[str, str]


class UnknownLabelError(KeyError):
    pass


@dataclass(frozen=True)
class NodeSet:
    labels: tuple[str, ...]

    def __post_init__(self):
        labels = tuple(sorted(set(self.labels)))
        if len(labels) != len(self.labels):
            raise ValueError("duplicate labels in node set")
        object.__setattr__(self, "labels", labels)

    @classmethod
    def of(cls, labels: Iterable[str]) -> "NodeSet":
        return cls(tuple(sorted(set(labels))))

    def __contains__(self, label) -> bool:
        return label in self.labels

    def __iter__(self):
        return iter(self.labels)

    def __len__(self) -> int:
        return len(self.labels)


@dataclass(frozen=True)
class Relation:
    base: NodeSet
    pairs: frozenset[Pair]

    def __post_init__(self):
        pairs = frozenset(self.pairs)
        for a, b in pairs:
            if a not in self.base or b not in self.base:
                raise UnknownLabelError(f"pair ({a}, {b}) leaves the base set")
        object.__setattr__(self, "pairs", pairs)

    @classmethod
    def build(cls, pairs: Iterable[Pair], base: Iterable[str] = ()) -> "Relation":
        pairs = frozenset(pairs)
        labels = set(base)
        for a, b in pairs:
            labels.update((a, b))
        return cls(NodeSet.of(labels), pairs)

    def successors(self) -> dict[str, set[str]]:
        out: dict[str, set[str]] = defaultdict(set)
        for a, b in self.pairs:
            out[a].add(b)
        return out

    def sorted_pairs(self) -> list[Pair]:
        return sorted(self.pairs)

    def __contains__(self, pair) -> bool:
        return pair in self.pairs

    def __le__(self, other: "Relation") -> bool:
        return self.pairs <= other.pairs


@dataclass(frozen=True)
class QuasiOrder(Relation):
    """Reflexive and transitive relation."""

    def __post_init__(self):
        super().__post_init__()
        for x in self.base:
            if (x, x) not in self.pairs:
                raise ValueError(f"quasi-order is not reflexive at {x}")


def _reach(succ: dict[str, set[str]], start: str) -> set[str]:
    # nodes reachable from start by one or more steps
    seen: set[str] = set()
    stack = list(succ.get(start, ()))
    while stack:
        v = stack.pop()
        if v in seen:
            continue
        seen.add(v)
        stack.extend(succ.get(v, set()) - seen)
    return seen


def transitive_closure(r: Relation) -> Relation:
    succ = r.successors()
    pairs = {(a, b) for a in r.base for b in _reach(succ, a)}
    return Relation(r.base, frozenset(pairs))


def smallest_stream(r: Relation) -> QuasiOrder:
    # on a finite discrete set, closedness is automatic: the smallest
    # stream is just the reflexive-transitive closure
    closed = transitive_closure(r).pairs | {(x, x) for x in r.base}
    return QuasiOrder(r.base, frozenset(closed))


def down_set(q: Relation, p: str) -> set[str]:
    if p not in q.base:
        raise UnknownLabelError(p)
    return {b for a, b in q.pairs if a == p}


def transpose(r: Relation) -> Relation:
    return Relation(r.base, frozenset((b, a) for a, b in r.pairs))


def recurrent_nodes(r: Relation) -> set[str]:
    succ = r.successors()
    return {x for x in r.base if x in _reach(succ, x)}
