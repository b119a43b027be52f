"""Recursive fixed-point structures on [0,1] and their stabilization ordinals.

A block is the unit interval with both endpoints fixed (``leaf``). ``accum``
fills the blocks [x_n, x_{n+1}], x_n = 1 - 1/n, with copies of a sub-structure
accumulating on the right end; ``accum_list`` does the same with a different
structure in each block; ``concat`` splits the interval into equal blocks.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from .flows import LineFlowSpec
from .ordinal import Ordinal


class Spec:
    pass


@dataclass(frozen=True)
class Leaf(Spec):
    def __str__(self):
        return "leaf"


@dataclass(frozen=True)
class Accum(Spec):
    sub: Spec

    def __str__(self):
        return f"accum({self.sub})"


@dataclass(frozen=True)
class Concat(Spec):
    parts: tuple[Spec, ...]

    def __post_init__(self):
        if not self.parts:
            raise ValueError("concat needs at least one part")

    def __str__(self):
        return f"concat({', '.join(map(str, self.parts))})"


@dataclass(frozen=True)
class AccumList(Spec):
    """Block n carries the n-th part.

    With ``continues`` set, the list goes on forever, each further block
    carrying accum of the one before. Otherwise the last part repeats.
    """

    parts: tuple[Spec, ...]
    continues: bool = False

    def __post_init__(self):
        if not self.parts:
            raise ValueError("accum_list needs at least one part")

    def block(self, n: int) -> Spec:
        if n <= len(self.parts):
            return self.parts[n - 1]
        last = self.parts[-1]
        if not self.continues:
            return last
        for _ in range(n - len(self.parts)):
            last = Accum(last)
        return last

    def __str__(self):
        inner = ", ".join(map(str, self.parts))
        return f"accum_list({inner}{', ...' if self.continues else ''})"


def g_flow(k: int) -> Spec:
    """The structure that stabilizes at k, for k >= 1."""
    if k < 1:
        raise ValueError("k must be positive")
    out: Spec = Leaf()
    for _ in range(k - 1):
        out = Accum(out)
    return out


def g_omega() -> AccumList:
    return AccumList((g_flow(2), g_flow(3)), continues=True)


def x_n(n: int) -> Fraction:
    return 1 - Fraction(1, n)


# --- term syntax -----------------------------------------------------------

_TOKEN = re.compile(r"\s*(leaf|accum_list|accum|concat|\.\.\.|\(|\)|,)")


def parse_spec(text: str) -> Spec:
    tokens = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ValueError(f"unexpected input at column {pos + 1}: {text[pos:pos + 10]!r}")
        tokens.append(m.group(1))
        pos = m.end()
        while pos < len(text) and text[pos].isspace():
            pos += 1

    def expect(i, tok):
        if i >= len(tokens) or tokens[i] != tok:
            raise ValueError(f"expected {tok!r} in {text!r}")
        return i + 1

    def term(i):
        if i >= len(tokens):
            raise ValueError(f"unexpected end of {text!r}")
        head = tokens[i]
        if head == "leaf":
            return Leaf(), i + 1
        if head == "accum":
            i = expect(i + 1, "(")
            sub, i = term(i)
            return Accum(sub), expect(i, ")")
        if head in ("concat", "accum_list"):
            i = expect(i + 1, "(")
            parts, more = [], False
            while True:
                if tokens[i] == "...":
                    if head != "accum_list" or not parts:
                        raise ValueError("'...' only continues a non-empty accum_list")
                    more = True
                    i += 1
                    i = expect(i, ")")
                    break
                sub, i = term(i)
                parts.append(sub)
                if i < len(tokens) and tokens[i] == ",":
                    i += 1
                    continue
                i = expect(i, ")")
                break
            if head == "concat":
                return Concat(tuple(parts)), i
            return AccumList(tuple(parts), more), i
        raise ValueError(f"unexpected token {head!r} in {text!r}")

    spec, end = term(0)
    if end != len(tokens):
        raise ValueError(f"trailing input in {text!r}")
    return spec


# --- truncation --------------------------------------------------------------

def _block_points(spec: Spec, a: Fraction, b: Fraction, depth: int) -> set[Fraction]:
    width = b - a
    if isinstance(spec, Leaf):
        return {a, b}
    if isinstance(spec, Concat):
        k = len(spec.parts)
        cuts = [a + width * Fraction(i, k) for i in range(k + 1)]
        out = set(cuts[:-1])
        for part, lo, hi in zip(spec.parts, cuts, cuts[1:]):
            out |= _block_points(part, lo, hi, depth)
        return out
    if isinstance(spec, (Accum, AccumList)):
        cuts = [a + width * x_n(n) for n in range(1, depth + 2)]
        out = set(cuts)
        for n in range(1, depth + 1):
            sub = spec.sub if isinstance(spec, Accum) else spec.block(n)
            out |= _block_points(sub, cuts[n - 1], cuts[n], depth)
        return out
    raise TypeError(f"not a recursive spec: {spec!r}")


def truncate(spec: Spec, depth: int) -> LineFlowSpec:
    """Finite fixed set obtained by unrolling every accumulation to ``depth`` blocks.

    Accumulation points themselves are left out unless they are also the end
    of an enclosing block.
    """
    if depth < 1:
        raise ValueError("depth must be at least 1")
    return LineFlowSpec("interval", tuple(sorted(_block_points(spec, Fraction(0), Fraction(1), depth))))


# --- stabilization ordinals -------------------------------------------------

def _accumulate(ranks_tail: Ordinal) -> Ordinal:
    # infinitely many blocks of the same rank r
    if ranks_tail.is_finite:
        return ranks_tail + 1
    return ranks_tail.times_omega()


def stabilization_rank(spec: Spec) -> Ordinal:
    """Ordinal at which the prolongational sets at 0 stop growing.

    Rules, by structure:
      leaf -> 1; accum(s) -> rank(s)+1 for finite rank, rank(s)*w otherwise;
      accum_list -> the supremum of the block ranks, with the same
      accumulation rule when the ranks are eventually constant;
      concat -> left fold where a later block of rank r either takes over
      (r larger), adds 1 (finite r) or adds r (infinite r).
    """
    if isinstance(spec, Leaf):
        return Ordinal.of(1)
    if isinstance(spec, Accum):
        return _accumulate(stabilization_rank(spec.sub))
    if isinstance(spec, AccumList):
        ranks = [stabilization_rank(p) for p in spec.parts]
        head = max(ranks[:-1], default=Ordinal())
        last = ranks[-1]
        if spec.continues:
            # each further block is accum of the previous one
            tail = _sup_of_accum_chain(last)
        else:
            tail = _accumulate(last)
        return max(head, tail)
    if isinstance(spec, Concat):
        acc = stabilization_rank(spec.parts[0])
        for part in spec.parts[1:]:
            r = stabilization_rank(part)
            if r > acc:
                acc = r
            elif r.is_finite:
                acc = acc + 1
            else:
                acc = acc + r
        return acc
    raise TypeError(f"not a recursive spec: {spec!r}")


def _sup_of_accum_chain(r: Ordinal) -> Ordinal:
    # r, accum(r), accum(accum(r)), ... is r, r+1, r+2, ... for finite r
    # and r, r*w, r*w*w, ... otherwise, whose supremum w^w is out of range
    if r.is_finite:
        return Ordinal.omega()
    raise ValueError(f"stabilization rank beyond w^w (continued list starting at {r})")


def is_exhibited(spec: Spec) -> bool:
    """Whether the rank of ``spec`` follows from a pattern worked out by hand.

    Covered: accum towers over leaf, the omega list of those towers, one
    omega list followed by finitely many accum(leaf) blocks, two omega lists
    in a row, and the accumulation of omega lists. Anything else uses the
    same rules by extrapolation.
    """
    def tower(s):
        return isinstance(s, Leaf) or (isinstance(s, Accum) and tower(s.sub))

    def omega_list(s):
        if not (isinstance(s, AccumList) and s.continues):
            return False
        ranks = [stabilization_rank(p) for p in s.parts]
        return all(tower(p) for p in s.parts) and all(
            int(ranks[i]) == i + 2 for i in range(len(ranks))
        )

    if tower(spec) or omega_list(spec):
        return True
    if isinstance(spec, Concat) and omega_list(spec.parts[0]):
        rest = spec.parts[1:]
        if all(p == g_flow(2) for p in rest):
            return True
        if len(rest) == 1 and omega_list(rest[0]):
            return True
    if isinstance(spec, Accum) and omega_list(spec.sub):
        return True
    return False
