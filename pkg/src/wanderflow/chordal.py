"""Chordal systems of planar foliations.

Every leaf of a plane foliation is drawn as a chord of a disc whose boundary
collects the ends of all leaves. ``a|b|c`` says that chord b separates a from
c; otherwise the three chords bound a common region, and ``|a,b,c|^+`` says
that a, b, c follow each other counterclockwise around it.

The derivation builds that boundary word directly: each band is drawn as a
rectangle with motion to the right, the end on the left of the motion on
top, and the rectangles of neighbouring bands are glued in along the
separatrices.
"""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction

from .orbitspace import FoliationModel, ModelError, require_valid
from .relation import NodeSet, UnknownLabelError

Triple = tuple[str, str, str]


@dataclass(frozen=True)
class ChordalSystem:
    elements: NodeSet
    between: frozenset[Triple]
    cyclic_pos: frozenset[Triple]
    # the > relation among the separatrices present, and the kind of each element
    precedes: frozenset[tuple[str, str]] = frozenset()
    kinds: tuple[tuple[str, str], ...] = ()
    _mid: dict = field(default=None, init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        mid = {}
        for a, b, c in self.between:
            mid.setdefault(frozenset((a, b, c)), set()).add(b)
        object.__setattr__(self, "_mid", mid)

    def kind(self, x: str) -> str:
        return dict(self.kinds).get(x, "element")

    def middles(self, a: str, b: str, c: str) -> set[str]:
        return self._mid.get(frozenset((a, b, c)), set())

    def is_between(self, a: str, b: str, c: str) -> bool:
        return (a, b, c) in self.between

    def orientation(self, a: str, b: str, c: str) -> int:
        """+1 for |a,b,c|^+, -1 for |a,c,b|^+, 0 when neither holds."""
        if (a, b, c) in self.cyclic_pos:
            return 1
        if (a, c, b) in self.cyclic_pos:
            return -1
        return 0


def _rotations(t: Triple):
    a, b, c = t
    return [(a, b, c), (b, c, a), (c, a, b)]


def flip(cs: ChordalSystem) -> ChordalSystem:
    """Same system with every cyclic orientation reversed."""
    return ChordalSystem(
        cs.elements, cs.between, frozenset((a, c, b) for a, b, c in cs.cyclic_pos), cs.precedes, cs.kinds
    )


# --- derivation ---------------------------------------------------------------


def _left_end(band) -> str:
    for tag, end in band.ends():
        if end:
            side = end[0].side
            return tag if side == "R" else ("hi" if tag == "lo" else "lo")
    return "hi"


def default_reps(m: FoliationModel) -> list[str]:
    """Separatrices, orbits, and every band that has no orbit of its own."""
    with_orbits = {o.band for o in m.orbits}
    return (
        list(m.separatrices)
        + [o.id for o in m.orbits]
        + [b.id for b in m.bands if b.id not in with_orbits]
    )


def _boundary_word(m: FoliationModel, reps: list[str]) -> list[str]:
    """Labels met going counterclockwise around the disc; separatrices appear twice."""
    sides = {}
    for band_id, tag, _, att in m.attachments():
        sides[(att.sep, att.side)] = band_id

    in_band: dict[str, list[tuple[Fraction, str]]] = {}
    for r in reps:
        kind = m.kind(r)
        if kind == "band":
            in_band.setdefault(r, []).append((Fraction(1, 2), r))
        elif kind == "orbit":
            o = m.orbit(r)
            in_band.setdefault(o.band, []).append((o.param, r))

    def cycle(band_id):
        band = m.band(band_id)
        top = _left_end(band)
        bottom = "lo" if top == "hi" else "hi"
        reps_here = sorted(
            ((p if top == "hi" else 1 - p), r) for p, r in in_band.get(band_id, [])
        )
        for (p1, r1), (p2, r2) in zip(reps_here, reps_here[1:]):
            if p1 == p2:
                raise ModelError(f"{r1} and {r2} name the same orbit of band {band_id}")
        word = [("sep", a.sep, a.side) for a in band.end(bottom)]
        word += [("rep", r, None) for _, r in reps_here]
        word += [("sep", a.sep, a.side) for a in reversed(band.end(top))]
        word += [("rep", r, None) for _, r in reversed(reps_here)]
        return word

    out: list[str] = []
    visited: set[str] = set()

    def walk(band_id, skip):
        visited.add(band_id)
        word = cycle(band_id)
        if skip is not None:
            i = next(k for k, item in enumerate(word) if item[0] == "sep" and item[1] == skip)
            word = word[i + 1:] + word[:i]
        for what, name, side in word:
            out.append(name)
            if what == "sep":
                other = sides.get((name, "L" if side == "R" else "R"))
                if other is not None and other not in visited:
                    walk(other, name)
                out.append(name)

    if m.bands:
        walk(m.bands[0].id, None)
    missing = [b.id for b in m.bands if b.id not in visited]
    if missing:
        raise ModelError(f"bands {', '.join(missing)} are not connected to {m.bands[0].id}")
    return out


def derive_chordal(m: FoliationModel, reps: list[str] | None = None) -> ChordalSystem:
    """Chordal system on ``reps`` (separatrices, orbits, or bands standing for their middle orbit)."""
    require_valid(m)
    if m.surface != "plane":
        raise ModelError("unsupported: chordal systems are only derived for plane models")
    if reps is None:
        reps = default_reps(m)
    reps = list(reps)
    if len(set(reps)) != len(reps):
        raise ModelError("reps must be distinct")
    for r in reps:
        if m.kind(r) is None:
            raise UnknownLabelError(r)

    word = _boundary_word(m, reps)
    pos: dict[str, list[int]] = {}
    for i, name in enumerate(word):
        pos.setdefault(name, []).append(i)
    for r in reps:
        if r not in pos:
            raise ModelError(f"{r} is not reachable from the rest of the model")

    def inside(x, b):
        lo, hi = pos[b][0], pos[b][-1]
        return lo < pos[x][0] < hi

    between, cyclic = set(), set()
    for trip in itertools.combinations(reps, 3):
        found = False
        for i in range(3):
            b = trip[i]
            a, c = (trip[j] for j in range(3) if j != i)
            if inside(a, b) != inside(c, b):
                between.update({(a, b, c), (c, b, a)})
                found = True
        if not found:
            a, b, c = sorted(trip, key=lambda x: pos[x][0])
            cyclic.update(_rotations((a, b, c)))

    # orient against the first stored sign so the system agrees with the data
    rep_set = set(reps)
    for e in m.insep_edges:
        witness = next((r for r in reps if _band_of(m, r) == e.band), None)
        if e.src in rep_set and e.dst in rep_set and witness is not None:
            if ((e.src, witness, e.dst) in cyclic) != (e.sign > 0):
                cyclic = {(a, c, b) for a, b, c in cyclic}
            break

    precedes = frozenset(
        (e.src, e.dst) for e in m.insep_edges if e.src in rep_set and e.dst in rep_set
    )
    kinds = tuple(sorted((r, m.kind(r)) for r in reps))
    return ChordalSystem(NodeSet.of(reps), frozenset(between), frozenset(cyclic), precedes, kinds)


def _band_of(m: FoliationModel, r: str) -> str | None:
    kind = m.kind(r)
    if kind == "band":
        return r
    if kind == "orbit":
        return m.orbit(r).band
    return None


# --- axioms ---------------------------------------------------------------------


def validate_axioms(cs: ChordalSystem, limit: int | None = None) -> list[str]:
    """Every violated instance of Kaplan's axioms, checked over all tuples.

    ``limit`` stops the search after that many violations.
    """
    els = list(cs.elements)
    B, C = cs.between, cs.cyclic_pos
    out: list[str] = []

    def report(msg):
        out.append(msg)
        return limit is not None and len(out) >= limit

    for a, b, c in itertools.chain(B, C):
        if len({a, b, c}) < 3 or not {a, b, c} <= set(els):
            if report(f"malformed triple ({a},{b},{c})"):
                return out

    for a, b, c in itertools.combinations(els, 3):
        held = [
            x for x, ok in (
                (f"{a}|{b}|{c}", (a, b, c) in B),
                (f"{b}|{c}|{a}", (b, c, a) in B),
                (f"{c}|{a}|{b}", (c, a, b) in B),
                (f"|{a},{b},{c}|+", (a, b, c) in C),
                (f"|{a},{c},{b}|+", (a, c, b) in C),
            ) if ok
        ]
        if len(held) != 1:
            what = "none" if not held else " and ".join(held)
            if report(f"Axiom 1: triple {a},{b},{c} satisfies {what}"):
                return out

    for a, b, c in sorted(B):
        if (c, b, a) not in B and report(f"Axiom 2.1: {a}|{b}|{c} without {c}|{b}|{a}"):
            return out
    for a, b, c in sorted(C):
        if (b, c, a) not in C and report(f"Axiom 2.2: |{a},{b},{c}|+ without |{b},{c},{a}|+"):
            return out

    for (a, b, c) in sorted(C):
        for d in els:
            if d in (a, b, c):
                continue
            if (a, c, d) in C and not ((a, b, d) in C and (b, c, d) in C):
                if report(f"Axiom 3.1: |{a},{b},{c}|+ and |{a},{c},{d}|+ "
                          f"but not both |{a},{b},{d}|+ and |{b},{c},{d}|+"):
                    return out

    def pos_or_neg(x, y, z, sign):
        return (x, y, z) in C if sign > 0 else (x, z, y) in C

    for a, b, d in sorted(B):
        for c in els:
            if c in (a, b, d):
                continue
            for sign in (1, -1):
                if pos_or_neg(a, b, c, sign) and not (pos_or_neg(a, d, c, sign) and (c, b, d) in B):
                    s = "+" if sign > 0 else "-"
                    if report(f"Axiom 3.2: |{a},{b},{c}|{s} and {a}|{b}|{d} "
                              f"but not both |{a},{d},{c}|{s} and {c}|{b}|{d}"):
                        return out

    for a, b, c in sorted(B):
        for d in els:
            if d in (a, b, c):
                continue
            if (b, c, d) in B and not ((a, b, d) in B and (a, c, d) in B):
                if report(f"Axiom 3.3: {a}|{b}|{c} and {b}|{c}|{d} but not both {a}|{b}|{d} and {a}|{c}|{d}"):
                    return out

    for a in els:
        rest = [x for x in els if x != a]
        for b, c, d in itertools.combinations(rest, 3):
            if (b, a, c) in B and (b, a, d) in B and (c, a, d) in B:
                if report(f"Axiom 3.4: {a} separates each pair of {b},{c},{d}"):
                    return out
    return out


_ALTERNATIVES = ("mid0", "mid1", "mid2", "pos", "neg")


def _alternative(cs: ChordalSystem, t: Triple) -> str:
    a, b, c = t
    for i, m in enumerate(t):
        x, z = (t[j] for j in range(3) if j != i)
        if (x, m, z) in cs.between:
            return f"mid{i}"
    return "pos" if (a, b, c) in cs.cyclic_pos else "neg"


def mutate(cs: ChordalSystem, rng: random.Random | int) -> tuple[ChordalSystem, Triple, str, str]:
    """Move one unordered triple to a different Axiom-1 alternative.

    Closure under reversal and rotation is kept, so any violation the result
    shows comes from Axiom 3.x. Returns (system, triple, old, new).
    """
    if not isinstance(rng, random.Random):
        rng = random.Random(rng)
    triples = list(itertools.combinations(list(cs.elements), 3))
    if not triples:
        raise ValueError("a chordal system needs three elements to mutate")
    t = rng.choice(triples)
    old = _alternative(cs, t)
    new = rng.choice([x for x in _ALTERNATIVES if x != old])
    a, b, c = t
    between = {x for x in cs.between if frozenset(x) != frozenset(t)}
    cyclic = {x for x in cs.cyclic_pos if frozenset(x) != frozenset(t)}
    if new.startswith("mid"):
        i = int(new[3])
        x, z = (t[j] for j in range(3) if j != i)
        between.update({(x, t[i], z), (z, t[i], x)})
    else:
        cyclic.update(_rotations((a, b, c) if new == "pos" else (a, c, b)))
    out = ChordalSystem(cs.elements, frozenset(between), frozenset(cyclic), cs.precedes, cs.kinds)
    return out, t, old, new


# --- isomorphism ----------------------------------------------------------------


def _invariant(cs: ChordalSystem, x: str):
    mid = sum(1 for t in cs.between if t[1] == x)
    end = sum(1 for t in cs.between if t[0] == x)
    cyc = sum(1 for t in cs.cyclic_pos if t[0] == x)
    out_deg = sum(1 for p in cs.precedes if p[0] == x)
    in_deg = sum(1 for p in cs.precedes if p[1] == x)
    return (cs.kind(x), out_deg, in_deg, mid, end, cyc)


def _search(a: ChordalSystem, b: ChordalSystem, sign: int) -> dict[str, str] | None:
    if len(a.elements) != len(b.elements) or len(a.between) != len(b.between):
        return None
    if len(a.cyclic_pos) != len(b.cyclic_pos) or len(a.precedes) != len(b.precedes):
        return None
    inv_a = {x: _invariant(a, x) for x in a.elements}
    inv_b = {y: _invariant(b, y) for y in b.elements}
    if sorted(inv_a.values()) != sorted(inv_b.values()):
        return None

    # most constrained elements first
    buckets: dict = {}
    for y, k in inv_b.items():
        buckets.setdefault(k, []).append(y)
    order = sorted(a.elements, key=lambda x: (len(buckets[inv_a[x]]), x))
    phi: dict[str, str] = {}
    used: set[str] = set()

    def consistent(x, y):
        for u, v in phi.items():
            if ((x, u) in a.precedes) != ((y, v) in b.precedes):
                return False
            if ((u, x) in a.precedes) != ((v, y) in b.precedes):
                return False
        assigned = list(phi.items())
        for (u, v), (w, z) in itertools.combinations(assigned, 2):
            if a.is_between(u, x, w) != b.is_between(v, y, z):
                return False
            if a.is_between(x, u, w) != b.is_between(y, v, z):
                return False
            if a.is_between(x, w, u) != b.is_between(y, z, v):
                return False
            if a.orientation(x, u, w) * sign != b.orientation(y, v, z):
                return False
        return True

    def extend(i):
        if i == len(order):
            return True
        x = order[i]
        for y in buckets[inv_a[x]]:
            if y in used or not consistent(x, y):
                continue
            phi[x] = y
            used.add(y)
            if extend(i + 1):
                return True
            del phi[x]
            used.discard(y)
        return False

    return dict(sorted(phi.items())) if extend(0) else None


def isomorphic(a: ChordalSystem, b: ChordalSystem) -> dict[str, str] | None:
    """A bijection keeping betweenness, cyclic orientation, > and element kinds."""
    return _search(a, b, 1)


def anti_isomorphic(a: ChordalSystem, b: ChordalSystem) -> dict[str, str] | None:
    """A bijection keeping betweenness, > and kinds while reversing every orientation."""
    return _search(a, b, -1)


def preserves(a: ChordalSystem, b: ChordalSystem, phi: dict[str, str], sign: int = 1) -> bool:
    """Direct check that ``phi`` is an isomorphism (sign 1) or anti-isomorphism (sign -1)."""
    if sorted(phi) != list(a.elements) or sorted(phi.values()) != list(b.elements):
        return False
    if any(a.kind(x) != b.kind(phi[x]) for x in a.elements):
        return False
    if {(phi[x], phi[y]) for x, y in a.precedes} != set(b.precedes):
        return False
    if {tuple(phi[x] for x in t) for t in a.between} != set(b.between):
        return False
    mapped = {tuple(phi[x] for x in t) for t in a.cyclic_pos}
    target = set(b.cyclic_pos) if sign > 0 else {(x, z, y) for x, y, z in b.cyclic_pos}
    return mapped == target


@dataclass(frozen=True)
class EquivalenceVerdict:
    kind: str
    witness: dict[str, str] | None = None

    def __post_init__(self):
        if self.kind not in ("o_equivalent", "n_equivalent", "inequivalent"):
            raise ValueError(f"unknown verdict {self.kind!r}")
        if (self.witness is None) != (self.kind == "inequivalent"):
            raise ValueError("a witness is required exactly for equivalent models")


def model_system(m: FoliationModel) -> ChordalSystem:
    """Chordal system on all separatrices and bands of a model."""
    return derive_chordal(m, list(m.separatrices) + m.band_ids)


def equivalent(m1: FoliationModel, m2: FoliationModel) -> EquivalenceVerdict:
    """Decide whether two plane models are equivalent by an orientation
    preserving map (o_equivalent), only by a reversing one (n_equivalent),
    or not at all."""
    for m in (m1, m2):
        if m.surface != "plane":
            raise ModelError("unsupported: equivalence is only decided for plane models")
    a, b = model_system(m1), model_system(m2)
    phi = isomorphic(a, b)
    if phi is not None:
        return EquivalenceVerdict("o_equivalent", phi)
    phi = anti_isomorphic(a, b)
    if phi is not None:
        return EquivalenceVerdict("n_equivalent", phi)
    return EquivalenceVerdict("inequivalent")
