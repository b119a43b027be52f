"""Combinatorial orbit spaces of regular wandering flows on the plane or cylinder.

A model lists the separatrices, the bands of ordinary orbits between them,
and the directed inseparability edges (s > s') with their chirality sign.
Band ends record which separatrices the band's orbits accumulate on, on which
side of each separatrix, and whether the orbits follow it in backward time
(``src``) or forward time (``snk``). Attachments at one end are listed in the
order the nearby orbits visit them.

Everything is computed at orbit granularity: an orbit stands for all of its
points, and a band stands for every orbit inside it.
"""
from __future__ import annotations

import random
from collections import defaultdict
from dataclasses import dataclass, field, replace
from fractions import Fraction
from functools import lru_cache

from .relation import (
    NodeSet,
    Relation,
    UnknownLabelError,
    down_set,
    recurrent_nodes,
    transitive_closure,
)

SURFACES = ("plane", "cylinder")
SIDES = ("L", "R")
DIRECTIONS = ("src", "snk")
ENDS = ("lo", "hi")

_OTHER_SIDE = {"L": "R", "R": "L"}
_OTHER_DIRECTION = {"src": "snk", "snk": "src"}
_OTHER_END = {"lo": "hi", "hi": "lo"}


class ModelError(ValueError):
    pass


@dataclass(frozen=True)
class Attachment:
    sep: str
    side: str
    direction: str


@dataclass(frozen=True)
class Band:
    id: str
    lo: tuple[Attachment, ...] = ()
    hi: tuple[Attachment, ...] = ()

    def end(self, tag: str) -> tuple[Attachment, ...]:
        return self.lo if tag == "lo" else self.hi

    def ends(self):
        yield "lo", self.lo
        yield "hi", self.hi


@dataclass(frozen=True)
class InsepEdge:
    src: str
    dst: str
    sign: int
    band: str
    end: str


@dataclass(frozen=True)
class Orbit:
    id: str
    band: str
    param: Fraction


@dataclass(frozen=True)
class Diagnostic:
    severity: str
    code: str
    element: str
    message: str

    def __str__(self):
        return f"{self.severity}: {self.code}: {self.message}"


@dataclass(frozen=True)
class FoliationModel:
    surface: str
    separatrices: NodeSet
    bands: tuple[Band, ...] = ()
    insep_edges: tuple[InsepEdge, ...] = ()
    orbits: tuple[Orbit, ...] = ()
    _index: dict = field(default=None, init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        # canonical ordering so that equality ignores input order
        object.__setattr__(self, "bands", tuple(sorted(self.bands, key=lambda b: b.id)))
        object.__setattr__(
            self,
            "insep_edges",
            tuple(sorted(self.insep_edges, key=lambda e: (e.src, e.dst, e.band, e.end, e.sign))),
        )
        object.__setattr__(self, "orbits", tuple(sorted(self.orbits, key=lambda o: o.id)))
        object.__setattr__(
            self,
            "_index",
            {
                "band": {b.id: b for b in self.bands},
                "orbit": {o.id: o for o in self.orbits},
            },
        )

    @property
    def band_ids(self) -> list[str]:
        return [b.id for b in self.bands]

    def band(self, band_id: str) -> Band:
        try:
            return self._index["band"][band_id]
        except KeyError:
            raise UnknownLabelError(band_id) from None

    def orbit(self, orbit_id: str) -> Orbit:
        try:
            return self._index["orbit"][orbit_id]
        except KeyError:
            raise UnknownLabelError(orbit_id) from None

    def kind(self, ident: str) -> str | None:
        if ident in self.separatrices:
            return "separatrix"
        if ident in self._index["band"]:
            return "band"
        if ident in self._index["orbit"]:
            return "orbit"
        return None

    def attachments(self):
        """Yield (band id, end tag, position, attachment) for every attachment."""
        for b in self.bands:
            for tag, end in b.ends():
                for pos, att in enumerate(end):
                    yield b.id, tag, pos, att

    def side_table(self) -> dict[tuple[str, str], tuple[str, str]]:
        """Map (separatrix, side) to the (band, end) attached there."""
        table = {}
        for band_id, tag, _, att in self.attachments():
            table.setdefault((att.sep, att.side), (band_id, tag))
        return table


def _diag(out, severity, code, element, message):
    out.append(Diagnostic(severity, code, element, message))


def validate(m: FoliationModel) -> list[Diagnostic]:
    out: list[Diagnostic] = []
    seps = set(m.separatrices)

    if m.surface not in SURFACES:
        _diag(out, "error", "unknown surface", m.surface, f"surface {m.surface!r} is not plane or cylinder")

    seen: dict[str, str] = {}
    for kind, ids in (
        ("separatrix", m.separatrices),
        ("band", m.band_ids),
        ("orbit", [o.id for o in m.orbits]),
    ):
        for ident in ids:
            if ident in seen:
                _diag(out, "error", "duplicate id", ident, f"id {ident} used by a {seen[ident]} and a {kind}")
            seen.setdefault(ident, kind)

    attached: dict[tuple[str, str], str] = {}
    for band_id, tag, _, att in m.attachments():
        where = f"{band_id}:{tag}"
        if att.sep not in seps:
            _diag(out, "error", "unknown separatrix", where, f"band end {where} attaches unknown separatrix {att.sep}")
            continue
        if att.side not in SIDES or att.direction not in DIRECTIONS:
            _diag(out, "error", "bad attachment", where, f"band end {where} has malformed attachment {att}")
            continue
        key = (att.sep, att.side)
        if key in attached:
            _diag(
                out, "error", "side attached twice", att.sep,
                f"side {att.side} of {att.sep} is attached by both {attached[key]} and {where}",
            )
        else:
            attached[key] = where

    for b in m.bands:
        for tag, end in b.ends():
            if len(end) >= 3:
                _diag(
                    out, "warning", "long accumulation", f"{b.id}:{tag}",
                    f"band end {b.id}:{tag} accumulates on {len(end)} separatrices",
                )
            if len({a.sep for a in end}) != len(end):
                _diag(out, "error", "repeated attachment", f"{b.id}:{tag}",
                      f"band end {b.id}:{tag} lists a separatrix twice")

    bands = {b.id: b for b in m.bands}
    for o in m.orbits:
        if o.band not in bands:
            _diag(out, "error", "unknown band", o.id, f"orbit {o.id} lies in unknown band {o.band}")
        if not 0 < o.param < 1:
            _diag(out, "error", "parameter out of range", o.id, f"orbit {o.id} has parameter {o.param} outside (0,1)")

    in_edge: set[str] = set()
    for e in m.insep_edges:
        label = f"{e.src}>{e.dst}"
        if e.src not in seps or e.dst not in seps:
            _diag(out, "error", "unknown separatrix", label, f"edge {label} names an unknown separatrix")
            continue
        if e.src == e.dst:
            _diag(out, "error", "self edge", label, f"edge {label} joins a separatrix to itself")
            continue
        in_edge.update((e.src, e.dst))
        if e.sign not in (1, -1):
            _diag(out, "error", "bad sign", label, f"edge {label} has sign {e.sign}")
        if e.band not in bands or e.end not in ENDS:
            _diag(out, "error", "unknown witness", label, f"edge {label} is witnessed by unknown end {e.band}:{e.end}")
            continue
        end = bands[e.band].end(e.end)
        by_sep = {a.sep: a for a in end}
        src_att, dst_att = by_sep.get(e.src), by_sep.get(e.dst)
        if (
            src_att is None or dst_att is None
            or src_att.direction != "src" or dst_att.direction != "snk"
        ):
            _diag(
                out, "error", "witness direction mismatch", label,
                f"witness {e.band}:{e.end} of edge {label} must attach {e.src} as src and {e.dst} as snk",
            )
            continue
        expected = 1 if src_att.side == "R" else -1
        if e.sign != expected:
            _diag(
                out, "error", "sign mismatch", label,
                f"edge {label} has sign {_sign_text(e.sign)} but its partners sit on side {src_att.side}, "
                f"which forces {_sign_text(expected)}",
            )

    for s in sorted(seps - in_edge):
        _diag(out, "error", "not inseparable", s, f"separatrix {s} appears in no inseparability edge")

    if m.surface == "plane":
        rel = Relation.build(
            ((e.src, e.dst) for e in m.insep_edges if e.src in seps and e.dst in seps and e.src != e.dst),
            seps,
        )
        cyc = recurrent_nodes(rel)
        if cyc:
            _diag(out, "error", "chain cycle on plane", ",".join(sorted(cyc)),
                  f"chain cycle on plane through {', '.join(sorted(cyc))}")
        if not any(d.severity == "error" for d in out):
            out.extend(_planarity_warnings(m))
    return out


def _sign_text(sign: int) -> str:
    return "+" if sign > 0 else "-"


def _planarity_warnings(m: FoliationModel) -> list[Diagnostic]:
    out: list[Diagnostic] = []
    for b in m.bands:
        sides = {}
        for tag, end in b.ends():
            end_sides = {a.side for a in end}
            if len(end_sides) > 1:
                _diag(out, "warning", "mixed sides", f"{b.id}:{tag}",
                      f"band end {b.id}:{tag} attaches separatrices on both sides")
            elif end_sides:
                sides[tag] = end_sides.pop()
            dirs = [a.direction for a in end]
            if "snk" in dirs and "src" in dirs[dirs.index("snk"):]:
                _diag(out, "warning", "order", f"{b.id}:{tag}",
                      f"band end {b.id}:{tag} lists a src attachment after a snk one")
        if len(sides) == 2 and sides["lo"] == sides["hi"]:
            _diag(out, "warning", "same side", b.id, f"both ends of band {b.id} attach on side {sides['lo']}")

    pairs = {(e.src, e.dst) for e in m.insep_edges}
    for b in m.bands:
        for tag, end in b.ends():
            if len(end) == 2 and end[0].direction == "src" and end[1].direction == "snk":
                if (end[0].sep, end[1].sep) not in pairs:
                    _diag(out, "warning", "missing edge", f"{b.id}:{tag}",
                          f"band end {b.id}:{tag} pairs {end[0].sep} and {end[1].sep} without an edge")

    # bands and separatrices must form a tree for the surface to be the plane
    parent = {}

    def find(x):
        while parent.setdefault(x, x) != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    nodes = [("b", b.id) for b in m.bands] + [("s", s) for s in m.separatrices]
    for n in nodes:
        find(n)
    for band_id, _, _, att in m.attachments():
        a, b = find(("b", band_id)), find(("s", att.sep))
        if a == b:
            _diag(out, "warning", "attachment cycle", band_id,
                  f"attachments around band {band_id} close a loop, which cannot happen on the plane")
            return out
        parent[a] = b
    if len({find(n) for n in nodes}) > 1:
        _diag(out, "warning", "disconnected", "model", "bands and separatrices do not form one connected piece")
    return out


def errors(m: FoliationModel) -> list[Diagnostic]:
    return [d for d in validate(m) if d.severity == "error"]


def require_valid(m: FoliationModel) -> None:
    errs = errors(m)
    if errs:
        raise ModelError("invalid model: " + "; ".join(str(d) for d in errs))


def is_planar(m: FoliationModel) -> bool:
    """True when the model passes validation with no planarity warning."""
    return m.surface == "plane" and not [
        d for d in validate(m)
        if d.severity == "error" or d.code in {"mixed sides", "same side", "attachment cycle", "disconnected", "order"}
    ]


def prolongation_edges(m: FoliationModel) -> Relation:
    require_valid(m)
    return Relation(m.separatrices, frozenset((e.src, e.dst) for e in m.insep_edges))


def _check_node(m: FoliationModel, ident: str) -> bool:
    """True for separatrices, False for ordinary orbits or bands, error otherwise."""
    k = m.kind(ident)
    if k is None:
        raise UnknownLabelError(ident)
    return k == "separatrix"


def lambda1(m: FoliationModel, s: str) -> set[str]:
    if not _check_node(m, s):
        return set()
    return down_set(prolongation_edges(m), s)


def lambda1k(m: FoliationModel, s: str, k: int) -> set[str]:
    if k < 1:
        raise ValueError("k must be a positive integer")
    if not _check_node(m, s):
        return set()
    succ = prolongation_edges(m).successors()
    frontier = {s}
    for _ in range(k):
        frontier = set().union(*(succ.get(x, set()) for x in frontier))
    return frontier


def lambda2(m: FoliationModel, s: str) -> set[str]:
    if not _check_node(m, s):
        return set()
    return down_set(transitive_closure(prolongation_edges(m)), s)


def rank(m: FoliationModel) -> int:
    rel = prolongation_edges(m)
    if not rel.pairs:
        return 0
    closure = transitive_closure(rel)
    if all(down_set(rel, s) == down_set(closure, s) for s in m.separatrices):
        return 1
    return 2


def generalized_recurrent(m: FoliationModel) -> set[str]:
    return recurrent_nodes(prolongation_edges(m))


def chain_depths(m: FoliationModel) -> dict[str, int]:
    """Length of the longest > chain leaving each separatrix."""
    rel = prolongation_edges(m)
    cyc = recurrent_nodes(rel)
    if cyc:
        raise ModelError(
            "no strict Lyapunov witness: separatrices "
            + ", ".join(sorted(cyc))
            + " are generalized recurrent"
        )
    succ = rel.successors()

    @lru_cache(maxsize=None)
    def depth(s):
        return max((depth(t) + 1 for t in succ.get(s, ())), default=0)

    return {s: depth(s) for s in m.separatrices}


def lyapunov_levels(m: FoliationModel) -> dict[str, int]:
    """Integer levels strictly decreasing along every > edge.

    A separatrix gets its longest-chain depth. A band takes the level of the
    highest separatrix its orbits flow into, or else of the lowest one they
    come from, so levels never increase from a band into its sinks.
    """
    levels = dict(chain_depths(m))
    for b in m.bands:
        atts = [a for _, end in b.ends() for a in end]
        sinks = [levels[a.sep] for a in atts if a.direction == "snk"]
        sources = [levels[a.sep] for a in atts if a.direction == "src"]
        if sinks:
            levels[b.id] = max(sinks)
        elif sources:
            levels[b.id] = min(sources)
        else:
            levels[b.id] = 0
    return levels


def reachable_set(m: FoliationModel, ident: str) -> tuple[frozenset[str], frozenset[str]]:
    """Bands and separatrices reachable from ``ident`` by a transverse arc.

    An arc entering a band through one end can only leave through the other
    end, and it crosses a separatrix from one side to the other. Two
    separatrices attached at the same band end are therefore never joined
    through that end: that is the inseparability wall. Orbits belong to
    sigma exactly when their band does.

    Returns (sigma, boundary) where boundary holds the separatrices adjacent
    to sigma that cannot be reached.
    """
    require_valid(m)
    if m.surface != "plane":
        raise ModelError("reachable sets are only defined for plane models")
    kind = m.kind(ident)
    if kind is None:
        raise UnknownLabelError(ident)
    sides = m.side_table()

    sigma: set[str] = set()
    blocked: set[str] = set()
    seen: set[tuple] = set()
    todo: list[tuple] = []

    if kind == "separatrix":
        todo.append(("sep", ident, None))
    else:
        band_id = ident if kind == "band" else m.orbit(ident).band
        todo.append(("band", band_id, None))

    while todo:
        state = todo.pop()
        if state in seen:
            continue
        seen.add(state)
        what, name, came = state
        sigma.add(name)
        if what == "sep":
            for side in SIDES:
                if side == came:
                    continue
                hit = sides.get((name, side))
                if hit:
                    todo.append(("band", hit[0], (hit[1], name)))
        else:
            band = m.band(name)
            exits = ENDS if came is None else (_OTHER_END[came[0]],)
            for tag in exits:
                for att in band.end(tag):
                    todo.append(("sep", att.sep, att.side))
            if came is not None:
                for att in band.end(came[0]):
                    if att.sep != came[1]:
                        blocked.add(att.sep)
    sigma |= {o.id for o in m.orbits if o.band in sigma}
    return frozenset(sigma), frozenset(blocked - sigma)


def _swap_attachment(a: Attachment) -> Attachment:
    return Attachment(a.sep, _OTHER_SIDE[a.side], _OTHER_DIRECTION[a.direction])


def reverse(m: FoliationModel) -> FoliationModel:
    """Model of the time-reversed flow.

    Edges are transposed, src/snk and L/R swap, and each end lists its
    attachments in the opposite order. Signs flip too: the chordal relation
    is unchanged by reversing time, and the new edge reads its triple
    backwards.
    """
    bands = tuple(
        Band(b.id, tuple(_swap_attachment(a) for a in reversed(b.lo)),
             tuple(_swap_attachment(a) for a in reversed(b.hi)))
        for b in m.bands
    )
    edges = tuple(InsepEdge(e.dst, e.src, -e.sign, e.band, e.end) for e in m.insep_edges)
    return replace(m, bands=bands, insep_edges=edges)


def mirror(m: FoliationModel) -> FoliationModel:
    """Model of the flow composed with an orientation-reversing map of the surface."""
    bands = tuple(
        Band(b.id, *(tuple(Attachment(a.sep, _OTHER_SIDE[a.side], a.direction) for a in end)
                     for end in (b.lo, b.hi)))
        for b in m.bands
    )
    edges = tuple(replace(e, sign=-e.sign) for e in m.insep_edges)
    return replace(m, bands=bands, insep_edges=edges)


def relabel(m: FoliationModel, mapping: dict[str, str]) -> FoliationModel:
    """Rename separatrices, bands and orbits; ids missing from mapping are kept."""
    r = lambda x: mapping.get(x, x)  # noqa: E731
    bands = tuple(
        Band(r(b.id), *(tuple(Attachment(r(a.sep), a.side, a.direction) for a in end) for end in (b.lo, b.hi)))
        for b in m.bands
    )
    edges = tuple(InsepEdge(r(e.src), r(e.dst), e.sign, r(e.band), e.end) for e in m.insep_edges)
    orbits = tuple(Orbit(r(o.id), r(o.band), o.param) for o in m.orbits)
    return FoliationModel(m.surface, NodeSet.of(r(s) for s in m.separatrices), bands, edges, orbits)


def random_plane_model(rng: random.Random | int, pairs: int = 3, orbits: int = 0) -> FoliationModel:
    """Random valid plane model grown as a tree of bands and separatrices.

    Each step either hangs a new inseparable pair on a free band end or adds
    a partner next to a lone separatrix at some end. Every new separatrix gets
    a fresh band on its other side.
    """
    if not isinstance(rng, random.Random):
        rng = random.Random(rng)
    # per band: which end lies on the left of the motion
    left_end = {"b0": rng.choice(ENDS)}
    ends: dict[tuple[str, str], list[Attachment]] = {("b0", "lo"): [], ("b0", "hi"): []}
    edges: list[InsepEdge] = []
    seps: list[str] = []
    counter = iter(range(1, 10_000))

    def side_at(band_id, tag):
        return "R" if left_end[band_id] == tag else "L"

    def new_sep(band_id, tag):
        name = f"s{len(seps) + 1}"
        seps.append(name)
        # fresh band on the other side of the new separatrix
        nb = f"b{next(counter)}"
        left_end[nb] = rng.choice(ENDS)
        other = _OTHER_SIDE[side_at(band_id, tag)]
        nb_tag = left_end[nb] if other == "R" else _OTHER_END[left_end[nb]]
        ends[(nb, nb_tag)] = [Attachment(name, other, rng.choice(DIRECTIONS))]
        ends[(nb, _OTHER_END[nb_tag])] = []
        return name

    def add_edge(band_id, tag, first, second):
        side = side_at(band_id, tag)
        edges.append(InsepEdge(first, second, 1 if side == "R" else -1, band_id, tag))

    for _ in range(pairs):
        free = [k for k, v in ends.items() if not v]
        lone = [k for k, v in ends.items() if len(v) == 1]
        if lone and (not free or rng.random() < 0.5):
            band_id, tag = rng.choice(sorted(lone))
            side = side_at(band_id, tag)
            old = ends[(band_id, tag)][0].sep
            new = new_sep(band_id, tag)
            order = [old, new] if rng.random() < 0.5 else [new, old]
            ends[(band_id, tag)] = [
                Attachment(order[0], side, "src"),
                Attachment(order[1], side, "snk"),
            ]
            add_edge(band_id, tag, *order)
        else:
            band_id, tag = rng.choice(sorted(free))
            side = side_at(band_id, tag)
            a = new_sep(band_id, tag)
            b = new_sep(band_id, tag)
            ends[(band_id, tag)] = [Attachment(a, side, "src"), Attachment(b, side, "snk")]
            add_edge(band_id, tag, a, b)

    band_ids = sorted({k[0] for k in ends})
    bands = tuple(Band(bid, tuple(ends[(bid, "lo")]), tuple(ends[(bid, "hi")])) for bid in band_ids)
    orbit_list = tuple(
        Orbit(f"o{i + 1}", rng.choice(band_ids), Fraction(rng.randint(1, 99), 100)) for i in range(orbits)
    )
    # two orbits may share a parameter; nudge to keep them distinct
    taken = set()
    fixed = []
    for o in orbit_list:
        p = o.param
        while (o.band, p) in taken:
            p = (p + 1) / 2
        taken.add((o.band, p))
        fixed.append(Orbit(o.id, o.band, p))
    return FoliationModel("plane", NodeSet.of(seps), bands, tuple(edges), tuple(fixed))
