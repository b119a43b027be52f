"""Reading and writing ``.fol`` model files and ``.lin`` line-flow files."""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from importlib import resources
from pathlib import Path

from ..lineflow.flows import LineFlowSpec
from ..lineflow.recursive import Spec, parse_spec
from ..orbitspace import Attachment, Band, FoliationModel, InsepEdge, Orbit
from ..relation import NodeSet


class ParseError(ValueError):
    def __init__(self, source: str, line: int, message: str):
        super().__init__(f"{source}:{line}: {message}")
        self.source = source
        self.line = line
        self.message = message


def parse_rational(text: str) -> Fraction:
    if not re.fullmatch(r"[+-]?(\d+/\d+|\d+(\.\d*)?|\.\d+)", text):
        raise ValueError(f"not a rational number: {text!r}")
    return Fraction(text)


def format_rational(x: Fraction) -> str:
    return str(Fraction(x))


def _lines(text: str):
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield number, line


# --- .fol -----------------------------------------------------------------------

_BAND = re.compile(r"band\s+(\S+)\s+lo\s+(.+?)\s+hi\s+(.+)")
_INSEP = re.compile(r"insep\s+(\S+)\s*>\s*(\S+)\s+sign\s+([+\-−])\s+via\s+([^\s:]+):(lo|hi)")
_ORBIT = re.compile(r"orbit\s+(\S+)\s+in\s+(\S+)\s+at\s+(\S+)")


def _end_spec(text: str) -> tuple[Attachment, ...]:
    text = re.sub(r"\s+", "", text)
    if text == "free":
        return ()
    out = []
    for item in text.split(","):
        parts = item.split(":")
        if len(parts) != 3 or not parts[0]:
            raise ValueError(f"attachment {item!r} is not SEP:SIDE:DIRECTION")
        sep, side, direction = parts
        if side not in ("L", "R"):
            raise ValueError(f"side must be L or R, got {side!r}")
        if direction not in ("src", "snk"):
            raise ValueError(f"direction must be src or snk, got {direction!r}")
        out.append(Attachment(sep, side, direction))
    return tuple(out)


def parse_fol(text: str, source: str = "<string>") -> FoliationModel:
    surface = None
    seps: list[str] = []
    bands: list[Band] = []
    edges: list[InsepEdge] = []
    orbits: list[Orbit] = []
    ids: dict[str, int] = {}

    def claim(ident, number):
        if ident in ids:
            raise ParseError(source, number, f"duplicate id {ident} (first defined on line {ids[ident]})")
        ids[ident] = number

    for number, line in _lines(text):
        head = line.split()[0]
        try:
            if head == "surface":
                parts = line.split()
                if len(parts) != 2 or parts[1] not in ("plane", "cylinder"):
                    raise ValueError("expected 'surface plane' or 'surface cylinder'")
                if surface is not None:
                    raise ValueError("surface declared twice")
                surface = parts[1]
            elif head == "sep":
                parts = line.split()
                if len(parts) != 2:
                    raise ValueError("expected 'sep ID'")
                claim(parts[1], number)
                seps.append(parts[1])
            elif head == "band":
                m = _BAND.fullmatch(line)
                if not m:
                    raise ValueError("expected 'band ID lo ENDSPEC hi ENDSPEC'")
                claim(m.group(1), number)
                bands.append(Band(m.group(1), _end_spec(m.group(2)), _end_spec(m.group(3))))
            elif head == "insep":
                m = _INSEP.fullmatch(line)
                if not m:
                    raise ValueError("expected 'insep SEP > SEP sign +|- via BAND:lo|hi'")
                sign = 1 if m.group(3) == "+" else -1
                edges.append(InsepEdge(m.group(1), m.group(2), sign, m.group(4), m.group(5)))
            elif head == "orbit":
                m = _ORBIT.fullmatch(line)
                if not m:
                    raise ValueError("expected 'orbit ID in BAND at RATIONAL'")
                claim(m.group(1), number)
                orbits.append(Orbit(m.group(1), m.group(2), parse_rational(m.group(3))))
            else:
                raise ValueError(f"unknown directive {head!r}")
        except ParseError:
            raise
        except ValueError as exc:
            raise ParseError(source, number, str(exc)) from None
    if surface is None:
        raise ParseError(source, 1, "missing 'surface' line")
    return FoliationModel(surface, NodeSet.of(seps), tuple(bands), tuple(edges), tuple(orbits))


def _format_end(end: tuple[Attachment, ...]) -> str:
    if not end:
        return "free"
    return ",".join(f"{a.sep}:{a.side}:{a.direction}" for a in end)


def format_fol(m: FoliationModel) -> str:
    lines = [f"surface {m.surface}"]
    lines += [f"sep {s}" for s in m.separatrices]
    lines += [f"band {b.id} lo {_format_end(b.lo)} hi {_format_end(b.hi)}" for b in m.bands]
    lines += [
        f"insep {e.src} > {e.dst} sign {'+' if e.sign > 0 else '-'} via {e.band}:{e.end}"
        for e in m.insep_edges
    ]
    lines += [f"orbit {o.id} in {o.band} at {format_rational(o.param)}" for o in m.orbits]
    return "\n".join(lines) + "\n"


# --- .lin -----------------------------------------------------------------------


@dataclass(frozen=True)
class LinFile:
    flow: LineFlowSpec
    rec: Spec | None = None


def parse_lin(text: str, source: str = "<string>") -> LinFile:
    topology = None
    fixed = None
    direction = 1
    rec = None
    for number, line in _lines(text):
        head, _, rest = line.partition(" ")
        rest = rest.strip()
        try:
            if head == "topology":
                if rest not in ("interval", "circle"):
                    raise ValueError("expected 'topology interval' or 'topology circle'")
                if topology is not None:
                    raise ValueError("topology declared twice")
                topology = rest
            elif head == "fixed":
                if fixed is not None:
                    raise ValueError("fixed declared twice")
                fixed = [parse_rational(x) for x in rest.split()]
                if any(a >= b for a, b in zip(fixed, fixed[1:])):
                    raise ValueError("fixed points must be strictly increasing")
            elif head == "direction":
                if rest not in ("right", "left"):
                    raise ValueError("expected 'direction right' or 'direction left'")
                direction = 1 if rest == "right" else -1
            elif head == "rec":
                if rec is not None:
                    raise ValueError("only one recursive spec per file")
                rec = parse_spec(rest)
            else:
                raise ValueError(f"unknown directive {head!r}")
        except ValueError as exc:
            raise ParseError(source, number, str(exc)) from None
    if topology is None:
        raise ParseError(source, 1, "missing 'topology' line")
    try:
        flow = LineFlowSpec(topology, tuple(fixed or ()), direction)
    except ValueError as exc:
        raise ParseError(source, 1, str(exc)) from None
    return LinFile(flow, rec)


def format_lin(lin: LinFile) -> str:
    lines = [f"topology {lin.flow.topology}"]
    lines.append(" ".join(["fixed"] + [format_rational(x) for x in lin.flow.fixed]))
    if lin.flow.direction < 0:
        lines.append("direction left")
    if lin.rec is not None:
        lines.append(f"rec {lin.rec}")
    return "\n".join(lines) + "\n"


# --- files and bundled fixtures -----------------------------------------------------


def fixture_names() -> list[str]:
    root = resources.files("wanderflow.flowctl") / "fixtures"
    return sorted(p.name for p in root.iterdir() if p.name.endswith((".fol", ".lin")))


def fixture_text(name: str) -> str:
    return (resources.files("wanderflow.flowctl") / "fixtures" / name).read_text(encoding="utf-8")


def load_fixture(name: str):
    """Parse a bundled fixture by file name, e.g. ``fourseps.fol``."""
    if not name.endswith((".fol", ".lin")):
        name += ".fol"
    text = fixture_text(name)
    return parse_fol(text, name) if name.endswith(".fol") else parse_lin(text, name)


def read_text(path: str) -> tuple[str, str]:
    """Text of a file; paths that do not exist fall back to a bundled fixture of the same name."""
    p = Path(path)
    if p.exists():
        return p.read_text(encoding="utf-8"), str(p)
    if p.name in fixture_names():
        return fixture_text(p.name), path
    raise FileNotFoundError(path)


def read_fol(path: str) -> FoliationModel:
    text, source = read_text(path)
    return parse_fol(text, source)


def read_lin(path: str) -> LinFile:
    text, source = read_text(path)
    return parse_lin(text, source)
