"""flowctl: command-line access to models, line flows and numerical checks.

Exit codes: 0 success or positive verdict, 1 negative verdict or violated
invariant, 2 usage, file or parse error.
"""
from __future__ import annotations

import argparse
import math
import re
import sys
from fractions import Fraction

from .. import chordal, numflow, orbitspace
from ..lineflow import flows, recursive
from ..relation import UnknownLabelError
from .formats import LinFile, ParseError, format_fol, format_lin, parse_rational, read_fol, read_lin

OK, NEGATIVE, USAGE = 0, 1, 2


class Report:
    """Collects text lines or CSV rows; printed once at the end."""

    def __init__(self, fmt: str):
        self.fmt = fmt
        self.lines: list[str] = []

    def text(self, line: str):
        if self.fmt == "text":
            self.lines.append(line)

    def csv(self, row):
        if self.fmt == "csv":
            self.lines.append(row if isinstance(row, str) else ",".join(str(x) for x in row))

    def emit(self, out):
        for line in self.lines:
            out.write(line + "\n")


def _set(items) -> str:
    return "{" + ", ".join(sorted(items)) + "}"


def _point(text: str) -> tuple[float, float]:
    parts = text.split(",")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError(f"expected X,Y but got {text!r}")

    def value(s):
        s = s.strip().lower().replace("pi", f"({math.pi!r})")
        # plain arithmetic such as 3*pi/2; anything else is rejected before evaluation
        if not re.fullmatch(r"[0-9eE.+\-*/() ]+", s):
            raise argparse.ArgumentTypeError(f"bad coordinate {s!r}")
        try:
            return float(eval(s, {"__builtins__": {}}, {}))  # noqa: S307
        except Exception:
            raise argparse.ArgumentTypeError(f"bad coordinate {s!r}") from None

    return value(parts[0]), value(parts[1])


def _rational(text: str) -> Fraction:
    try:
        return parse_rational(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


# --- model ----------------------------------------------------------------------


def cmd_model_validate(args, rep):
    m = read_fol(args.file)
    diags = orbitspace.validate(m)
    for d in diags:
        rep.text(str(d))
        rep.csv([d.severity, d.code, d.element, '"' + d.message.replace('"', "'") + '"'])
    errors = [d for d in diags if d.severity == "error"]
    rep.text("valid" if not errors else f"invalid ({len(errors)} errors)")
    return NEGATIVE if errors else OK


def cmd_model_lambda(args, rep):
    m = read_fol(args.file)
    orbitspace.require_valid(m)
    targets = [args.orbit] if args.orbit else list(m.separatrices)
    if args.k is not None and args.order != "1":
        raise SystemExit("--k only applies to --order 1")
    rep.csv("id,order,members")
    for s in targets:
        if args.order == "1" and args.k is not None:
            members, label = orbitspace.lambda1k(m, s, args.k), f"lambda1^{args.k}"
        elif args.order == "1":
            members, label = orbitspace.lambda1(m, s), "lambda1"
        else:
            # on these models the hierarchy is stationary from the second level on
            members = orbitspace.lambda2(m, s)
            label = "lambda2" if args.order == "2" else "lambda*"
        rep.text(f"{label}({s}) = {_set(members)}")
        rep.csv([s, label, " ".join(sorted(members))])
    return OK


def cmd_model_rank(args, rep):
    m = read_fol(args.file)
    r = orbitspace.rank(m)
    rep.text(f"rank {r}")
    rep.csv("rank")
    rep.csv([r])
    return OK


def cmd_model_recurrent(args, rep):
    m = read_fol(args.file)
    rec = orbitspace.generalized_recurrent(m)
    rep.text(f"recurrent {_set(rec)}")
    rep.csv("id")
    for s in sorted(rec):
        rep.csv([s])
    return OK


def cmd_model_lyapunov(args, rep):
    m = read_fol(args.file)
    orbitspace.require_valid(m)
    try:
        levels = orbitspace.lyapunov_levels(m)
    except orbitspace.ModelError as exc:
        rep.text(f"error: {exc}")
        rep.csv("error")
        rep.csv(['"' + str(exc) + '"'])
        return NEGATIVE
    rep.csv("id,level")
    for k in sorted(levels, key=lambda k: (-levels[k], k)):
        rep.text(f"{k} {levels[k]}")
        rep.csv([k, levels[k]])
    return OK


def cmd_model_sigma(args, rep):
    m = read_fol(args.file)
    sigma, boundary = orbitspace.reachable_set(m, args.orbit)
    rep.text(f"sigma {_set(sigma)}")
    rep.text(f"boundary {_set(boundary)}")
    rep.csv("id,role")
    for x in sorted(sigma):
        rep.csv([x, "sigma"])
    for x in sorted(boundary):
        rep.csv([x, "boundary"])
    return OK


def cmd_model_reverse(args, rep):
    m = read_fol(args.file)
    orbitspace.require_valid(m)
    text = format_fol(orbitspace.reverse(m))
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="\n") as f:
            f.write(text)
        rep.text(f"wrote {args.out}")
    else:
        rep.lines.extend(text.rstrip("\n").split("\n"))
    return OK


def cmd_model_equiv(args, rep):
    m1, m2 = read_fol(args.file), read_fol(args.other)
    orbitspace.require_valid(m1)
    orbitspace.require_valid(m2)
    verdict = chordal.equivalent(m1, m2)
    rep.text(verdict.kind.replace("_", "-") if verdict.kind != "inequivalent" else "inequivalent")
    rep.csv("verdict,from,to")
    for a, b in sorted((verdict.witness or {}).items()):
        rep.text(f"  {a} -> {b}")
        rep.csv([verdict.kind, a, b])
    if verdict.witness is None:
        rep.csv([verdict.kind, "", ""])
    return OK if verdict.kind != "inequivalent" else NEGATIVE


def cmd_model_chordal(args, rep):
    m = read_fol(args.file)
    reps = args.reps.split(",") if args.reps else None
    cs = chordal.derive_chordal(m, reps)
    status = OK
    if args.check_axioms:
        bad = chordal.validate_axioms(cs, limit=args.budget or None)
        for v in bad:
            rep.text(v)
        rep.text(f"axioms hold on {len(cs.elements)} elements" if not bad else f"{len(bad)} violations")
        rep.csv("elements,violations")
        rep.csv([len(cs.elements), len(bad)])
        status = NEGATIVE if bad else OK
    if args.derive or not args.check_axioms:
        rep.csv("relation,a,b,c")
        for a, b, c in sorted(cs.between):
            if a < c:
                rep.text(f"{a}|{b}|{c}")
                rep.csv(["between", a, b, c])
        for a, b, c in sorted(cs.cyclic_pos):
            if a == min(a, b, c):
                rep.text(f"|{a},{b},{c}|+")
                rep.csv(["cyclic+", a, b, c])
    return status


# --- line -----------------------------------------------------------------------


def _line_flow(lin: LinFile, depth: int | None):
    if depth is not None:
        if lin.rec is None:
            raise SystemExit("--depth needs a file with a 'rec' line")
        return recursive.truncate(lin.rec, depth)
    return lin.flow


def cmd_line_lambda(args, rep):
    lin = read_lin(args.file)
    spec = _line_flow(lin, args.depth)
    if args.k is None or args.k == 1:
        result, label = flows.lambda1_point(spec, args.x), "lambda1"
    else:
        result, label = flows.lambda1k_point(spec, args.x, args.k), f"lambda1^{args.k}"
    rep.text(f"{label}({args.x}) = {result}")
    rep.csv("lo,hi,lo_closed,hi_closed")
    for i in result.parts:
        rep.csv([i.lo, i.hi, int(i.lo_closed), int(i.hi_closed)])
    return OK


def cmd_line_nw(args, rep):
    spec = _line_flow(read_lin(args.file), args.depth)
    nw = flows.nonwandering(spec)
    rep.text(f"nonwandering {nw}")
    rep.csv("lo,hi")
    for i in nw.parts:
        rep.csv([i.lo, i.hi])
    return OK


def cmd_line_rank(args, rep):
    lin = read_lin(args.file)
    if lin.rec is None:
        raise SystemExit(f"{args.file} has no 'rec' line")
    r = recursive.stabilization_rank(lin.rec)
    marker = "" if recursive.is_exhibited(lin.rec) else " (derived rule)"
    rep.text(f"rank {r}{marker}")
    rep.csv("rank,exhibited")
    rep.csv([r, int(not marker)])
    return OK


def cmd_line_truncate(args, rep):
    lin = read_lin(args.file)
    if lin.rec is None:
        raise SystemExit(f"{args.file} has no 'rec' line")
    flow = recursive.truncate(lin.rec, args.depth)
    if rep.fmt == "csv":
        rep.csv("x")
        for x in flow.fixed:
            rep.csv([x])
    else:
        rep.lines.extend(format_lin(LinFile(flow, lin.rec)).rstrip("\n").split("\n"))
    return OK


# --- num ------------------------------------------------------------------------


def _budget(args) -> numflow.SearchBudget:
    b = numflow.SearchBudget(horizon=args.horizon)
    if args.budget:
        # cap the number of ray offsets so that the start count stays under the budget
        depth = max(1, min(b.depth, (args.budget - 1 - b.grid * b.grid) // b.rays))
        b = numflow.SearchBudget(grid=b.grid, rays=b.rays, depth=depth, horizon=args.horizon)
    return b


def cmd_num_integrate(args, rep):
    traj = numflow.integrate(args.field, args.p0, (0.0, args.t))
    if args.emit == "samples" or rep.fmt == "csv":
        n = max(2, args.samples)
        ts = [traj.t[-1] * i / (n - 1) for i in range(n)]
        zs = traj(ts)
        rep.csv("t,x,y")
        for t, x, y in zip(ts, zs[0], zs[1]):
            rep.text(f"{t:.9f} {x:.12g} {y:.12g}")
            rep.csv([repr(float(t)), repr(float(x)), repr(float(y))])
    else:
        x, y = traj.end
        rep.text(f"t={traj.t[-1]:.9g} x={x:.12g} y={y:.12g} status={traj.status}")
    return OK


def cmd_num_link(args, rep):
    report = numflow.find_link(args.field, args.p, args.q, args.eps, args.T, _budget(args))
    rep.text(report.describe())
    rep.csv(numflow.LinkWitness.CSV_HEADER)
    if report.witness is not None:
        rep.csv(report.witness.csv_row())
    return OK if report.found else NEGATIVE


def cmd_num_lambda1(args, rep):
    est = numflow.estimate_lambda1(args.field, args.p)
    rep.text(f"{len(est.points)} persistent endpoints in {len(est.clusters)} clusters")
    rep.csv("x,y,size")
    for x, y, size in est.clusters:
        rep.text(f"  cluster at ({x:.4f}, {y:.4f}) with {size} points")
        rep.csv([f"{x:.9g}", f"{y:.9g}", size])
    return OK


def cmd_num_check_h(args, rep):
    starts = numflow.random_starts(args.field, args.n, seed=args.seed)
    worst, worst_at, truncated = 0.0, None, 0
    rep.csv("x0,y0,drift,status")
    for p in starts:
        d, status = numflow.conservation_drift(args.field, p, t_max=args.t)
        truncated += status != "complete"
        if d >= worst:
            worst, worst_at = d, p
        rep.csv([repr(float(p[0])), repr(float(p[1])), repr(d), status])
    ok = worst <= args.tol
    rep.text(f"max |H drift| = {worst:.3e} over {len(starts)} starts (tolerance {args.tol:g}, "
             f"{truncated} runs stopped early) -> {'ok' if ok else 'exceeded'}")
    if not ok and worst_at is not None:
        rep.text(f"  worst start ({worst_at[0]:.6f}, {worst_at[1]:.6f})")
    return OK if ok else NEGATIVE


def cmd_num_no_return(args, rep):
    r = numflow.no_return_check(args.field, args.p, args.eps, args.horizon)
    rep.text(r.describe())
    rep.csv("left_at,returned_at,status")
    rep.csv([r.left_at if r.left_at is not None else "", r.returned_at if r.returned_at is not None else "", r.status])
    return OK if r.ok else NEGATIVE


# --- parser -----------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "csv"), default=argparse.SUPPRESS)
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS)
    common.add_argument("--budget", type=int, default=argparse.SUPPRESS,
                        help="cap on search effort (link start points, reported violations)")

    parser = argparse.ArgumentParser(prog="flowctl", parents=[common],
                                     description="Prolongational limit sets of wandering flows.")
    groups = parser.add_subparsers(dest="group", required=True)

    def sub(group, name, func, help_text):
        p = group.add_parser(name, parents=[common], help=help_text)
        p.set_defaults(func=func)
        return p

    model = groups.add_parser("model", help="finite orbit-space models (.fol)").add_subparsers(dest="cmd", required=True)
    p = sub(model, "validate", cmd_model_validate, "check a model and list diagnostics")
    p.add_argument("file")
    p = sub(model, "lambda", cmd_model_lambda, "prolongational limit sets of separatrices")
    p.add_argument("file")
    p.add_argument("--orbit")
    p.add_argument("--order", choices=("1", "2", "star"), default="1")
    p.add_argument("--k", type=int)
    p = sub(model, "rank", cmd_model_rank, "rank of the flow")
    p.add_argument("file")
    p = sub(model, "recurrent", cmd_model_recurrent, "generalized recurrent separatrices")
    p.add_argument("file")
    p = sub(model, "lyapunov", cmd_model_lyapunov, "integer levels of a strict Lyapunov witness")
    p.add_argument("file")
    p = sub(model, "sigma", cmd_model_sigma, "set reachable by transverse arcs and its boundary")
    p.add_argument("file")
    p.add_argument("--orbit", required=True)
    p = sub(model, "reverse", cmd_model_reverse, "model of the time-reversed flow")
    p.add_argument("file")
    p.add_argument("--out")
    p = sub(model, "equiv", cmd_model_equiv, "decide topological equivalence of two models")
    p.add_argument("file")
    p.add_argument("other")
    p = sub(model, "chordal", cmd_model_chordal, "derive or check the chordal system")
    p.add_argument("file")
    p.add_argument("--check-axioms", action="store_true")
    p.add_argument("--derive", action="store_true")
    p.add_argument("--reps", help="comma separated ids; default all separatrices, orbits and empty bands")

    line = groups.add_parser("line", help="flows on the interval or circle (.lin)").add_subparsers(dest="cmd", required=True)
    p = sub(line, "lambda", cmd_line_lambda, "first prolongational limit set of a point, iterated k times")
    p.add_argument("file")
    p.add_argument("--x", type=_rational, required=True)
    p.add_argument("--k", type=int)
    p.add_argument("--depth", type=int, help="use the truncation of the 'rec' spec at this depth")
    p = sub(line, "nw", cmd_line_nw, "non-wandering set")
    p.add_argument("file")
    p.add_argument("--depth", type=int)
    p = sub(line, "rank", cmd_line_rank, "stabilization ordinal of the 'rec' spec")
    p.add_argument("file")
    p = sub(line, "truncate", cmd_line_truncate, "finite fixed set of the 'rec' spec")
    p.add_argument("file")
    p.add_argument("--depth", type=int, required=True)

    num = groups.add_parser("num", help="numerical checks on the explicit fields").add_subparsers(dest="cmd", required=True)
    fields = dict(choices=numflow.FIELD_NAMES, required=True)
    p = sub(num, "integrate", cmd_num_integrate, "integrate a field from a point")
    p.add_argument("--field", **fields)
    p.add_argument("--p0", type=_point, required=True)
    p.add_argument("--t", type=float, required=True)
    p.add_argument("--emit", choices=("end", "samples"), default="end")
    p.add_argument("--samples", type=int, default=11)
    p = sub(num, "link", cmd_num_link, "search an (eps, T)-link from p to q")
    p.add_argument("--field", **fields)
    p.add_argument("--p", type=_point, required=True)
    p.add_argument("--q", type=_point, required=True)
    p.add_argument("--eps", type=float, required=True)
    p.add_argument("--T", type=float, required=True)
    p.add_argument("--horizon", type=float, default=60.0)
    p = sub(num, "lambda1", cmd_num_lambda1, "persistent link endpoints from p")
    p.add_argument("--field", **fields)
    p.add_argument("--p", type=_point, required=True)
    p = sub(num, "check-h", cmd_num_check_h, "first integral drift over seeded starts")
    p.add_argument("--field", **fields)
    p.add_argument("--n", type=int, default=100)
    p.add_argument("--t", type=float, default=10.0)
    p.add_argument("--tol", type=float, default=1e-6)
    p = sub(num, "no-return", cmd_num_no_return, "check that the orbit of p does not come back")
    p.add_argument("--field", **fields)
    p.add_argument("--p", type=_point, required=True)
    p.add_argument("--eps", type=float, default=0.1)
    p.add_argument("--horizon", type=float, default=20.0)
    return parser


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return USAGE if exc.code else OK
    for name, default in (("format", "text"), ("seed", 0), ("budget", None)):
        if not hasattr(args, name):
            setattr(args, name, default)
    rep = Report(args.format)
    try:
        code = args.func(args, rep)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE
    except FileNotFoundError as exc:
        print(f"error: {exc.filename or exc}:0: cannot read file", file=sys.stderr)
        return USAGE
    except UnknownLabelError as exc:
        print(f"error: unknown id {exc.args[0]}", file=sys.stderr)
        return USAGE
    except orbitspace.ModelError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return NEGATIVE
    except (ValueError, numflow.IntegrationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE
    except SystemExit as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE
    rep.emit(out)
    return code


if __name__ == "__main__":
    sys.exit(main())
