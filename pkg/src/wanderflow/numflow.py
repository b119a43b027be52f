"""Numerical integration of four explicit planar fields and link searches.

Fields and their first integrals:

    constant  (1, 0)              H = y
    saddle    (2y, 1 - y^2)       H = (y^2 - 1) e^x
    sine      (sin y, cos y)      H = e^x cos y
    sine2     (sin y, cos^2 y)    H = sec y - x

Integration uses scipy's adaptive Dormand-Prince 8(5,3) pair with dense
output. Saddle orbits with |y| > 1 blow up in finite time, so runs stop once
the state leaves a large ball; sine2 runs stop just short of the lines where
sec y has its poles.
"""
from __future__ import annotations

import io
import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from scipy.integrate import solve_ivp
from scipy.spatial import cKDTree

FIELD_NAMES = ("constant", "saddle", "sine", "sine2")
ESCAPE_RADIUS = 1e6
POLE_CLAMP = 1e-6


class DomainError(ValueError):
    pass


class IntegrationError(RuntimeError):
    def __init__(self, message: str, last_time: float):
        super().__init__(f"{message} (last good time {last_time:.6g})")
        self.last_time = last_time


@dataclass(frozen=True)
class VectorField:
    name: str
    rhs: Callable[[float, np.ndarray], np.ndarray]
    first_integral: Callable[[float, float], float]
    # separatrix k lies on y = value(k); None when there are none
    separatrix_line: Callable[[int], float] | None = None
    gradient: Callable[[float, float], tuple[float, float]] | None = None

    def __call__(self, p) -> np.ndarray:
        return self.rhs(0.0, np.asarray(p, dtype=float))


def _sec_integral(x, y):
    c = math.cos(y)
    if abs(c) < 1e-15:
        raise DomainError(f"sec y has a pole at y={y}")
    return 1.0 / c - x


FIELDS: dict[str, VectorField] = {
    "constant": VectorField(
        "constant", lambda t, z: np.array([1.0, 0.0]), lambda x, y: y, None, lambda x, y: (0.0, 1.0)
    ),
    "saddle": VectorField(
        "saddle",
        lambda t, z: np.array([2.0 * z[1], 1.0 - z[1] * z[1]]),
        lambda x, y: (y * y - 1.0) * math.exp(x),
        lambda k: (-1.0, 1.0)[k],
        lambda x, y: ((y * y - 1.0) * math.exp(x), 2.0 * y * math.exp(x)),
    ),
    "sine": VectorField(
        "sine",
        lambda t, z: np.array([math.sin(z[1]), math.cos(z[1])]),
        lambda x, y: math.exp(x) * math.cos(y),
        lambda k: k * math.pi + math.pi / 2,
        lambda x, y: (math.exp(x) * math.cos(y), -math.exp(x) * math.sin(y)),
    ),
    "sine2": VectorField(
        "sine2",
        lambda t, z: np.array([math.sin(z[1]), math.cos(z[1]) ** 2]),
        _sec_integral,
        lambda k: k * math.pi + math.pi / 2,
        lambda x, y: (-1.0, math.sin(y) / math.cos(y) ** 2),
    ),
}


def get_field(name: str | VectorField) -> VectorField:
    if isinstance(name, VectorField):
        return name
    try:
        return FIELDS[name]
    except KeyError:
        raise ValueError(f"unknown field {name!r}; choose from {', '.join(FIELD_NAMES)}") from None


def first_integral_value(fld, p) -> float:
    fld = get_field(fld)
    x, y = float(p[0]), float(p[1])
    return fld.first_integral(x, y)


@dataclass(frozen=True)
class IntegratorConfig:
    method: str = "DOP853"
    rtol: float = 1e-12
    atol: float = 1e-12
    horizon: float = 1e4

    def __post_init__(self):
        if self.rtol <= 0 or self.atol <= 0:
            raise ValueError("tolerances must be positive")
        if not math.isfinite(self.horizon) or self.horizon <= 0:
            raise ValueError("horizon must be finite and positive")


DEFAULT_CONFIG = IntegratorConfig()


@dataclass
class Trajectory:
    field: str
    t: np.ndarray
    states: np.ndarray  # shape (2, len(t))
    sol: Callable | None
    status: str = "complete"  # complete, escaped or clamped

    @property
    def end(self) -> np.ndarray:
        return self.states[:, -1]

    @property
    def truncated(self) -> bool:
        return self.status != "complete"

    def __call__(self, t):
        return self.sol(t)

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write("t,x,y\n")
        for t, x, y in zip(self.t, self.states[0], self.states[1]):
            buf.write(f"{t!r},{x!r},{y!r}\n")
        return buf.getvalue()


def _events(fld: VectorField):
    def escape(t, z):
        return ESCAPE_RADIUS - max(abs(z[0]), abs(z[1]))

    escape.terminal = True
    events = [escape]
    if fld.name == "sine2":
        def pole(t, z):
            return abs(math.cos(z[1])) - POLE_CLAMP

        pole.terminal = True
        events.append(pole)
    return events


def integrate(fld, p, t_span, cfg: IntegratorConfig = DEFAULT_CONFIG, t_eval=None) -> Trajectory:
    fld = get_field(fld)
    t0, t1 = float(t_span[0]), float(t_span[1])
    if not (math.isfinite(t0) and math.isfinite(t1)):
        raise ValueError("time span must be finite")
    if abs(t1 - t0) > cfg.horizon:
        raise ValueError(f"time span longer than the horizon {cfg.horizon}")
    z0 = np.asarray(p, dtype=float)
    if fld.name == "sine2" and abs(math.cos(z0[1])) < POLE_CLAMP:
        raise DomainError("start point lies on a sine2 pole line")
    if t0 == t1:
        return Trajectory(fld.name, np.array([t0]), z0.reshape(2, 1), lambda t: z0.copy())
    res = solve_ivp(
        fld.rhs, (t0, t1), z0, method=cfg.method, rtol=cfg.rtol, atol=cfg.atol,
        dense_output=True, events=_events(fld), t_eval=t_eval,
    )
    if res.status == -1 or not np.all(np.isfinite(res.y)):
        last = float(res.t[-1]) if len(res.t) else t0
        raise IntegrationError(res.message, last)
    status = "complete"
    if res.status == 1:
        status = "escaped" if len(res.t_events[0]) else "clamped"
    return Trajectory(fld.name, res.t, res.y, res.sol, status)


def flow_at(fld, p, t, cfg: IntegratorConfig = DEFAULT_CONFIG) -> np.ndarray:
    traj = integrate(fld, p, (0.0, t), cfg)
    if traj.truncated:
        raise IntegrationError(f"orbit {traj.status} before time {t}", float(traj.t[-1]))
    return traj.end


def flow_closed_form(n: int, t: float) -> tuple[float, float]:
    """Saddle flow from (0, 1/n - 1) after time t, by the explicit solution."""
    if n < 1:
        raise ValueError("n must be a positive integer")
    e = math.exp(2.0 * t)
    m = 2 * n - 1
    x = 2.0 * math.log((e + m) / (2 * n)) - 2.0 * t
    y = (e - m) / (e + m)
    return x, y


def conservation_drift(fld, p, t_max: float = 10.0, samples: int = 2001,
                       cfg: IntegratorConfig = DEFAULT_CONFIG, normalized: bool = False) -> tuple[float, str]:
    """max |H(traj(t)) - H(p)| for t in [-t_max, t_max], and the run status.

    With ``normalized`` each difference is divided by |grad H| at the sample,
    which turns it into an estimate of the distance to the starting level set.
    A run stopped early is measured on the part that exists.
    """
    fld = get_field(fld)
    h0 = first_integral_value(fld, p)
    worst, status = 0.0, "complete"
    for end in (t_max, -t_max):
        traj = integrate(fld, p, (0.0, end), cfg)
        if traj.truncated:
            status = traj.status
        ts = np.linspace(0.0, traj.t[-1], samples)
        zs = traj(ts)
        for x, y in zs.T:
            d = abs(fld.first_integral(x, y) - h0)
            if normalized and d:
                d /= math.hypot(*fld.gradient(x, y))
            worst = max(worst, d)
    return worst, status


def random_starts(fld, count: int, seed: int = 0, box: float = 2.0) -> np.ndarray:
    """Seeded starts in [-box, box]^2; for sine2, starts with |cos y| < 0.05 are redrawn."""
    fld = get_field(fld)
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < count:
        x, y = rng.uniform(-box, box, size=2)
        if fld.name == "sine2" and abs(math.cos(y)) < 0.05:
            continue
        out.append((x, y))
    return np.array(out)


# --- links -------------------------------------------------------------------


@dataclass(frozen=True)
class LinkQuery:
    p: tuple[float, float]
    q: tuple[float, float]
    eps: float
    T: float


@dataclass(frozen=True)
class LinkWitness:
    start: tuple[float, float]
    duration: float
    end: tuple[float, float]
    query: LinkQuery

    def is_valid(self) -> bool:
        q = self.query
        return (
            math.dist(self.start, q.p) < q.eps
            and math.dist(self.end, q.q) < q.eps
            and self.duration >= q.T
        )

    def csv_row(self) -> str:
        return ",".join(repr(float(v)) for v in (*self.start, self.duration, *self.end))

    CSV_HEADER = "start_x,start_y,duration,end_x,end_y"


@dataclass(frozen=True)
class SearchBudget:
    grid: int = 9  # uniform grid points per axis in the ball's bounding square
    rays: int = 8  # directions of geometric rays
    depth: int = 24  # ray offsets eps * 2^-j for j = 1..depth
    horizon: float = 60.0
    dt: float = 0.01

    @property
    def starts(self) -> int:
        return 1 + self.rays * self.depth + self.grid * self.grid


@dataclass(frozen=True)
class LinkReport:
    witness: LinkWitness | None
    budget: SearchBudget
    tried: int

    @property
    def found(self) -> bool:
        return self.witness is not None

    def describe(self) -> str:
        if self.witness is None:
            return (f"not found under budget ({self.tried} starts, horizon {self.budget.horizon:g}, "
                    f"dt {self.budget.dt:g})")
        w = self.witness
        return (f"witness start=({w.start[0]:.12g},{w.start[1]:.12g}) tau={w.duration:.6f} "
                f"end=({w.end[0]:.12g},{w.end[1]:.12g})")


def ball_starts(p, eps: float, budget: SearchBudget) -> list[tuple[float, float]]:
    """Deterministic start points strictly inside B(p, eps): p, geometric rays, a grid."""
    px, py = float(p[0]), float(p[1])
    out = [(px, py)]
    for j in range(1, budget.depth + 1):
        r = eps * 2.0 ** -j
        for k in range(budget.rays):
            a = 2 * math.pi * k / budget.rays + math.pi / 2
            # snap tiny cosines so axis rays stay on the axis
            c, s = (0.0 if abs(v) < 1e-12 else v for v in (math.cos(a), math.sin(a)))
            out.append((px + r * c, py + r * s))
    if budget.grid > 1:
        for gx in np.linspace(-eps, eps, budget.grid):
            for gy in np.linspace(-eps, eps, budget.grid):
                if math.hypot(gx, gy) < eps and (gx, gy) != (0.0, 0.0):
                    out.append((px + gx, py + gy))
    return out


def _sampled(fld, start, horizon, dt, cfg):
    traj = integrate(fld, start, (0.0, horizon), cfg)
    t_end = float(traj.t[-1])
    ts = np.arange(0.0, t_end + 0.5 * dt, dt)
    ts = ts[ts <= t_end]
    return ts, traj(ts)


def find_link(fld, p, q, eps: float, T: float, budget: SearchBudget = SearchBudget(),
              cfg: IntegratorConfig = DEFAULT_CONFIG) -> LinkReport:
    """Search for an (eps, T)-link from p to q.

    Starts are tried in a fixed order; the first trajectory that is within
    eps of q at some time >= T gives the witness, taken at the closest sample
    of that first visit. A miss means only that this budget found nothing.
    """
    if not eps > 0 or not T > 0:
        raise ValueError("eps and T must be positive")
    if budget.horizon < T:
        raise ValueError("search horizon shorter than T")
    query = LinkQuery((float(p[0]), float(p[1])), (float(q[0]), float(q[1])), eps, T)
    qv = np.array(query.q)
    starts = ball_starts(p, eps, budget)
    for i, start in enumerate(starts):
        try:
            ts, zs = _sampled(fld, start, budget.horizon, budget.dt, cfg)
        except DomainError:
            continue
        dist = np.hypot(zs[0] - qv[0], zs[1] - qv[1])
        hit = np.nonzero((ts >= T) & (dist < eps))[0]
        if not len(hit):
            continue
        first = hit[0]
        last = first
        while last + 1 < len(ts) and dist[last + 1] < eps:
            last += 1
        best = first + int(np.argmin(dist[first:last + 1]))
        w = LinkWitness(start, float(ts[best]), (float(zs[0, best]), float(zs[1, best])), query)
        return LinkReport(w, budget, i + 1)
    return LinkReport(None, budget, len(starts))


DEFAULT_SCHEDULE = ((0.1, 3.0), (0.05, 5.0), (0.02, 7.0), (0.01, 9.0))


@dataclass
class Lambda1Estimate:
    points: np.ndarray  # shape (n, 2), persistent link endpoints
    clusters: list[tuple[float, float, int]] = field(default_factory=list)  # centre x, centre y, size

    def near_lines(self, ys: Sequence[float], tol: float) -> bool:
        return all(min(abs(y - c) for c in ys) <= tol for y in self.points[:, 1]) if len(self.points) else True


def _endpoints(fld, p, eps, T, window, budget, cfg):
    px, py = float(p[0]), float(p[1])
    wx, wy = window
    pts = []
    for start in ball_starts(p, eps, budget):
        try:
            ts, zs = _sampled(fld, start, budget.horizon, budget.dt, cfg)
        except DomainError:
            continue
        keep = (ts >= T) & (np.abs(zs[0] - px) <= wx) & (np.abs(zs[1] - py) <= wy)
        if keep.any():
            pts.append(zs[:, keep].T)
    if not pts:
        return np.empty((0, 2))
    pts = np.vstack(pts)
    # one point per cell of side eps/2
    cells = np.unique(np.floor(pts / (eps / 2)).astype(np.int64), axis=0, return_index=True)[1]
    return pts[np.sort(cells)]


def estimate_lambda1(fld, p, schedule=DEFAULT_SCHEDULE, window: tuple[float, float] = (2.0, 4.0),
                     budget: SearchBudget = SearchBudget(grid=5, rays=4, depth=16), cfg: IntegratorConfig = DEFAULT_CONFIG
                     ) -> Lambda1Estimate:
    """Endpoints of links from p that persist across the last three schedule entries.

    For each (eps, T) the endpoints are the trajectory samples at times >= T,
    from starts in B(p, eps), inside the box around p with half-widths ``window``
    (along x, along y).
    A final endpoint survives when each of the two previous entries has an
    endpoint within twice that entry's eps.
    """
    schedule = list(schedule)
    if len(schedule) < 3:
        raise ValueError("the schedule needs at least three (eps, T) entries")
    for (e1, t1), (e2, t2) in zip(schedule, schedule[1:]):
        if not (e2 < e1 and t2 > t1):
            raise ValueError("schedule must have decreasing eps and increasing T")
    clouds = [_endpoints(fld, p, e, T, window, budget, cfg) for e, T in schedule[-3:]]
    final = clouds[-1]
    keep = np.ones(len(final), dtype=bool)
    for cloud, (e, _) in zip(clouds[:-1], schedule[-3:-1]):
        if not len(cloud):
            keep[:] = False
            break
        d, _ = cKDTree(cloud).query(final, k=1) if len(final) else (np.empty(0), None)
        keep &= d <= 2 * e
    points = final[keep]
    return Lambda1Estimate(points, _clusters(points, 2 * schedule[-1][0] + budget.dt * 2))


def _clusters(points: np.ndarray, link: float) -> list[tuple[float, float, int]]:
    if not len(points):
        return []
    tree = cKDTree(points)
    label = -np.ones(len(points), dtype=int)
    current = 0
    for i in range(len(points)):
        if label[i] >= 0:
            continue
        stack = [i]
        label[i] = current
        while stack:
            j = stack.pop()
            for k in tree.query_ball_point(points[j], link):
                if label[k] < 0:
                    label[k] = current
                    stack.append(k)
        current += 1
    out = []
    for c in range(current):
        members = points[label == c]
        out.append((float(members[:, 0].mean()), float(members[:, 1].mean()), len(members)))
    return sorted(out)


@dataclass(frozen=True)
class NoReturnReport:
    left_at: float | None  # first time at distance >= 2 eps
    returned_at: float | None  # first later time back inside B(p, eps)
    horizon: float
    status: str

    @property
    def ok(self) -> bool:
        return self.returned_at is None

    def describe(self) -> str:
        if self.returned_at is not None:
            return f"returned to B(p,eps) at t={self.returned_at:.6g} after leaving at t={self.left_at:.6g}"
        if self.left_at is None:
            return f"never left to distance 2*eps within horizon {self.horizon:g} ({self.status})"
        return f"no return: left at t={self.left_at:.6g}, horizon {self.horizon:g} ({self.status})"


def no_return_check(fld, p, eps: float, horizon: float = 20.0, dt: float = 0.005,
                    cfg: IntegratorConfig = DEFAULT_CONFIG) -> NoReturnReport:
    if not eps > 0:
        raise ValueError("eps must be positive")
    traj = integrate(fld, p, (0.0, horizon), cfg)
    t_end = float(traj.t[-1])
    ts = np.arange(0.0, t_end + 0.5 * dt, dt)
    ts = ts[ts <= t_end]
    zs = traj(ts)
    dist = np.hypot(zs[0] - p[0], zs[1] - p[1])
    out = np.nonzero(dist >= 2 * eps)[0]
    if not len(out):
        return NoReturnReport(None, None, horizon, traj.status)
    first = out[0]
    back = np.nonzero(dist[first:] < eps)[0]
    ret = float(ts[first + back[0]]) if len(back) else None
    return NoReturnReport(float(ts[first]), ret, horizon, traj.status)
