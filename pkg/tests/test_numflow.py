import math

import numpy as np
import pytest

from wanderflow import numflow as nf


@pytest.mark.parametrize("n", [2, 3, 7, 20])
def test_closed_form_solves_the_ode(n):
    # central differences of the closed form against the field
    h = 1e-5
    for t in (0.0, 0.4, 1.3):
        x0, y0 = nf.flow_closed_form(n, t - h)
        x1, y1 = nf.flow_closed_form(n, t + h)
        x, y = nf.flow_closed_form(n, t)
        assert math.isclose((x1 - x0) / (2 * h), 2 * y, abs_tol=1e-6)
        assert math.isclose((y1 - y0) / (2 * h), 1 - y * y, abs_tol=1e-6)
    assert nf.flow_closed_form(n, 0.0) == pytest.approx((0.0, 1 / n - 1), abs=1e-15)


@pytest.mark.parametrize("n", [2, 5, 10])
def test_integrator_matches_closed_form(n):
    for t in (0.5, math.log(2 * n - 1)):
        got = nf.flow_at("saddle", (0.0, 1 / n - 1), t)
        assert np.allclose(got, nf.flow_closed_form(n, t), atol=1e-9)


def test_saddle_escape_is_reported():
    traj = nf.integrate("saddle", (0.0, 1.5), (0.0, -10.0))
    assert traj.status == "escaped"
    with pytest.raises(nf.IntegrationError):
        nf.flow_at("saddle", (0.0, 1.5), -10.0)


def test_sine2_pole_start_rejected():
    with pytest.raises(nf.DomainError):
        nf.integrate("sine2", (0.0, math.pi / 2), (0.0, 1.0))


@pytest.mark.parametrize("name,tol", [("constant", 1e-12), ("sine", 1e-6), ("sine2", 1e-6)])
def test_first_integrals_conserved(name, tol):
    for p in nf.random_starts(name, 10, seed=3):
        drift, _ = nf.conservation_drift(name, p)
        assert drift <= tol


def test_saddle_level_set_distance_is_tiny():
    # |dH| grows like e^x along escaping orbits; the distance to the level set does not
    worst = max(nf.conservation_drift("saddle", p, normalized=True)[0] for p in nf.random_starts("saddle", 30))
    assert worst <= 1e-8


def test_random_starts_deterministic():
    a = nf.random_starts("sine2", 50, seed=11)
    b = nf.random_starts("sine2", 50, seed=11)
    assert np.array_equal(a, b)
    assert np.all(np.abs(np.cos(a[:, 1])) >= 0.05)
    assert not np.array_equal(a, nf.random_starts("sine2", 50, seed=12))


def test_link_witness_is_valid():
    rep = nf.find_link("saddle", (0, -1), (0, 1), 0.05, 5)
    assert rep.found and rep.witness.is_valid()
    # replaying the witness lands where it claims
    end = nf.flow_at("saddle", rep.witness.start, rep.witness.duration)
    assert np.allclose(end, rep.witness.end, atol=1e-8)


def test_constant_field_links_along_the_line():
    rep = nf.find_link("constant", (0, 0), (7, 0), 0.01, 5)
    assert rep.found and rep.witness.duration == pytest.approx(7.0, abs=0.02)
    assert not nf.find_link("constant", (0, 0), (0, 1), 0.1, 1, nf.SearchBudget(grid=3, rays=2, depth=4)).found


def test_budget_counts_starts():
    b = nf.SearchBudget(grid=3, rays=2, depth=4)
    starts = nf.ball_starts((1.0, 2.0), 0.1, b)
    assert len(starts) <= b.starts
    assert all(math.dist(s, (1.0, 2.0)) < 0.1 for s in starts)
    assert starts[0] == (1.0, 2.0)


def test_no_return():
    r = nf.no_return_check("sine", (0.0, 0.0), 0.1)
    assert r.ok and r.left_at is not None
    with pytest.raises(ValueError):
        nf.no_return_check("sine", (0.0, 0.0), 0.0)


def test_unknown_field():
    with pytest.raises(ValueError):
        nf.get_field("cosine")


def test_trajectory_csv():
    traj = nf.integrate("constant", (0.0, 1.0), (0.0, 1.0))
    text = traj.to_csv()
    assert text.startswith("t,x,y\n") and "\r" not in text
