import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import PLANE_FOL
from wanderflow import chordal, orbitspace


def brute_iso(a, b, sign):
    """Oracle: try every kind-preserving bijection."""
    if len(a.elements) != len(b.elements):
        return None
    groups = {}
    for x in a.elements:
        groups.setdefault(a.kind(x), []).append(x)
    targets = {k: [y for y in b.elements if b.kind(y) == k] for k in groups}
    if any(len(targets[k]) != len(v) for k, v in groups.items()):
        return None
    keys = sorted(groups)
    want_cyc = set(b.cyclic_pos) if sign > 0 else {(x, z, y) for x, y, z in b.cyclic_pos}
    for choice in itertools.product(*(itertools.permutations(targets[k]) for k in keys)):
        phi = {}
        for k, perm in zip(keys, choice):
            phi.update(zip(groups[k], perm))
        if ({(phi[x], phi[y]) for x, y in a.precedes} == set(b.precedes)
                and {tuple(phi[x] for x in t) for t in a.between} == set(b.between)
                and {tuple(phi[x] for x in t) for t in a.cyclic_pos} == want_cyc):
            return phi
    return None


@pytest.mark.parametrize("name", PLANE_FOL)
def test_axioms_hold(fol, name):
    cs = chordal.derive_chordal(fol(name))
    assert chordal.validate_axioms(cs) == []
    assert chordal.validate_axioms(chordal.model_system(fol(name))) == []


@pytest.mark.parametrize("name", PLANE_FOL)
def test_mutations_are_caught(fol, name):
    cs = chordal.derive_chordal(fol(name))
    rng = random.Random(name)
    for _ in range(20):
        bad, triple, old, new = chordal.mutate(cs, rng)
        assert old != new
        assert chordal.validate_axioms(bad), (triple, old, new)


@pytest.mark.parametrize("name", PLANE_FOL)
def test_mirror_flips_orientation(fol, name):
    m = fol(name)
    a = chordal.derive_chordal(m)
    b = chordal.derive_chordal(orbitspace.mirror(m))
    assert a.between == b.between
    assert chordal.flip(a).cyclic_pos == b.cyclic_pos


def test_every_triple_has_one_alternative(fol):
    cs = chordal.derive_chordal(fol("fourseps"))
    for t in itertools.combinations(list(cs.elements), 3):
        mids = cs.middles(*t)
        cyc = cs.orientation(*t)
        assert (len(mids) == 1) != (cyc != 0)


@pytest.mark.parametrize("pair,kind", [
    (("twoseps", "twoseps"), "o_equivalent"),
    (("twoseps", "twoseps_mirror"), "n_equivalent"),
    (("fourseps", "fourseps_mirror"), "n_equivalent"),
    (("twoseps", "fourseps"), "inequivalent"),
    (("sine_trunc5", "sine2_trunc5"), "inequivalent"),
    # the sine field is symmetric under y -> pi - y, which reverses orientation
    (("sine_trunc5", "sine_trunc5_mirror"), "o_equivalent"),
])
def test_equivalence(fol, pair, kind):
    m1, m2 = fol(pair[0]), fol(pair[1])
    v = chordal.equivalent(m1, m2)
    assert v.kind == kind
    if v.witness is not None:
        sign = 1 if kind == "o_equivalent" else -1
        a, b = chordal.model_system(m1), chordal.model_system(m2)
        assert chordal.preserves(a, b, v.witness, sign)
        assert brute_iso(a, b, sign) is not None


@pytest.mark.parametrize("pair", [("twoseps", "twoseps_mirror"), ("twoseps", "fourseps"),
                                  ("fourseps", "fourseps_mirror"), ("trivial", "trivial")])
def test_search_agrees_with_brute_force(fol, pair):
    a, b = chordal.model_system(fol(pair[0])), chordal.model_system(fol(pair[1]))
    for sign, search in ((1, chordal.isomorphic), (-1, chordal.anti_isomorphic)):
        assert (search(a, b) is None) == (brute_iso(a, b, sign) is None)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10**6), st.integers(1, 3), st.randoms(use_true_random=False))
def test_relabelled_models_are_equivalent(seed, pairs, rnd):
    m = orbitspace.random_plane_model(random.Random(seed), pairs=pairs)
    ids = list(m.separatrices) + m.band_ids
    new = ids[:]
    rnd.shuffle(new)
    mapping = {a: "z" + b for a, b in zip(ids, new)}
    r = orbitspace.relabel(m, mapping)
    v = chordal.equivalent(m, r)
    assert v.kind == "o_equivalent"
    assert chordal.preserves(chordal.model_system(m), chordal.model_system(r), v.witness, 1)
    assert chordal.equivalent(m, orbitspace.mirror(r)).kind != "inequivalent"
    assert chordal.validate_axioms(chordal.derive_chordal(m)) == []


def test_reversed_flow_is_a_different_system(fol):
    m = fol("twoseps")
    # > flips under reversal, so only the reflection y -> -y relates the two
    assert chordal.equivalent(m, orbitspace.reverse(m)).kind == "n_equivalent"


def test_errors(fol):
    with pytest.raises(orbitspace.ModelError, match="unsupported"):
        chordal.equivalent(fol("cylinder_f1"), fol("cylinder_f1"))
    with pytest.raises(ValueError):
        chordal.EquivalenceVerdict("o_equivalent")
    with pytest.raises(orbitspace.ModelError):
        chordal.derive_chordal(fol("trivial"), ["b0", "o2"])
