"""Decide equivalence of plane models through their chordal systems."""
import random

from wanderflow import chordal, orbitspace
from wanderflow.flowctl.formats import load_fixture

m = load_fixture("twoseps")
cs = chordal.derive_chordal(m)
print(f"twoseps: {len(cs.elements)} elements, {len(cs.between)} betweenness triples,"
      f" {len(cs.cyclic_pos)} positive cyclic triples")
print("axiom violations:", chordal.validate_axioms(cs) or "none")

bad, triple, old, new = chordal.mutate(cs, random.Random(1))
print(f"moving {triple} from {old} to {new} breaks:", chordal.validate_axioms(bad)[0])

pairs = [("twoseps", "twoseps_mirror"), ("fourseps", "fourseps_mirror"),
         ("sine_trunc5", "sine_trunc5_mirror"), ("sine_trunc5", "sine2_trunc5")]
for a, b in pairs:
    v = chordal.equivalent(load_fixture(a), load_fixture(b))
    print(f"{a} vs {b}: {v.kind}")

# time reversal of the saddle is its reflection
print("twoseps vs its reversal:", chordal.equivalent(m, orbitspace.reverse(m)).kind)
