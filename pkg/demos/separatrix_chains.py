"""Walk through limit sets and ranks of the bundled plane models."""
from wanderflow import orbitspace
from wanderflow.flowctl.formats import load_fixture

for name in ("twoseps", "fourseps", "sine2_trunc5", "waz_trunc"):
    m = load_fixture(name)
    print(f"== {name}: rank {orbitspace.rank(m)}")
    for s in m.separatrices:
        one, star = orbitspace.lambda1(m, s), orbitspace.lambda2(m, s)
        if one or star:
            print(f"  {s}: first set {sorted(one)}, closure {sorted(star)}")
    levels = orbitspace.lyapunov_levels(m)
    print("  Lyapunov levels:", dict(sorted(levels.items(), key=lambda kv: -kv[1])))

# on the cylinder a pair of separatrices can point at each other
m = load_fixture("cylinder_f2")
print("== cylinder_f2: recurrent", sorted(orbitspace.generalized_recurrent(m)))
try:
    orbitspace.lyapunov_levels(m)
except orbitspace.ModelError as exc:
    print(" ", exc)
