"""Links of the saddle field and persistent link endpoints of the sine field."""
import math

from wanderflow import numflow

for eps, T in ((0.05, 5), (0.02, 10)):
    print(f"saddle (0,-1) -> (0,1), eps={eps}, T={T}:",
          numflow.find_link("saddle", (0, -1), (0, 1), eps, T).describe())
print("saddle (0,0) -> (0,0):", numflow.find_link("saddle", (0, 0), (0, 0), 0.01, 10).describe())

for n in (2, 10, 50):
    t = math.log(2 * n - 1)
    print(f"n={n}: integrated {numflow.flow_at('saddle', (0, 1 / n - 1), t)}, target y={1 - 1 / n}")

est = numflow.estimate_lambda1("sine", (0.0, 1.5 * math.pi))
for x, y, size in est.clusters:
    print(f"sine cluster at y={y:.3f} ({y / math.pi:.3f} pi), {size} points")
