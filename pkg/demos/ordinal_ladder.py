"""Stabilization ordinals of nested accumulations of fixed points on [0, 1]."""
from wanderflow.lineflow import (
    Accum, Concat, g_flow, g_omega, is_exhibited, lambda1k_point, stabilization_rank, truncate,
)

flow = truncate(g_flow(2), 12)
for k in range(1, 5):
    print(f"iterate {k} from 0:", lambda1k_point(flow, 0, k))

for spec in (g_flow(3), g_omega(), Concat((g_omega(), g_flow(2), g_flow(2))),
             Concat((g_omega(), g_omega())), Accum(g_omega()), Concat((g_flow(2), g_omega()))):
    tag = "" if is_exhibited(spec) else "  (derived rule)"
    print(f"{str(stabilization_rank(spec)):>5}  {spec}{tag}")
