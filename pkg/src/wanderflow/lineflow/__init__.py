"""Flows on the interval and the circle, and recursive fixed-point structures."""
from .flows import (
    LineFlowSpec,
    forward_orbit,
    full_space,
    interval_spec,
    lambda1_point,
    lambda1_set,
    lambda1k_point,
    nonwandering,
    omega_limit,
    prolongation,
    reverse_spec,
)
from .ordinal import Ordinal
from .pointset import Interval, PointSet1D
from .recursive import (
    Accum,
    AccumList,
    Concat,
    Leaf,
    Spec,
    g_flow,
    g_omega,
    is_exhibited,
    parse_spec,
    stabilization_rank,
    truncate,
    x_n,
)

__all__ = [
    "Accum", "AccumList", "Concat", "Interval", "Leaf", "LineFlowSpec", "Ordinal", "PointSet1D", "Spec",
    "forward_orbit", "full_space", "g_flow", "g_omega", "interval_spec", "is_exhibited", "lambda1_point",
    "lambda1_set", "lambda1k_point", "nonwandering", "omega_limit", "parse_spec", "prolongation",
    "reverse_spec", "stabilization_rank", "truncate", "x_n",
]
