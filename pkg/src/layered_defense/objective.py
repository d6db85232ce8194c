"""Direct evaluation of both objectives for a concrete allocation.

These are the ground-truth scorers: the DP engines are checked against
them and the oracle scores its candidates with them.
"""

from __future__ import annotations

from typing import NamedTuple

from .curves import PWLCurve, curve_eval
from .errors import InfeasibleAllocation, MissingSensorEntry
from .network import FEAS_TOL, Allocation, BudgetPair, SensorNetwork


class PathDetection(NamedTuple):
    inner_id: str
    outer_id: str
    rate: float


def _check(net: SensorNetwork, alloc: Allocation, budgets: BudgetPair | None):
    for s in net.inner:
        if s.id not in alloc.inner:
            raise MissingSensorEntry(f"no inner allocation for {s.id!r}")
    for s in net.outer:
        if s.id not in alloc.outer:
            raise MissingSensorEntry(f"no outer allocation for {s.id!r}")
    for sid, v in (*alloc.inner.items(), *alloc.outer.items()):
        if v < 0:
            raise InfeasibleAllocation(f"negative allocation {v} for {sid!r}")
    if budgets is not None:
        if alloc.total_x > budgets.x + FEAS_TOL:
            raise InfeasibleAllocation(f"inner total {alloc.total_x} exceeds X={budgets.x}")
        if alloc.total_y > budgets.y + FEAS_TOL:
            raise InfeasibleAllocation(f"outer total {alloc.total_y} exceeds Y={budgets.y}")


def pair_value(inner_curve: PWLCurve, outer_curve: PWLCurve, flow, x, y):
    """Captured flow on one inner/outer pair; works elementwise on arrays."""
    dy = curve_eval(outer_curve, y)
    dx = curve_eval(inner_curve, x)
    return flow * dy + dx * (flow * (1.0 - dy))


def path_rate(inner_curve: PWLCurve, outer_curve: PWLCurve, x, y):
    dy = curve_eval(outer_curve, y)
    return dy + curve_eval(inner_curve, x) * (1.0 - dy)


def eval_expected(
    net: SensorNetwork, alloc: Allocation, budgets: BudgetPair | None = None
) -> float:
    _check(net, alloc, budgets)
    total = 0.0
    for i, js in net.branches():
        caught_outside = 0.0
        passed = 0.0
        for j in js:
            dy = curve_eval(j.curve, alloc.outer[j.id])
            caught_outside += j.flow * dy
            passed += j.flow * (1.0 - dy)
        total += caught_outside + curve_eval(i.curve, alloc.inner[i.id]) * passed
    return total


def path_detections(net: SensorNetwork, alloc: Allocation) -> list[PathDetection]:
    _check(net, alloc, None)
    return [
        PathDetection(i.id, j.id, path_rate(i.curve, j.curve, alloc.inner[i.id], alloc.outer[j.id]))
        for i, j in net.paths()
    ]


def eval_minimax(
    net: SensorNetwork, alloc: Allocation, budgets: BudgetPair | None = None
) -> float:
    _check(net, alloc, budgets)
    return min(p.rate for p in path_detections(net, alloc))


def pair_gradient(
    inner_curve: PWLCurve, outer_curve: PWLCurve, flow: float, x: float, y: float
) -> tuple[float, float]:
    """Gradient of ``pair_value`` in (x, y) away from breakpoints.

    Raises ``AtBreakpoint`` if either coordinate sits on an interior kink.
    At the domain ends the one-sided slope is used.
    """
    c_i = inner_curve.slope_at(x)
    c_j = outer_curve.slope_at(y)
    dx = c_i * flow * (1.0 - curve_eval(outer_curve, y))
    dy = c_j * flow * (1.0 - curve_eval(inner_curve, x))
    return dx, dy
