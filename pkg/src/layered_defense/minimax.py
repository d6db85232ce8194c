"""Worst-path variant of the table DP for an adversary who picks the weakest path.

Pair tables ignore flows (every path counts once) and merges take the
best split of the minimum instead of the sum. Flows therefore never reach
any table cell.
"""

from __future__ import annotations

from .curves import PWLCurve
from .dp import (
    MINIMAX,
    Mesh,
    Solution,
    ValueTable,
    _merge_inner,
    _merge_outer,
    build_table,
    pair_table,
    solve,
)
from .network import BudgetPair, SensorNetwork


def pair_table_minimax(
    inner_curve: PWLCurve,
    outer_curve: PWLCurve,
    x_mesh: Mesh,
    y_mesh: Mesh,
    inner_id: str | None = None,
    outer_id: str | None = None,
) -> ValueTable:
    return pair_table(inner_curve, outer_curve, 1.0, x_mesh, y_mesh, inner_id, outer_id)


def merge_outer_min(left: ValueTable, right: ValueTable) -> ValueTable:
    return _merge_outer(left, right, True)


def merge_inner_min(left: ValueTable, right: ValueTable) -> ValueTable:
    return _merge_inner(left, right, True)


def solve_minimax(net: SensorNetwork, budgets: BudgetPair, eps: float) -> Solution:
    return solve(net, budgets, eps, MINIMAX)


def sweep_minimax(net: SensorNetwork, max_budgets: BudgetPair, eps: float) -> ValueTable:
    return build_table(net, max_budgets, eps, MINIMAX)
