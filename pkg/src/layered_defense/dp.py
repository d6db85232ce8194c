"""Table-composition dynamic program over uniform budget meshes.

Pipeline for a network:

1. mesh both budget axes with a common step;
2. build one pair table per (inner, outer) path, where every cell is the
   pair objective at the full cell budgets;
3. fold the pair tables of each branch with ``merge_outer`` (the inner
   budget is shared, the outer budget is split);
4. fold the branch tables with ``merge_inner`` (both budgets are split).

The same pipeline serves both objectives: sum-merges for expected capture,
min-merges for the worst path (see ``minimax``).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from . import _kernels
from .curves import DOMAIN_TOL, PWLCurve, curve_eval
from .errors import (
    BranchMismatch,
    DomainExceeded,
    MeshMismatch,
    NonDivisibleBudget,
    NonpositiveStep,
)
from .network import Allocation, BudgetPair, SensorNetwork, require_valid

DIVISIBILITY_TOL = 1e-9

EXPECTED = "expected"
MINIMAX = "minimax"
OBJECTIVES = (EXPECTED, MINIMAX)


@dataclass(frozen=True)
class Mesh:
    """Uniform partition ``{0, step, 2*step, ..., budget}``."""

    step: float
    budget: float
    points: np.ndarray = field(compare=False, repr=False)

    @property
    def size(self) -> int:
        return len(self.points)

    def __len__(self):
        return len(self.points)

    def same_as(self, other: "Mesh") -> bool:
        return self.size == other.size and self.step == other.step and self.budget == other.budget


def make_mesh(budget: float, step: float) -> Mesh:
    if not step > 0 or not math.isfinite(step):
        raise NonpositiveStep(f"mesh step must be positive, got {step}")
    if not (budget >= 0 and math.isfinite(budget)):
        raise NonDivisibleBudget(f"budget must be finite and >= 0, got {budget}")
    ratio = budget / step
    k = round(ratio)
    if abs(ratio - k) > DIVISIBILITY_TOL:
        raise NonDivisibleBudget(f"budget {budget} is not a multiple of step {step}")
    points = np.arange(k + 1) * step
    points[-1] = budget
    points.setflags(write=False)
    return Mesh(step, budget, points)


@dataclass(eq=False)
class ValueTable:
    """Optimal-value grid over ``x_mesh`` x ``y_mesh`` plus the merge tree.

    ``kind`` is ``"pair"`` for leaves, ``"outer"`` or ``"inner"`` for merges.
    Merged tables keep their operands and the left operand's share per cell
    (mesh indices) so allocations can be recovered top-down.
    """

    x_mesh: Mesh
    y_mesh: Mesh
    values: np.ndarray
    kind: str = "pair"
    inner_ids: frozenset = frozenset()
    outer_ids: frozenset = frozenset()
    left: "ValueTable | None" = None
    right: "ValueTable | None" = None
    x_split: np.ndarray | None = None
    y_split: np.ndarray | None = None

    @classmethod
    def from_values(cls, x_mesh: Mesh, y_mesh: Mesh, values) -> "ValueTable":
        values = np.array(values, dtype=float)
        if values.shape != (x_mesh.size, y_mesh.size):
            raise MeshMismatch(f"values shape {values.shape} does not fit the meshes")
        return cls(x_mesh, y_mesh, values)

    @property
    def shape(self) -> tuple[int, int]:
        return self.values.shape

    @property
    def n_cells(self) -> int:
        return self.values.size

    def value_at(self, a: int = -1, b: int = -1) -> float:
        return float(self.values[a, b])


def _check_domain(curve: PWLCurve, mesh: Mesh, what: str):
    if mesh.budget > curve.domain_max + DOMAIN_TOL:
        raise DomainExceeded(
            f"{what} mesh reaches {mesh.budget} but the curve ends at {curve.domain_max}"
        )


def _pair_grid(inner_curve, outer_curve, x_mesh, y_mesh, flow):
    _check_domain(inner_curve, x_mesh, "inner")
    _check_domain(outer_curve, y_mesh, "outer")
    dx = curve_eval(inner_curve, np.minimum(x_mesh.points, inner_curve.domain_max))
    dy = curve_eval(outer_curve, np.minimum(y_mesh.points, outer_curve.domain_max))
    dx = np.atleast_1d(dx)[:, None]
    dy = np.atleast_1d(dy)[None, :]
    return flow * dy + dx * (flow * (1.0 - dy))


def pair_table(
    inner_curve: PWLCurve,
    outer_curve: PWLCurve,
    flow: float,
    x_mesh: Mesh,
    y_mesh: Mesh,
    inner_id: str | None = None,
    outer_id: str | None = None,
) -> ValueTable:
    """Leaf table: each cell spends its full budgets on the pair."""
    values = _pair_grid(inner_curve, outer_curve, x_mesh, y_mesh, flow)
    return ValueTable(
        x_mesh,
        y_mesh,
        values,
        "pair",
        frozenset({inner_id}) if inner_id is not None else frozenset(),
        frozenset({outer_id}) if outer_id is not None else frozenset(),
    )


def _check_meshes(left: ValueTable, right: ValueTable):
    if not (left.x_mesh.same_as(right.x_mesh) and left.y_mesh.same_as(right.y_mesh)):
        raise MeshMismatch("operands are defined on different meshes")


def _merge_outer(left: ValueTable, right: ValueTable, use_min: bool) -> ValueTable:
    _check_meshes(left, right)
    if left.inner_ids and right.inner_ids and left.inner_ids != right.inner_ids:
        raise BranchMismatch("outer merges need operands under the same inner sensor")
    if left.outer_ids & right.outer_ids:
        raise BranchMismatch("operands share outer sensors")
    values, ysplit = _kernels.merge_outer_kernel(left.values, right.values, use_min)
    return ValueTable(
        left.x_mesh,
        left.y_mesh,
        values,
        "outer",
        left.inner_ids | right.inner_ids,
        left.outer_ids | right.outer_ids,
        left,
        right,
        None,
        ysplit,
    )


def _merge_inner(left: ValueTable, right: ValueTable, use_min: bool) -> ValueTable:
    _check_meshes(left, right)
    if left.inner_ids & right.inner_ids:
        raise BranchMismatch("inner merges need disjoint branches")
    values, xsplit, ysplit = _kernels.merge_inner_kernel(left.values, right.values, use_min)
    return ValueTable(
        left.x_mesh,
        left.y_mesh,
        values,
        "inner",
        left.inner_ids | right.inner_ids,
        left.outer_ids | right.outer_ids,
        left,
        right,
        xsplit,
        ysplit,
    )


def merge_outer(left: ValueTable, right: ValueTable) -> ValueTable:
    """Best sum over splits of the outer budget; the inner budget is shared."""
    return _merge_outer(left, right, False)


def merge_inner(left: ValueTable, right: ValueTable) -> ValueTable:
    """Best sum over joint splits of both budgets between two branches."""
    return _merge_inner(left, right, False)


def recover_allocation(table: ValueTable, a: int = -1, b: int = -1) -> Allocation:
    """Walk the merge tree from cell ``(a, b)`` down to the leaves."""
    nx, ny = table.shape
    a %= nx
    b %= ny
    alloc = Allocation()
    stack = [(table, a, b)]
    while stack:
        t, a, b = stack.pop()
        if t.kind == "pair":
            for i in t.inner_ids:
                alloc.inner[i] = float(t.x_mesh.points[a])
            for j in t.outer_ids:
                alloc.outer[j] = float(t.y_mesh.points[b])
        elif t.kind == "outer":
            s = int(t.y_split[a, b])
            stack.append((t.right, a, b - s))
            stack.append((t.left, a, s))
        else:
            sx = int(t.x_split[a, b])
            sy = int(t.y_split[a, b])
            stack.append((t.right, a - sx, b - sy))
            stack.append((t.left, sx, sy))
    return alloc


def _ordered(alloc: Allocation, net: SensorNetwork) -> Allocation:
    return Allocation(
        {s.id: alloc.inner.get(s.id, 0.0) for s in net.inner},
        {s.id: alloc.outer.get(s.id, 0.0) for s in net.outer},
    )


class Solution(NamedTuple):
    table: ValueTable
    allocation: Allocation
    value: float


def build_table(
    net: SensorNetwork, budgets: BudgetPair, eps: float, objective: str = EXPECTED
) -> ValueTable:
    if objective not in OBJECTIVES:
        raise ValueError(f"unknown objective {objective!r}")
    require_valid(net)
    use_min = objective == MINIMAX
    x_mesh = make_mesh(budgets.x, eps)
    y_mesh = make_mesh(budgets.y, eps)

    total = None
    for i, js in net.branches():
        branch = None
        for j in js:
            flow = 1.0 if use_min else j.flow
            leaf = pair_table(i.curve, j.curve, flow, x_mesh, y_mesh, i.id, j.id)
            branch = leaf if branch is None else _merge_outer(branch, leaf, use_min)
        total = branch if total is None else _merge_inner(total, branch, use_min)
    return total


def solve(
    net: SensorNetwork, budgets: BudgetPair, eps: float, objective: str = EXPECTED
) -> Solution:
    table = build_table(net, budgets, eps, objective)
    alloc = _ordered(recover_allocation(table), net)
    return Solution(table, alloc, table.value_at(-1, -1))


def solve_expected(net: SensorNetwork, budgets: BudgetPair, eps: float) -> Solution:
    return solve(net, budgets, eps, EXPECTED)


def sweep_expected(net: SensorNetwork, max_budgets: BudgetPair, eps: float) -> ValueTable:
    """Every cell of the returned table is the optimum for its budget pair."""
    return build_table(net, max_budgets, eps, EXPECTED)
