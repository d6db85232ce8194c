"""Brute-force reference solvers for small instances.

``grid_enumerate`` scores every mesh-valued allocation. ``hybrid_enumerate``
enumerates only the inner allocation and solves the outer stage exactly:
with ``x`` fixed the objective is separable and concave in ``y``, so pouring
budget onto curve segments in order of weighted slope is optimal.
"""

from __future__ import annotations

import math
from typing import Iterator, NamedTuple

import numpy as np

from .curves import curve_eval
from .dp import EXPECTED, MINIMAX, OBJECTIVES, make_mesh
from .errors import EnumerationTooLarge
from .network import Allocation, BudgetPair, SensorNetwork, require_valid
from .objective import eval_expected, eval_minimax

DEFAULT_CAP = 10**8
_CHUNK = 2_000_000


class OracleResult(NamedTuple):
    value: float
    allocation: Allocation


def count_compositions(n_parts: int, total: int) -> int:
    """Number of nonnegative integer vectors of length ``n_parts`` summing to <= ``total``."""
    return math.comb(total + n_parts, n_parts)


def compositions(n_parts: int, total: int) -> Iterator[tuple[int, ...]]:
    """Nonnegative integer vectors with sum <= ``total``, in lexicographic order."""
    if n_parts == 0:
        yield ()
        return
    for k in range(total + 1):
        for rest in compositions(n_parts - 1, total - k):
            yield (k, *rest)


def _composition_array(n_parts, total):
    arr = np.array(list(compositions(n_parts, total)), dtype=np.int64)
    return arr.reshape(-1, n_parts)


def _allocation(net, x_mesh, y_mesh, kx, ky) -> Allocation:
    return Allocation(
        {s.id: float(x_mesh.points[k]) for s, k in zip(net.inner, kx)},
        {s.id: float(y_mesh.points[k]) for s, k in zip(net.outer, ky)},
    )


def grid_enumerate(
    net: SensorNetwork,
    budgets: BudgetPair,
    eps: float,
    objective: str = EXPECTED,
    cap: int = DEFAULT_CAP,
) -> OracleResult:
    """Exhaustive search over all allocations on the mesh.

    Returns the best value and the lexicographically smallest allocation
    ``(x_1, ..., x_n, y_1, ..., y_m)`` attaining it.
    """
    if objective not in OBJECTIVES:
        raise ValueError(f"unknown objective {objective!r}")
    require_valid(net)
    x_mesh = make_mesh(budgets.x, eps)
    y_mesh = make_mesh(budgets.y, eps)
    nI, nJ = len(net.inner), len(net.outer)
    kx_total, ky_total = x_mesh.size - 1, y_mesh.size - 1
    size = count_compositions(nI, kx_total) * count_compositions(nJ, ky_total)
    if size > cap:
        raise EnumerationTooLarge(f"{size} allocations exceed the cap of {cap}")

    kx = _composition_array(nI, kx_total)
    ky = _composition_array(nJ, ky_total)
    # detection rates per candidate, columns in scenario order
    dx = np.column_stack([curve_eval(s.curve, x_mesh.points[kx[:, c]]) for c, s in enumerate(net.inner)])
    dy = np.column_stack([curve_eval(s.curve, y_mesh.points[ky[:, c]]) for c, s in enumerate(net.outer)])

    col = {s.id: c for c, s in enumerate(net.outer)}
    paths = [(ci, col[j.id]) for ci, (i, js) in enumerate(net.branches()) for j in js]

    if objective == EXPECTED:
        flows = np.array([s.flow for s in net.outer])
        caught_outside = dy @ flows
        passed = np.zeros((ky.shape[0], nI))
        for ci, cj in paths:
            passed[:, ci] += flows[cj] * (1.0 - dy[:, cj])

    best, best_idx = -np.inf, None
    rows = max(1, _CHUNK // max(1, ky.shape[0] * (len(paths) if objective == MINIMAX else 1)))
    for start in range(0, kx.shape[0], rows):
        block = dx[start : start + rows]
        if objective == EXPECTED:
            scores = caught_outside[None, :] + block @ passed.T
        else:
            scores = np.full((block.shape[0], ky.shape[0]), np.inf)
            for ci, cj in paths:
                rate = dy[None, :, cj] + block[:, ci, None] * (1.0 - dy[None, :, cj])
                np.minimum(scores, rate, out=scores)
        flat = int(np.argmax(scores))
        r, c = divmod(flat, scores.shape[1])
        if scores[r, c] > best:
            best, best_idx = scores[r, c], (start + r, c)

    alloc = _allocation(net, x_mesh, y_mesh, kx[best_idx[0]], ky[best_idx[1]])
    score = eval_expected if objective == EXPECTED else eval_minimax
    return OracleResult(score(net, alloc, budgets), alloc)


def greedy_outer(net: SensorNetwork, inner_alloc: dict[str, float], budget_y: float) -> dict[str, float]:
    """Exact continuous outer allocation for a fixed inner allocation.

    Each outer sensor ``j`` under inner ``i`` contributes
    ``F_j * (1 - D_i(x_i)) * D_j(y_j)`` on top of a constant, a concave
    piecewise-linear function of ``y_j``. Segments are filled in order of
    decreasing weighted slope; ties keep scenario order.
    """
    pieces = []
    for i, js in net.branches():
        miss_inner = 1.0 - curve_eval(i.curve, inner_alloc[i.id])
        for j in js:
            w = j.flow * miss_inner
            for k, (_, length, slope) in enumerate(j.curve.segments()):
                if w * slope > 0:
                    pieces.append((w * slope, j.id, length))
    pieces.sort(key=lambda p: -p[0])  # stable

    y = {s.id: 0.0 for s in net.outer}
    left = budget_y
    for _, jid, length in pieces:
        if left <= 0:
            break
        take = min(length, left)
        y[jid] += take
        left -= take
    return y


def hybrid_enumerate(
    net: SensorNetwork, budgets: BudgetPair, eps: float, cap: int = DEFAULT_CAP
) -> OracleResult:
    """Inner allocation on the mesh, outer allocation solved exactly (expected objective)."""
    require_valid(net)
    x_mesh = make_mesh(budgets.x, eps)
    nI = len(net.inner)
    size = count_compositions(nI, x_mesh.size - 1)
    if size > cap:
        raise EnumerationTooLarge(f"{size} inner allocations exceed the cap of {cap}")

    best = None
    for kx in compositions(nI, x_mesh.size - 1):
        inner = {s.id: float(x_mesh.points[k]) for s, k in zip(net.inner, kx)}
        alloc = Allocation(inner, greedy_outer(net, inner, budgets.y))
        value = eval_expected(net, alloc)
        if best is None or value > best.value:
            best = OracleResult(value, alloc)
    return best


def outer_grid_scan(
    net: SensorNetwork, inner_alloc: dict[str, float], budget_y: float, step: float
) -> OracleResult:
    """Brute-force the outer allocation on a grid of ``step`` with ``inner_alloc`` fixed."""
    mesh = make_mesh(budget_y, step)
    best = None
    for ky in compositions(len(net.outer), mesh.size - 1):
        alloc = Allocation(dict(inner_alloc), {s.id: float(mesh.points[k]) for s, k in zip(net.outer, ky)})
        value = eval_expected(net, alloc)
        if best is None or value > best.value:
            best = OracleResult(value, alloc)
    return best
