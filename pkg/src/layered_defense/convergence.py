"""Discretization error bound and mesh-refinement studies."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .curves import curve_max_slope
from .dp import EXPECTED, MINIMAX, solve
from .network import BudgetPair, SensorNetwork, require_valid

BOUND_TOL = 1e-9


@dataclass(frozen=True)
class LipschitzEstimate:
    per_pair: dict[tuple[str, str], float]
    global_L: float


def lipschitz_estimate(net: SensorNetwork, unit_flows: bool = False) -> LipschitzEstimate:
    """Per-pair constants ``F_j * hypot(s_i, s_j)`` from the steepest segments.

    Valid because the partial derivatives of a pair objective are bounded by
    ``F_j * s_i`` and ``F_j * s_j``. ``unit_flows`` uses ``F_j = 1`` (the
    worst-path objective ignores flows).
    """
    require_valid(net)
    per_pair = {}
    for i, j in net.paths():
        flow = 1.0 if unit_flows else j.flow
        per_pair[(i.id, j.id)] = flow * math.hypot(curve_max_slope(i.curve), curve_max_slope(j.curve))
    return LipschitzEstimate(per_pair, max(per_pair.values(), default=0.0))


def error_bound(eps: float, n_inner: int, n_outer: int, L: float) -> float:
    return 2.0 * math.sqrt(2.0) * n_inner * n_outer * eps * L


@dataclass
class ConvergenceReport:
    objective: str
    epsilons: list[float]
    values: list[float]
    bounds: list[float]
    deltas: list[float] = field(init=False)
    L: float = 0.0

    def __post_init__(self):
        self.deltas = [math.nan] + [b - a for a, b in zip(self.values, self.values[1:])]

    @property
    def gaps(self) -> list[float]:
        """Distance of each level to the finest one (proxy for the continuous optimum)."""
        return [self.values[-1] - v for v in self.values]

    @property
    def monotone(self) -> bool:
        return all(d >= -BOUND_TOL for d in self.deltas[1:])

    @property
    def bound_holds(self) -> bool:
        return all(g <= b + BOUND_TOL for g, b in zip(self.gaps, self.bounds))

    def rows(self):
        for e, v, d, b in zip(self.epsilons, self.values, self.deltas, self.bounds):
            yield e, v, d, b


def refinement_study(
    net: SensorNetwork,
    budgets: BudgetPair,
    eps0: float,
    halvings: int,
    objective: str = EXPECTED,
) -> ConvergenceReport:
    """Solve at ``eps0, eps0/2, ..., eps0/2**halvings`` at the top budget cell."""
    estimate = lipschitz_estimate(net, unit_flows=objective == MINIMAX)
    n_inner, n_outer = len(net.inner), len(net.outer)
    epsilons, values, bounds = [], [], []
    for k in range(halvings + 1):
        eps = eps0 / 2**k
        epsilons.append(eps)
        values.append(solve(net, budgets, eps, objective).value)
        bounds.append(error_bound(eps, n_inner, n_outer, estimate.global_L))
    return ConvergenceReport(objective, epsilons, values, bounds, L=estimate.global_L)
