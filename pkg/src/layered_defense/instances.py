"""Random small instances for cross-checking solvers."""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .curves import AffineLine, ClampWarning, PWLCurve, curve_from_lines
from .network import BudgetPair, InnerSensor, OuterSensor, SensorNetwork
from .oracle import count_compositions

STEPS = (0.1, 0.2, 0.25, 0.5)


@dataclass(frozen=True)
class InstanceConfig:
    max_inner: int = 3
    max_outer_per_inner: int = 3
    max_lines: int = 3
    max_mesh: int = 11
    # cap on the number of allocations the grid oracle has to score
    enumeration_limit: int = 200_000
    flow_range: tuple[float, float] = (0.1, 5.0)


@dataclass(frozen=True)
class Instance:
    network: SensorNetwork
    budgets: BudgetPair
    eps: float


def random_curve(rng: np.random.Generator, domain_max: float, max_lines: int = 3) -> PWLCurve:
    """Min of up to ``max_lines`` lines with decreasing slopes, clamped at 1."""
    k = int(rng.integers(1, max_lines + 1))
    slopes = np.sort(rng.uniform(0.05, 1.5, size=k))[::-1]
    if k > 1 and rng.random() < 0.2:
        slopes[-1] = 0.0
    intercept = 0.0 if rng.random() < 0.8 else float(rng.uniform(0.0, 0.2))
    lines = []
    for s in slopes:
        lines.append(AffineLine(float(s), intercept))
        intercept += float(rng.uniform(0.05, 0.4))
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", ClampWarning)
        return curve_from_lines(lines, domain_max)


def random_network(
    rng: np.random.Generator, domain_max: float, cfg: InstanceConfig = InstanceConfig()
) -> SensorNetwork:
    n_inner = int(rng.integers(1, cfg.max_inner + 1))
    inner, outer, adjacency = [], [], {}
    for i in range(n_inner):
        iid = f"i{i + 1}"
        inner.append(InnerSensor(iid, random_curve(rng, domain_max, cfg.max_lines)))
        group = []
        for _ in range(int(rng.integers(1, cfg.max_outer_per_inner + 1))):
            jid = f"j{len(outer) + 1}"
            flow = float(rng.uniform(*cfg.flow_range))
            outer.append(OuterSensor(jid, random_curve(rng, domain_max, cfg.max_lines), flow))
            group.append(jid)
        adjacency[iid] = tuple(group)
    return SensorNetwork(tuple(inner), tuple(outer), adjacency)


def enumeration_size(net: SensorNetwork, nx: int, ny: int) -> int:
    return count_compositions(len(net.inner), nx - 1) * count_compositions(len(net.outer), ny - 1)


def random_instance(rng: np.random.Generator, cfg: InstanceConfig = InstanceConfig()) -> Instance:
    """A network plus budgets whose full mesh enumeration stays under the limit."""
    eps = float(rng.choice(STEPS))
    nx = int(rng.integers(1, cfg.max_mesh + 1))
    ny = int(rng.integers(1, cfg.max_mesh + 1))
    domain_max = max((cfg.max_mesh - 1) * eps, 1.0)
    net = random_network(rng, domain_max, cfg)
    while enumeration_size(net, nx, ny) > cfg.enumeration_limit:
        if ny >= nx:
            ny -= 1
        else:
            nx -= 1
    return Instance(net, BudgetPair((nx - 1) * eps, (ny - 1) * eps), eps)


def permuted(net: SensorNetwork, rng: np.random.Generator) -> SensorNetwork:
    """Same network with branch order and sibling order shuffled."""
    order = rng.permutation(len(net.inner))
    inner = tuple(net.inner[k] for k in order)
    adjacency = {}
    for s in inner:
        group = list(net.adjacency[s.id])
        adjacency[s.id] = tuple(group[k] for k in rng.permutation(len(group)))
    return SensorNetwork(inner, net.outer, adjacency)
