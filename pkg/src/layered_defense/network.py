"""Two-layer sensor topology, budgets and allocations."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field, replace
from typing import Iterator, Mapping, NamedTuple

from .curves import AffineLine, ClampWarning, PWLCurve, curve_from_lines
from .errors import InputError, SemanticError


@dataclass(frozen=True)
class InnerSensor:
    id: str
    curve: PWLCurve


@dataclass(frozen=True)
class OuterSensor:
    id: str
    curve: PWLCurve
    flow: float = 1.0


@dataclass(frozen=True)
class SensorNetwork:
    """Inner sensors, outer sensors, and the inner -> outer backup map.

    Iteration order everywhere is the order of ``inner`` and of each
    adjacency list; nothing is sorted.
    """

    inner: tuple[InnerSensor, ...]
    outer: tuple[OuterSensor, ...]
    adjacency: Mapping[str, tuple[str, ...]]

    def __post_init__(self):
        object.__setattr__(self, "inner", tuple(self.inner))
        object.__setattr__(self, "outer", tuple(self.outer))
        object.__setattr__(
            self, "adjacency", {k: tuple(v) for k, v in self.adjacency.items()}
        )

    def inner_by_id(self, sid: str) -> InnerSensor:
        return {s.id: s for s in self.inner}[sid]

    def outer_by_id(self, sid: str) -> OuterSensor:
        return {s.id: s for s in self.outer}[sid]

    def branches(self) -> Iterator[tuple[InnerSensor, list[OuterSensor]]]:
        outer = {s.id: s for s in self.outer}
        for s in self.inner:
            yield s, [outer[j] for j in self.adjacency.get(s.id, ())]

    def paths(self) -> Iterator[tuple[InnerSensor, OuterSensor]]:
        for i, js in self.branches():
            for j in js:
                yield i, j

    @property
    def total_flow(self) -> float:
        return sum(s.flow for s in self.outer)

    def with_flows(self, flows: Mapping[str, float]) -> "SensorNetwork":
        outer = tuple(replace(s, flow=flows.get(s.id, s.flow)) for s in self.outer)
        return replace(self, outer=outer)


@dataclass(frozen=True)
class BudgetPair:
    x: float
    y: float

    def __post_init__(self):
        for name, v in (("x", self.x), ("y", self.y)):
            if not (math.isfinite(v) and v >= 0):
                raise InputError(f"budget {name} must be finite and >= 0, got {v}")


FEAS_TOL = 1e-9


@dataclass
class Allocation:
    inner: dict[str, float] = field(default_factory=dict)
    outer: dict[str, float] = field(default_factory=dict)

    @property
    def total_x(self) -> float:
        return sum(self.inner.values())

    @property
    def total_y(self) -> float:
        return sum(self.outer.values())

    def is_feasible(self, budgets: BudgetPair) -> bool:
        return (
            all(v >= 0 for v in self.inner.values())
            and all(v >= 0 for v in self.outer.values())
            and self.total_x <= budgets.x + FEAS_TOL
            and self.total_y <= budgets.y + FEAS_TOL
        )


class Violation(NamedTuple):
    rule: str
    sensor: str | None = None

    def __str__(self):
        return f"{self.rule}({self.sensor})" if self.sensor is not None else self.rule


def validate_network(net: SensorNetwork) -> list[Violation]:
    out: list[Violation] = []
    if not net.inner:
        out.append(Violation("NoInnerSensors"))

    seen: set[str] = set()
    for s in (*net.inner, *net.outer):
        if s.id in seen:
            out.append(Violation("DuplicateId", s.id))
        seen.add(s.id)

    inner_ids = [s.id for s in net.inner]
    outer_ids = {s.id for s in net.outer}
    for key in net.adjacency:
        if key not in inner_ids:
            out.append(Violation("UnknownInner", key))

    owner: dict[str, str] = {}
    for i in inner_ids:
        group = net.adjacency.get(i, ())
        if not group:
            out.append(Violation("EmptyBranch", i))
        for j in group:
            if j not in outer_ids:
                out.append(Violation("UnknownOuter", j))
            elif j in owner:
                out.append(Violation("OverlappingAdjacency", j))
            else:
                owner[j] = i

    for s in net.outer:
        if s.id not in owner:
            out.append(Violation("UnassignedOuter", s.id))
        if not (math.isfinite(s.flow) and s.flow >= 0):
            out.append(Violation("NegativeFlow", s.id))
    return out


def require_valid(net: SensorNetwork) -> SensorNetwork:
    violations = validate_network(net)
    if violations:
        raise SemanticError(violations)
    return net


EXAMPLE_DOMAIN_MAX = 10.0

_INNER_LINES = [AffineLine(0.2, 0.0), AffineLine(0.1, 0.4)]
_OUTER1_LINES = [AffineLine(0.3, 0.0), AffineLine(0.1, 0.3), AffineLine(0.05, 0.5)]
_OUTER_LINES = [AffineLine(0.3, 0.0), AffineLine(0.1, 0.3)]
_EXAMPLE_GROUPS = (("1", "2", "3"), ("4", "5"), ("6", "7"), ("8", "9"))


def build_example_8_1(domain_max: float = EXAMPLE_DOMAIN_MAX) -> SensorNetwork:
    """Four inner sensors over nine outer sensors, unit flow everywhere.

    Inner ids are ``i1..i4``, outer ids ``j1..j9``.
    """
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", ClampWarning)
        inner_curve = curve_from_lines(_INNER_LINES, domain_max)
        first_curve = curve_from_lines(_OUTER1_LINES, domain_max)
        outer_curve = curve_from_lines(_OUTER_LINES, domain_max)
    inner = tuple(InnerSensor(f"i{k + 1}", inner_curve) for k in range(4))
    outer = tuple(
        OuterSensor(f"j{k}", first_curve if k == 1 else outer_curve, 1.0)
        for k in range(1, 10)
    )
    adjacency = {
        f"i{k + 1}": tuple(f"j{j}" for j in group)
        for k, group in enumerate(_EXAMPLE_GROUPS)
    }
    return SensorNetwork(inner, outer, adjacency)


def build_example_8_2(domain_max: float = EXAMPLE_DOMAIN_MAX) -> SensorNetwork:
    """``build_example_8_1`` with ten units of flow on ``j1`` and ``j9``."""
    return build_example_8_1(domain_max).with_flows({"j1": 10.0, "j9": 10.0})


def single_pair_network(inner_curve, outer_curve, flow=1.0) -> SensorNetwork:
    return SensorNetwork(
        (InnerSensor("i1", inner_curve),),
        (OuterSensor("j1", outer_curve, flow),),
        {"i1": ("j1",)},
    )
