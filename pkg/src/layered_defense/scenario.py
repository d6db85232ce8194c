"""Scenario files: a small YAML schema describing a network and its budgets.

Example::

    name: two_branch_small
    objective: expected
    epsilon: 0.5
    budget_x: 1.0
    budget_y: 1.0
    domain_max: 1.0
    inner:
      - id: i1
        curve: {lines: [[1.0, 0.0]]}
        covers: [j1]
    outer:
      - id: j1
        flow: 1.0
        curve: {breakpoints: [[0.0, 0.0], [1.0, 1.0]]}

A curve is either ``lines`` (min of ``[slope, intercept]`` pairs, clamped
at 1, on ``[0, domain_max]``) or ``breakpoints``. Unknown keys are rejected.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

import yaml

from .curves import AffineLine, PWLCurve, curve_from_lines
from .dp import EXPECTED, OBJECTIVES
from .errors import InputError, ScenarioSyntaxError, UnknownField
from .network import BudgetPair, InnerSensor, OuterSensor, SensorNetwork, require_valid

BUNDLED = ("example_8_1", "example_8_2", "two_branch_small")

_TOP = {"name", "objective", "epsilon", "budget_x", "budget_y", "domain_max", "inner", "outer"}
_INNER = {"id", "curve", "covers"}
_OUTER = {"id", "curve", "flow"}
_CURVE = {"lines", "breakpoints", "domain_max"}


@dataclass(frozen=True)
class Scenario:
    network: SensorNetwork
    budgets: BudgetPair
    epsilon: float
    objective: str = EXPECTED
    name: str = ""


class _Map(dict):
    """Mapping that remembers the source line of each key."""

    line: int = 0
    key_lines: dict

    def line_of(self, key):
        return self.key_lines.get(key, self.line)


def _build(node, loader):
    if isinstance(node, yaml.MappingNode):
        out = _Map()
        out.line = node.start_mark.line + 1
        out.key_lines = {}
        for knode, vnode in node.value:
            key = _build(knode, loader)
            if not isinstance(key, str):
                raise ScenarioSyntaxError("keys must be strings", line=knode.start_mark.line + 1)
            if key in out:
                raise ScenarioSyntaxError("duplicate key", line=knode.start_mark.line + 1, field=key)
            out[key] = _build(vnode, loader)
            out.key_lines[key] = knode.start_mark.line + 1
        return out
    if isinstance(node, yaml.SequenceNode):
        return [_build(n, loader) for n in node.value]
    return loader.construct_object(node, deep=True)


def _load_tree(text: str):
    loader = yaml.SafeLoader(text)
    try:
        node = loader.get_single_node()
        if node is None:
            raise ScenarioSyntaxError("empty scenario", line=1)
        return _build(node, loader)
    except yaml.YAMLError as exc:
        mark = getattr(exc, "problem_mark", None) or getattr(exc, "context_mark", None)
        line = mark.line + 1 if mark is not None else None
        raise ScenarioSyntaxError(str(getattr(exc, "problem", exc)), line=line) from None
    finally:
        loader.dispose()


def _require_map(obj, where, line):
    if not isinstance(obj, _Map):
        raise ScenarioSyntaxError("expected a mapping", line=line, field=where)
    return obj


def _check_keys(m: _Map, allowed, required=()):
    for key in m:
        if key not in allowed:
            raise UnknownField(key, line=m.line_of(key))
    for key in required:
        if key not in m:
            raise ScenarioSyntaxError("missing required field", line=m.line, field=key)


def _number(m: _Map, key, default=None):
    if key not in m:
        if default is None:
            raise ScenarioSyntaxError("missing required field", line=m.line, field=key)
        return default
    v = m[key]
    if isinstance(v, bool) or not isinstance(v, (int, float)) or not math.isfinite(v):
        raise ScenarioSyntaxError(f"expected a finite number, got {v!r}", line=m.line_of(key), field=key)
    return float(v)


def _pairs(m: _Map, key):
    v = m[key]
    line = m.line_of(key)
    if not isinstance(v, list) or not v:
        raise ScenarioSyntaxError("expected a non-empty list of pairs", line=line, field=key)
    out = []
    for item in v:
        if (
            not isinstance(item, list)
            or len(item) != 2
            or any(isinstance(x, bool) or not isinstance(x, (int, float)) for x in item)
        ):
            raise ScenarioSyntaxError(f"expected [number, number], got {item!r}", line=line, field=key)
        out.append((float(item[0]), float(item[1])))
    return out


def _curve(obj, default_domain, line) -> PWLCurve:
    m = _require_map(obj, "curve", line)
    _check_keys(m, _CURVE)
    try:
        if ("lines" in m) == ("breakpoints" in m):
            raise ScenarioSyntaxError("give exactly one of 'lines' or 'breakpoints'", line=m.line, field="curve")
        if "lines" in m:
            domain = _number(m, "domain_max", default_domain)
            return curve_from_lines([AffineLine(s, b) for s, b in _pairs(m, "lines")], domain)
        if "domain_max" in m:
            raise ScenarioSyntaxError(
                "domain_max is implied by the last breakpoint", line=m.line_of("domain_max"), field="domain_max"
            )
        return PWLCurve(tuple(_pairs(m, "breakpoints")))
    except ScenarioSyntaxError:
        raise
    except InputError as exc:
        raise ScenarioSyntaxError(str(exc), line=m.line, field="curve") from None


def _sensor_id(m: _Map):
    v = m.get("id")
    if not isinstance(v, (str, int)) or isinstance(v, bool):
        raise ScenarioSyntaxError("expected a string id", line=m.line_of("id"), field="id")
    return str(v)


def parse_scenario(text: str) -> Scenario:
    top = _load_tree(text)
    top = _require_map(top, "scenario", 1)
    _check_keys(top, _TOP, required=("epsilon", "budget_x", "budget_y", "inner", "outer"))

    objective = top.get("objective", EXPECTED)
    if objective not in OBJECTIVES:
        raise ScenarioSyntaxError(
            f"objective must be one of {OBJECTIVES}", line=top.line_of("objective"), field="objective"
        )
    name = top.get("name", "")
    if not isinstance(name, str):
        raise ScenarioSyntaxError("expected a string", line=top.line_of("name"), field="name")
    default_domain = _number(top, "domain_max", 1.0)

    for key in ("inner", "outer"):
        if not isinstance(top[key], list):
            raise ScenarioSyntaxError("expected a list", line=top.line_of(key), field=key)

    outer = []
    for item in top["outer"]:
        m = _require_map(item, "outer", top.line_of("outer"))
        _check_keys(m, _OUTER, required=("id", "curve"))
        outer.append(OuterSensor(_sensor_id(m), _curve(m["curve"], default_domain, m.line_of("curve")), _number(m, "flow", 1.0)))

    inner, adjacency = [], {}
    for item in top["inner"]:
        m = _require_map(item, "inner", top.line_of("inner"))
        _check_keys(m, _INNER, required=("id", "curve", "covers"))
        sid = _sensor_id(m)
        covers = m["covers"]
        if not isinstance(covers, list):
            raise ScenarioSyntaxError("expected a list of outer ids", line=m.line_of("covers"), field="covers")
        inner.append(InnerSensor(sid, _curve(m["curve"], default_domain, m.line_of("curve"))))
        if sid in adjacency:
            adjacency[sid] = adjacency[sid] + tuple(str(c) for c in covers)
        else:
            adjacency[sid] = tuple(str(c) for c in covers)

    net = require_valid(SensorNetwork(tuple(inner), tuple(outer), adjacency))
    try:
        budgets = BudgetPair(_number(top, "budget_x"), _number(top, "budget_y"))
    except ScenarioSyntaxError:
        raise
    except InputError as exc:
        raise ScenarioSyntaxError(str(exc), line=top.line_of("budget_x"), field="budget_x") from None
    eps = _number(top, "epsilon")
    return Scenario(net, budgets, eps, objective, name)


def _curve_data(curve: PWLCurve):
    return {"breakpoints": [[b, v] for b, v in curve.breakpoints]}


def serialize_scenario(sc: Scenario) -> str:
    """Canonical text form; curves are written as breakpoints."""
    net = sc.network
    data = {
        "name": sc.name,
        "objective": sc.objective,
        "epsilon": sc.epsilon,
        "budget_x": sc.budgets.x,
        "budget_y": sc.budgets.y,
        "inner": [
            {"id": s.id, "curve": _curve_data(s.curve), "covers": list(net.adjacency.get(s.id, ()))}
            for s in net.inner
        ],
        "outer": [{"id": s.id, "flow": s.flow, "curve": _curve_data(s.curve)} for s in net.outer],
    }
    return yaml.safe_dump(data, sort_keys=False, default_flow_style=None)


def bundled_text(name: str) -> str:
    return resources.files("layered_defense.scenarios").joinpath(f"{name}.yaml").read_text()


def load_scenario(name_or_path: str) -> Scenario:
    """Load a bundled scenario by name, or a scenario file by path."""
    if name_or_path in BUNDLED:
        return parse_scenario(bundled_text(name_or_path))
    path = Path(name_or_path)
    if not path.is_file():
        raise InputError(f"no bundled scenario or file named {name_or_path!r}")
    return parse_scenario(path.read_text())
