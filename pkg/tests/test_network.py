import pytest

from layered_defense.curves import curve_eval, identity_curve
from layered_defense.errors import InputError, SemanticError
from layered_defense.network import (
    Allocation,
    BudgetPair,
    InnerSensor,
    OuterSensor,
    SensorNetwork,
    Violation,
    build_example_8_1,
    build_example_8_2,
    require_valid,
    validate_network,
)


def small_net(adjacency, flows=None):
    c = identity_curve()
    outer_ids = sorted({j for js in adjacency.values() for j in js} | set(flows or {}))
    flows = flows or {}
    return SensorNetwork(
        tuple(InnerSensor(i, c) for i in adjacency),
        tuple(OuterSensor(j, c, flows.get(j, 1.0)) for j in outer_ids),
        adjacency,
    )


def test_example_networks_are_valid():
    assert validate_network(build_example_8_1()) == []
    assert validate_network(build_example_8_2()) == []


def test_example_topology():
    net = build_example_8_1()
    assert [s.id for s in net.inner] == ["i1", "i2", "i3", "i4"]
    assert len(net.outer) == 9
    assert [len(js) for _, js in net.branches()] == [3, 2, 2, 2]
    assert all(s.flow == 1.0 for s in net.outer)
    assert [s.flow for s in build_example_8_2().outer] == [10, 1, 1, 1, 1, 1, 1, 1, 10]


def test_example_outer_curve_value():
    # min{0.3, 0.3 + 0.1} at y = 1
    net = build_example_8_1()
    assert curve_eval(net.outer_by_id("j5").curve, 1.0) == pytest.approx(0.3, abs=1e-15)


def test_second_example_differs_only_in_two_flows():
    a, b = build_example_8_1(), build_example_8_2()
    assert a.inner == b.inner and a.adjacency == b.adjacency
    diffs = [(s.id, t.flow) for s, t in zip(a.outer, b.outer) if s != t]
    assert diffs == [("j1", 10.0), ("j9", 10.0)]
    assert all(s.curve == t.curve for s, t in zip(a.outer, b.outer))


def test_overlapping_adjacency():
    net = small_net({"a": ("1", "2", "3"), "b": ("3", "4")})
    assert validate_network(net) == [Violation("OverlappingAdjacency", "3")]


def test_negative_flow():
    net = small_net({"a": ("1", "2")}, flows={"2": -1.0})
    assert validate_network(net) == [Violation("NegativeFlow", "2")]


def test_other_violations():
    net = small_net({"a": ("1",), "b": ()}, flows={"2": 1.0})
    assert set(validate_network(net)) == {
        Violation("EmptyBranch", "b"),
        Violation("UnassignedOuter", "2"),
    }
    assert validate_network(SensorNetwork((), (), {})) == [Violation("NoInnerSensors")]
    with pytest.raises(SemanticError, match="EmptyBranch"):
        require_valid(net)


def test_budget_pair_validation():
    with pytest.raises(InputError):
        BudgetPair(-1.0, 0.0)
    with pytest.raises(InputError):
        BudgetPair(0.0, float("inf"))


def test_allocation_feasibility():
    alloc = Allocation({"a": 0.6, "b": 0.4}, {"1": 1.0})
    assert alloc.is_feasible(BudgetPair(1.0, 1.0))
    assert not alloc.is_feasible(BudgetPair(0.9, 1.0))
