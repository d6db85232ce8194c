import math

import pytest

from layered_defense.convergence import error_bound, lipschitz_estimate, refinement_study
from layered_defense.curves import identity_curve
from layered_defense.network import BudgetPair, build_example_8_1, single_pair_network


def test_lipschitz_identity():
    est = lipschitz_estimate(single_pair_network(identity_curve(), identity_curve()))
    assert est.global_L == pytest.approx(math.sqrt(2))


def test_lipschitz_example_pair():
    est = lipschitz_estimate(build_example_8_1())
    assert est.per_pair[("i1", "j2")] == pytest.approx(math.sqrt(0.04 + 0.09), abs=1e-12)
    assert est.per_pair[("i1", "j2")] == pytest.approx(0.36056, abs=1e-5)
    assert est.global_L >= max(est.per_pair.values())


def test_lipschitz_scales_with_flow():
    base = lipschitz_estimate(single_pair_network(identity_curve(), identity_curve(), 1.0))
    big = lipschitz_estimate(single_pair_network(identity_curve(), identity_curve(), 10.0))
    assert big.global_L == pytest.approx(10 * base.global_L)


def test_error_bound():
    assert error_bound(0.01, 4, 9, 1.0) == pytest.approx(0.72 * math.sqrt(2))
    assert error_bound(0.01, 4, 9, 1.0) == pytest.approx(1.01823, abs=1e-5)
    assert error_bound(0.02, 4, 9, 1.0) == pytest.approx(2 * error_bound(0.01, 4, 9, 1.0))
    assert error_bound(1e-12, 4, 9, 1.0) < 1e-9


def test_single_pair_all_levels_equal():
    rep = refinement_study(single_pair_network(identity_curve(), identity_curve()), BudgetPair(1, 1), 0.5, 3)
    assert rep.values == [1.0] * 4
    assert rep.monotone and rep.bound_holds


def test_two_branch_nondecreasing(two_branch):
    rep = refinement_study(two_branch, BudgetPair(1, 1), 0.5, 2)
    assert rep.epsilons == [0.5, 0.25, 0.125]
    assert rep.monotone and rep.bound_holds
    assert rep.values[0] == 2.0


def test_example_bound_uses_lipschitz():
    net = build_example_8_1()
    rep = refinement_study(net, BudgetPair(1, 1), 0.01, 0)
    L = lipschitz_estimate(net).global_L
    assert rep.bounds == [pytest.approx(error_bound(0.01, 4, 9, L))]
