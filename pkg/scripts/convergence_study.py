"""Mesh-refinement study on a scenario at a fixed budget pair."""

import argparse

from layered_defense.convergence import refinement_study
from layered_defense.network import BudgetPair
from layered_defense.scenario import load_scenario


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("scenario", nargs="?", default="example_8_1")
    ap.add_argument("--objective", choices=("expected", "minimax"), default="expected")
    ap.add_argument("--budget-x", type=float, default=1.0)
    ap.add_argument("--budget-y", type=float, default=1.0)
    ap.add_argument("--eps", type=float, default=0.1)
    ap.add_argument("--halvings", type=int, default=4)
    args = ap.parse_args()

    net = load_scenario(args.scenario).network
    report = refinement_study(
        net, BudgetPair(args.budget_x, args.budget_y), args.eps, args.halvings, args.objective
    )
    print(f"L = {report.L:.6g}")
    print(f"{'epsilon':>10} {'value':>14} {'delta':>12} {'gap':>12} {'bound':>12}")
    for (eps, v, d, b), gap in zip(report.rows(), report.gaps):
        print(f"{eps:10.6g} {v:14.10f} {d:12.3e} {gap:12.3e} {b:12.3e}")
    print(f"monotone: {report.monotone}  bound holds: {report.bound_holds}")


if __name__ == "__main__":
    main()
