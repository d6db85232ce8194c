"""Time solve_expected as the outer mesh grows with the inner mesh fixed.

The table merge cost is quadratic in the outer mesh size, so each doubling
of |Y| should take roughly four times as long.
"""

import argparse
import time

from layered_defense.dp import solve_expected
from layered_defense.network import BudgetPair
from layered_defense.scenario import load_scenario


def best_of(fn, repeats):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--eps", type=float, default=0.05)
    ap.add_argument("--budget-x", type=float, default=4.0)
    ap.add_argument("--sizes", type=int, nargs="+", default=[51, 101, 201, 401])
    ap.add_argument("--repeats", type=int, default=5)
    args = ap.parse_args()

    net = load_scenario("example_8_1").network
    solve_expected(net, BudgetPair(0.5, 0.5), args.eps)  # JIT warm-up

    prev = None
    print(f"{'|X|':>5} {'|Y|':>5} {'seconds':>10} {'ratio':>7} {'predicted':>9}")
    nx = round(args.budget_x / args.eps) + 1
    for ny in args.sizes:
        budgets = BudgetPair(args.budget_x, (ny - 1) * args.eps)
        t = best_of(lambda: solve_expected(net, budgets, args.eps), args.repeats)
        if prev is None:
            print(f"{nx:5d} {ny:5d} {t:10.4f}")
        else:
            print(f"{nx:5d} {ny:5d} {t:10.4f} {t / prev[1]:7.2f} {(ny / prev[0]) ** 2:9.2f}")
        prev = (ny, t)


if __name__ == "__main__":
    main()
