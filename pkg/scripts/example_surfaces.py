"""Sweep both bundled example networks under both objectives and write CSV surfaces.

    python3 scripts/example_surfaces.py --out results/
"""

import argparse
import time
from dataclasses import dataclass
from pathlib import Path

from layered_defense.dp import sweep_expected
from layered_defense.export import export_surface
from layered_defense.minimax import sweep_minimax
from layered_defense.network import BudgetPair
from layered_defense.scenario import load_scenario


@dataclass(frozen=True)
class SweepConfig:
    eps: float = 0.05
    # 101 x 102 mesh for the expected objective, 201 x 201 for minimax
    expected_budgets: BudgetPair = BudgetPair(5.0, 5.05)
    minimax_budgets: BudgetPair = BudgetPair(10.0, 10.0)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", type=Path, default=Path("results"))
    ap.add_argument("--eps", type=float, default=SweepConfig.eps)
    args = ap.parse_args()
    cfg = SweepConfig(eps=args.eps)
    args.out.mkdir(parents=True, exist_ok=True)

    for name in ("example_8_1", "example_8_2"):
        net = load_scenario(name).network
        for objective, sweep, budgets in (
            ("expected", sweep_expected, cfg.expected_budgets),
            ("minimax", sweep_minimax, cfg.minimax_budgets),
        ):
            t0 = time.perf_counter()
            table = sweep(net, budgets, cfg.eps)
            elapsed = time.perf_counter() - t0
            path = args.out / f"{name}_{objective}.csv"
            export_surface(table, path)
            nx, ny = table.shape
            print(
                f"{name:12s} {objective:9s} {nx}x{ny}={table.n_cells:6d} cells  "
                f"max {table.values[-1, -1]:.6f}  {elapsed:6.2f} s  -> {path}"
            )


if __name__ == "__main__":
    main()
