"""Command-line entry point.

    layered-defense solve example_8_1 --epsilon 0.01 --budget-x 1 --budget-y 1
    layered-defense sweep example_8_1 --objective minimax --out surface.csv
    layered-defense evaluate two_branch_small --allocation i1=0,i2=1,j1=1,j2=0
    layered-defense verify two_branch_small --epsilon 0.5
    layered-defense converge example_8_1 --epsilon 0.1 --halvings 3

Exit codes: 0 success, 1 input error, 2 internal failure.
"""

from __future__ import annotations

import argparse
import logging
import sys
import time
from dataclasses import dataclass, replace
from pathlib import Path

import yaml

from . import __version__
from .convergence import refinement_study
from .dp import EXPECTED, OBJECTIVES, make_mesh, solve
from .errors import InputError, NonpositiveStep
from .export import convergence_csv, export_convergence, export_surface, fmt, surface_csv
from .network import Allocation, BudgetPair
from .objective import eval_expected, eval_minimax
from .oracle import DEFAULT_CAP, grid_enumerate
from .scenario import Scenario, load_scenario

log = logging.getLogger(__name__)

SOLVER_ID = "layered_defense.dp"
VERIFY_TOL = 1e-9


class UsageError(InputError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


@dataclass
class SolveReport:
    scenario: str
    objective: str
    value: float
    allocation: Allocation
    budgets: BudgetPair
    epsilon: float
    mesh_x: int
    mesh_y: int
    duration_s: float
    solver: str = SOLVER_ID
    version: str = __version__

    @property
    def slack_x(self) -> float:
        return max(0.0, self.budgets.x - self.allocation.total_x)

    @property
    def slack_y(self) -> float:
        return max(0.0, self.budgets.y - self.allocation.total_y)

    def render(self) -> str:
        lines = [
            f"solver: {self.solver} {self.version}",
            f"scenario: {self.scenario}",
            f"objective: {self.objective}",
            f"value: {fmt(self.value)}",
            f"budget_x: {fmt(self.budgets.x)}",
            f"budget_y: {fmt(self.budgets.y)}",
            f"epsilon: {fmt(self.epsilon)}",
            f"mesh: {self.mesh_x}x{self.mesh_y}",
            f"slack_x: {fmt(self.slack_x)}",
            f"slack_y: {fmt(self.slack_y)}",
            f"duration_s: {self.duration_s:.3f}",
        ]
        lines += [f"inner {k}: {fmt(v)}" for k, v in self.allocation.inner.items()]
        lines += [f"outer {k}: {fmt(v)}" for k, v in self.allocation.outer.items()]
        return "\n".join(lines) + "\n"


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="layered-defense", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    def common(p):
        p.add_argument("scenario", nargs="?", help="bundled scenario name or path to a scenario file")
        p.add_argument("--objective", choices=OBJECTIVES)
        p.add_argument("--epsilon", type=float)
        p.add_argument("--budget-x", type=float)
        p.add_argument("--budget-y", type=float)
        p.add_argument("--out", help="write output here instead of stdout")
        p.add_argument("--oracle-cap", type=int, default=DEFAULT_CAP)
        return p

    common(sub.add_parser("solve", help="optimal allocation for one budget pair"))
    common(sub.add_parser("sweep", help="full value surface as CSV"))
    ev = common(sub.add_parser("evaluate", help="score a given allocation"))
    ev.add_argument(
        "--allocation",
        required=True,
        help="'id=value,...' or a YAML file mapping sensor ids to budgets",
    )
    common(sub.add_parser("verify", help="compare the DP against brute-force enumeration"))
    cv = common(sub.add_parser("converge", help="mesh-refinement report as CSV"))
    cv.add_argument("--halvings", type=int, default=3)
    return parser


def _scenario(args) -> Scenario:
    if args.epsilon is not None and not args.epsilon > 0:
        raise NonpositiveStep(f"--epsilon must be positive, got {args.epsilon}")
    if not args.scenario:
        raise UsageError("a scenario name or path is required")
    sc = load_scenario(args.scenario)
    budgets = BudgetPair(
        sc.budgets.x if args.budget_x is None else args.budget_x,
        sc.budgets.y if args.budget_y is None else args.budget_y,
    )
    sc = replace(
        sc,
        budgets=budgets,
        epsilon=sc.epsilon if args.epsilon is None else args.epsilon,
        objective=args.objective or sc.objective,
    )
    make_mesh(sc.budgets.x, sc.epsilon)
    make_mesh(sc.budgets.y, sc.epsilon)
    return sc


def _emit(text: str, out):
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _parse_allocation(spec: str, sc: Scenario) -> Allocation:
    path = Path(spec)
    if path.is_file():
        data = yaml.safe_load(path.read_text()) or {}
        if not isinstance(data, dict):
            raise UsageError("--allocation file must map sensor ids to numbers")
        items = list(data.items())
    else:
        items = []
        for part in filter(None, (p.strip() for p in spec.split(","))):
            key, sep, val = part.partition("=")
            if not sep:
                raise UsageError(f"--allocation entry {part!r} is not id=value")
            items.append((key.strip(), val))
    inner_ids = {s.id for s in sc.network.inner}
    outer_ids = {s.id for s in sc.network.outer}
    alloc = Allocation()
    for key, val in items:
        key = str(key)
        try:
            v = float(val)
        except (TypeError, ValueError):
            raise UsageError(f"--allocation value for {key!r} is not a number") from None
        if key in inner_ids:
            alloc.inner[key] = v
        elif key in outer_ids:
            alloc.outer[key] = v
        else:
            raise UsageError(f"--allocation names unknown sensor {key!r}")
    return alloc


def _cmd_solve(args) -> int:
    sc = _scenario(args)
    t0 = time.perf_counter()
    sol = solve(sc.network, sc.budgets, sc.epsilon, sc.objective)
    report = SolveReport(
        sc.name or args.scenario,
        sc.objective,
        sol.value,
        sol.allocation,
        sc.budgets,
        sc.epsilon,
        sol.table.x_mesh.size,
        sol.table.y_mesh.size,
        time.perf_counter() - t0,
    )
    _emit(report.render(), args.out)
    return 0


def _cmd_sweep(args) -> int:
    sc = _scenario(args)
    table = solve(sc.network, sc.budgets, sc.epsilon, sc.objective).table
    if args.out:
        n = export_surface(table, args.out)
        log.info("wrote %d bytes to %s", n, args.out)
    else:
        sys.stdout.write(surface_csv(table))
    return 0


def _cmd_evaluate(args) -> int:
    sc = _scenario(args)
    alloc = _parse_allocation(args.allocation, sc)
    score = eval_expected if sc.objective == EXPECTED else eval_minimax
    value = score(sc.network, alloc, sc.budgets)
    _emit(f"objective: {sc.objective}\nvalue: {fmt(value)}\n", args.out)
    return 0


def _cmd_verify(args) -> int:
    sc = _scenario(args)
    dp = solve(sc.network, sc.budgets, sc.epsilon, sc.objective)
    ref = grid_enumerate(sc.network, sc.budgets, sc.epsilon, sc.objective, cap=args.oracle_cap)
    gap = abs(dp.value - ref.value)
    ok = gap <= VERIFY_TOL
    text = (
        f"objective: {sc.objective}\n"
        f"dp_value: {fmt(dp.value)}\n"
        f"oracle_value: {fmt(ref.value)}\n"
        f"discrepancy: {gap:.3e}\n"
        f"status: {'ok' if ok else 'MISMATCH'}\n"
    )
    _emit(text, args.out)
    return 0 if ok else 2


def _cmd_converge(args) -> int:
    sc = _scenario(args)
    if args.halvings < 0:
        raise UsageError("--halvings must be >= 0")
    report = refinement_study(sc.network, sc.budgets, sc.epsilon, args.halvings, sc.objective)
    if args.out:
        export_convergence(report, args.out)
    else:
        sys.stdout.write(convergence_csv(report))
    return 0


COMMANDS = {
    "solve": _cmd_solve,
    "sweep": _cmd_sweep,
    "evaluate": _cmd_evaluate,
    "verify": _cmd_verify,
    "converge": _cmd_converge,
}


def run_cli(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        if args.command is None:
            raise UsageError("a subcommand is required: " + ", ".join(COMMANDS))
        return COMMANDS[args.command](args)
    except InputError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    except Exception as exc:  # noqa: BLE001
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


def main():
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s %(message)s")
    sys.exit(run_cli())


if __name__ == "__main__":
    main()
