"""Command-line interface: solve one subgame, emit the five-row table, run
parameter sweeps, or cross-check against the best-response oracle.

Exit codes: 0 success, 1 input error, 2 no equilibrium (solve only).
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .config import ConfigError, load_market_config, load_sweep_spec
from .market import InvalidParameterError, MarketParams, Scenario
from .oracle import find_fixed_point
from .policy import solve_subgame
from .sweep import (
    build_symmetric_table,
    run_sweep,
    sweep_rows,
    write_sweep_csv,
    write_sweep_json,
    write_table_csv,
    write_table_json,
)

EXIT_OK = 0
EXIT_INPUT_ERROR = 1
EXIT_NO_EQUILIBRIUM = 2


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bundlematch",
        description=(
            "Nash equilibria of a two-retailer complementary-goods pricing game "
            "with mixed bundling and price-matching guarantees"
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_market_flags(p: argparse.ArgumentParser) -> None:
        p.add_argument("--config", type=Path, default=None, help="market config path")
        p.add_argument("--bundling", type=int, choices=(0, 1), default=1)
        p.add_argument(
            "--pmg",
            nargs=2,
            metavar=("r1=cm|nocm", "r2=cm|nocm"),
            default=None,
            help="PMG flags, e.g. --pmg r1=cm r2=nocm (ignored when --bundling 0)",
        )
        p.add_argument("--tol", type=float, default=1e-9, help="feasibility tolerance")

    solve = sub.add_parser("solve", help="solve one subgame and print the equilibrium")
    add_market_flags(solve)
    solve.add_argument(
        "--verify",
        choices=("oracle",),
        default=None,
        help="append a best-response fixed-point comparison",
    )

    table = sub.add_parser("table", help="emit the five-row symmetric-strategy table")
    table.add_argument("--config", type=Path, default=None)
    table.add_argument("--out", type=Path, default=Path("."), help="output directory")
    table.add_argument("--json", action="store_true", help="also write a JSON mirror")

    sweep = sub.add_parser("sweep", help="run a grid sweep from a sweep-spec file")
    sweep.add_argument("--config", type=Path, required=True, help="sweep-spec path")
    sweep.add_argument("--out", type=Path, default=Path("."), help="output directory")
    sweep.add_argument("--threads", type=int, default=1)
    sweep.add_argument("--json", action="store_true", help="also write JSON mirrors")

    verify = sub.add_parser("verify", help="cross-check closed forms against the oracle")
    add_market_flags(verify)
    return parser


def _parse_pmg(values: list[str] | None) -> tuple[bool, bool]:
    flags = {"r1": False, "r2": False}
    if values is None:
        return flags["r1"], flags["r2"]
    for item in values:
        key, _, setting = item.partition("=")
        key, setting = key.strip().lower(), setting.strip().lower()
        if key not in flags or setting not in ("cm", "nocm"):
            raise ConfigError("--pmg", None, f"expected rN=cm|nocm, got {item!r}")
        flags[key] = setting == "cm"
    return flags["r1"], flags["r2"]


def _load_params(config: Path | None) -> MarketParams:
    if config is None:
        return MarketParams.baseline()
    return load_market_config(config)


def _scenario_from_args(args: argparse.Namespace) -> Scenario:
    pmg_r1, pmg_r2 = _parse_pmg(args.pmg)
    if args.bundling == 0:
        return Scenario.no_bundle()
    return Scenario.bundled(pmg_r1, pmg_r2)


def _print_solution(params: MarketParams, scenario: Scenario, solution) -> None:
    print(f"scenario: {scenario.label()} (bundling={scenario.bundling})")
    if solution.chosen is None:
        print("no feasible equilibrium (all regime candidates rejected)")
        for cand in solution.candidates:
            print(f"  candidate {cand.theorem_id}: infeasible, {cand.condition_report.summary()}")
        return
    r = solution.chosen
    d = r.demands
    print(f"selected candidate: {r.theorem_id} (regime {r.regime.value})")
    print(
        "prices: "
        f"p_r1_i1={r.prices.p1:.6g} p_r1_i2={r.prices.p2:.6g} "
        f"p_r1_b={r.prices.r1_bundle_equivalent():.6g} p_r2_b={r.prices.pb2:.6g}"
    )
    print(
        "demands: "
        f"d_l_i1={d.d_l_i1:.6g} d_l_i2={d.d_l_i2:.6g} d_l_ib={d.d_l_ib:.6g} "
        f"d_q_ib={d.d_q_ib:.6g} d_l_jb={d.d_l_jb:.6g} d_q_jb={d.d_q_jb:.6g} d_s={d.d_s:.6g}"
    )
    print(
        "profits (thousands): "
        f"pi_r1={r.profits.pi_r1 / 1000.0:.6g} pi_r2={r.profits.pi_r2 / 1000.0:.6g} "
        f"welfare={r.profits.welfare / 1000.0:.6g}"
    )
    print(f"foc residual: {r.foc_residual:.3g}")
    print(f"conditions: {r.condition_report.summary()}")
    for check in r.condition_report.inequalities:
        mark = "ok " if check.satisfied else "FAIL"
        print(f"  [{mark}] {check.label}: {check.lhs:.6g} {check.relation} {check.rhs:.6g}")
    for warning in solution.warnings:
        print(f"warning: {warning}")


def _cmd_solve(args: argparse.Namespace) -> int:
    params = _load_params(args.config)
    scenario = _scenario_from_args(args)
    oracle_check = args.verify == "oracle"
    solution = solve_subgame(params, scenario, tol=args.tol, oracle_check=oracle_check)
    _print_solution(params, scenario, solution)
    if oracle_check and solution.oracle is not None:
        outcome = solution.oracle
        if solution.chosen is not None and outcome.converged:
            scale = max(1.0, max(abs(v) for v in solution.chosen.prices.present()))
            dev = solution.chosen.prices.sup_distance(outcome.prices) / scale
            print(
                f"oracle: converged in {outcome.iterations} iterations; "
                f"max relative deviation {dev:.3e}"
            )
        else:
            status = "converged" if outcome.converged else "did not converge"
            print(f"oracle: {status} after {outcome.iterations} iterations")
    return EXIT_OK if solution.chosen is not None else EXIT_NO_EQUILIBRIUM


def _cmd_table(args: argparse.Namespace) -> int:
    params = _load_params(args.config)
    rows = build_symmetric_table(params)
    args.out.mkdir(parents=True, exist_ok=True)
    csv_path = args.out / "table.csv"
    write_table_csv(rows, csv_path)
    if args.json:
        write_table_json(rows, args.out / "table.json")
    print(csv_path.read_text(), end="")
    return EXIT_OK


def _cmd_sweep(args: argparse.Namespace) -> int:
    spec = load_sweep_spec(args.config)
    if args.threads < 1:
        raise ConfigError("--threads", None, "thread count must be >= 1")
    results = run_sweep(MarketParams.baseline(), spec, threads=args.threads)
    args.out.mkdir(parents=True, exist_ok=True)
    for label, cells in results.items():
        path = args.out / f"sweep_{label}.csv"
        write_sweep_csv(spec, cells, path)
        if args.json:
            write_sweep_json(spec, cells, args.out / f"sweep_{label}.json")
        n_exist = sum(cell.exists for cell in cells)
        print(f"{path}: {len(cells)} cells, {n_exist} with equilibria on both sides")
    return EXIT_OK


def _cmd_verify(args: argparse.Namespace) -> int:
    params = _load_params(args.config)
    scenario = _scenario_from_args(args)
    solution = solve_subgame(params, scenario, tol=args.tol)
    outcome = find_fixed_point(params, scenario)
    if solution.chosen is None:
        status = "converged" if outcome.converged else "did not converge"
        print(f"closed form: no feasible equilibrium; oracle {status} "
              f"after {outcome.iterations} iterations")
        return EXIT_OK
    scale = max(1.0, max(abs(v) for v in solution.chosen.prices.present()))
    if outcome.converged:
        dev = solution.chosen.prices.sup_distance(outcome.prices) / scale
        agrees = "agree" if dev <= 1e-4 else "DISAGREE"
        print(
            f"closed form {solution.chosen.theorem_id} and oracle {agrees}: "
            f"max relative deviation {dev:.3e} ({outcome.iterations} iterations)"
        )
    else:
        print(
            f"closed form {solution.chosen.theorem_id} feasible but oracle did not "
            f"converge within {outcome.iterations} iterations"
        )
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    handlers = {
        "solve": _cmd_solve,
        "table": _cmd_table,
        "sweep": _cmd_sweep,
        "verify": _cmd_verify,
    }
    try:
        return handlers[args.command](args)
    except (ConfigError, InvalidParameterError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT_ERROR


if __name__ == "__main__":
    sys.exit(main())
