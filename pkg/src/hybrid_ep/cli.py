"""Command-line entry point: ``hybrid-ep {solve,bench,tables,check}``.

Exit codes: 0 success, 1 configuration error, 2 solver failure, 3 oracle
suite failure.
"""
from __future__ import annotations

import argparse
import sys
from dataclasses import replace
from typing import Optional, Sequence

import numpy as np

from .bench import (
    ExperimentSpec,
    format_point,
    load_spec,
    reproduce_table,
    run_experiment,
    run_oracle_suite,
    write_trace,
)
from .problems import EXAMPLE1_STARTS, EXAMPLE2_STARTS
from .solvers import ALGORITHMS, ConfigError, Status, solve

EXIT_OK, EXIT_CONFIG, EXIT_SOLVER, EXIT_ORACLE = 0, 1, 2, 3

_OVERRIDES = (("lam", "lam"), ("k", "k"), ("eta", "eta"), ("tol", "tol"), ("max_iter", "max_iter"))


class _Parser(argparse.ArgumentParser):
    # Usage errors are configuration errors; argparse would exit with 2.
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


def _add_solver_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="experiment TOML file")
    p.add_argument("--algorithm", choices=sorted(ALGORITHMS), help="algorithm id")
    p.add_argument("--lambda", dest="lam", type=float, help="step size lambda")
    p.add_argument("--k", type=float, help="cut weight k (hybrid-ne, vi-ne)")
    p.add_argument("--eta", type=float, help="Armijo ratio in (0, 1)")
    p.add_argument("--tol", type=float, help="stopping tolerance")
    p.add_argument("--max-iter", dest="max_iter", type=int, help="iteration cap")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="hybrid-ep", description="Hybrid methods for equilibrium problems.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="run one algorithm from one start point and print its trace")
    _add_solver_flags(p)
    p.add_argument("--problem", choices=("example1", "nash-cournot"), help="built-in problem (without --config)")
    p.add_argument("--x0", help="start point as comma-separated numbers (default: first configured start)")
    p.add_argument("--trace", metavar="CSV", help="write the iteration trace to this CSV file")

    p = sub.add_parser("bench", help="run an experiment file and write its results CSV")
    _add_solver_flags(p)
    p.add_argument("--trace", metavar="DIR", help="write one trace CSV per row into this directory")

    p = sub.add_parser("tables", help="re-run the benchmark tables and compare iteration counts")
    p.add_argument("--table", choices=("table1", "table2", "all"), default="all")

    p = sub.add_parser("check", help="run the brute-force oracle suite")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trials", type=int, default=100)
    return parser


def _default_spec(problem: str) -> ExperimentSpec:
    if problem == "example1":
        return ExperimentSpec(
            {"builtin": "example1"},
            ("hybrid-ne",),
            EXAMPLE1_STARTS,
            {"lam": 0.2, "k": 6, "stop_rule": "dist_to_reference", "y0": [0.0, 0.0]},
        )
    return ExperimentSpec(
        {"builtin": "nash-cournot"},
        ("hybrid-ne",),
        EXAMPLE2_STARTS,
        {"lam_scale": 0.2, "k": 6, "stop_rule": "residual_xy", "y0": [0.0] * 5},
    )


def _apply_overrides(spec: ExperimentSpec, args) -> ExperimentSpec:
    config = dict(spec.config)
    for attr, key in _OVERRIDES:
        value = getattr(args, attr, None)
        if value is not None:
            if key == "lam":
                config.pop("lam_scale", None)
            config[key] = value
    algorithms = (args.algorithm,) if getattr(args, "algorithm", None) else spec.algorithms
    return replace(spec, config=config, algorithms=algorithms)


def _parse_point(text: str) -> np.ndarray:
    try:
        return np.array([float(v) for v in text.replace(";", ",").split(",")])
    except ValueError:
        raise ConfigError(f"cannot parse start point {text!r}", "x0") from None


def _cmd_solve(args) -> int:
    if args.config:
        spec = load_spec(args.config)
    else:
        spec = _default_spec(args.problem or "example1")
    spec = _apply_overrides(spec, args)
    if args.x0 is not None:
        spec = replace(spec, start_points=(_parse_point(args.x0),))
    problem = spec.build_problem()
    config = spec.solver_config(problem)
    alg = spec.algorithms[0]
    report = solve(alg, problem, config, spec.start_points[0], spec.y0())
    print("iter,residual_xy,step_norm,epsilon_n,dist_to_reference")
    for t in report.trace:
        dist = "" if t.dist_to_reference is None else f"{t.dist_to_reference:.6e}"
        print(f"{t.iter},{t.residual_xy:.6e},{t.step_norm:.6e},{t.epsilon_n:.6e},{dist}")
    print(
        f"# {alg}: status={report.status.value} iterations={report.iterations} "
        f"residual={report.final_residual:.3e} x={format_point(report.final_point)}"
    )
    if report.message:
        print(f"# {report.message}")
    if args.trace:
        write_trace(report, args.trace)
    return EXIT_OK if report.ok else EXIT_SOLVER


def _cmd_bench(args) -> int:
    if not args.config:
        raise ConfigError("bench needs --config", "config")
    spec = _apply_overrides(load_spec(args.config), args)
    rows = run_experiment(spec, trace_dir=args.trace)
    print("algorithm,x0,iters,cpu_s,residual,status")
    for r in rows:
        print(f"{r.algorithm},{format_point(r.start_point)},{r.iterations},{r.elapsed_seconds:.3f},{r.final_residual:.3e},{r.status}")
    ok = {Status.CONVERGED.value, Status.EXACT_SOLUTION.value}
    return EXIT_OK if all(r.status in ok for r in rows) else EXIT_SOLVER


def _cmd_tables(args) -> int:
    ids = ("table1", "table2") if args.table == "all" else (args.table,)
    solver_ok = True
    for table_id in ids:
        report = reproduce_table(table_id)
        print(report.to_markdown())
        print()
        solver_ok &= all(c.status == Status.CONVERGED.value for c in report.cells)
    return EXIT_OK if solver_ok else EXIT_SOLVER


def _cmd_check(args) -> int:
    if args.trials < 1:
        raise ConfigError(f"--trials must be at least 1, got {args.trials}", "trials")
    report = run_oracle_suite(args.seed, args.trials)
    print(report.format())
    return EXIT_OK if report.passed else EXIT_ORACLE


COMMANDS = {"solve": _cmd_solve, "bench": _cmd_bench, "tables": _cmd_tables, "check": _cmd_check}


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except ConfigError as exc:
        where = f" [{exc.field}]" if exc.field else ""
        print(f"config error{where}: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
