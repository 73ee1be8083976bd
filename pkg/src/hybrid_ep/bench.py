"""Configuration-driven experiments, table reproduction and the oracle suite.

Experiment files are TOML. Top-level keys come first, then the ``[problem]``
and ``[solver]`` tables::

    algorithms = ["hybrid-ne", "eg-hybrid"]
    start_points = [[2, 5], [5, 5]]
    output = "example1.csv"          # relative to the config file
    seed = 0

    [problem]
    builtin = "example1"             # or "nash-cournot"

    [solver]
    lam = 0.2                        # or lam_scale = 0.2, meaning lam = 0.2 / c1
    k = 6
    eta = 0.5
    tol = 1e-3
    stop_rule = "dist_to_reference"
    max_iter = 20000
    y0 = [0, 0]                      # hybrid-ne / vi-ne only

A ``nash-cournot`` problem takes optional ``P``, ``Q``, ``q`` (inline row
lists, or a string naming a CSV file), ``norm`` ("spectral" or "frobenius")
and an optional feasible set ``A``, ``b``, ``lower``, ``upper``; missing
matrices default to the built-in five-firm instance.
"""
from __future__ import annotations

import csv
import math
import re
import sys
import time
from dataclasses import dataclass, field, fields
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from .geometry import (
    Box,
    HalfSpace,
    Polyhedron,
    project_two_halfspaces,
)
from .oracles import enumerate_qp
from .problems import (
    EXAMPLE1_STARTS,
    EXAMPLE2_P,
    EXAMPLE2_Q,
    EXAMPLE2_STARTS,
    EXAMPLE2_q,
    AffineOperator,
    EquilibriumProblem,
    make_example1,
    make_example2,
    make_nash_cournot,
    make_vi_bifunction,
)
from .qp import QuadraticObjective, prox_subproblem, solve_qp
from .solvers import (
    ALGORITHMS,
    ConfigError,
    HybridState,
    SolveReport,
    SolverConfig,
    Status,
    StopRule,
    solve,
    solve_hybrid_no_extrapolation,
)

__all__ = [
    "ExperimentSpec",
    "ResultRow",
    "load_spec",
    "run_experiment",
    "write_results",
    "write_trace",
    "TableCell",
    "TableReport",
    "reproduce_table",
    "OracleCheck",
    "OracleReport",
    "run_oracle_suite",
    "PUBLISHED_TABLE1",
    "PUBLISHED_TABLE2",
]

RESULT_COLUMNS = ("algorithm", "x0", "iters", "cpu_s", "residual", "status")
TRACE_COLUMNS = ("iter", "residual_xy", "step_norm", "epsilon_n", "dist_to_reference", "elapsed_s")
TABLE_ALGORITHMS = ("hybrid-ne", "eg-hybrid", "eg-growing", "armijo-hybrid")
# Published iteration counts, rows by start point, columns as TABLE_ALGORITHMS.
PUBLISHED_TABLE1 = ((57, 123, 57, 68), (51, 95, 55, 65), (54, 97, 64, 65), (54, 98, 59, 65))
PUBLISHED_TABLE2 = ((225, 1022, 958, 798), (369, 1666, 1021, 1187), (435, 2854, 923, 1226), (411, 2385, 1501, 1228))
TABLE1_BAND = 0.30
TABLE2_BAND = 0.50
TABLE2_MAX_ITER = 20_000
SOLVER_KEYS = {f.name for f in fields(SolverConfig)} | {"lam_scale", "y0"}


# ---------------------------------------------------------------------------
# Experiment specs


@dataclass(frozen=True)
class ExperimentSpec:
    """One experiment: a problem, algorithms, start points and solver settings.

    ``problem`` is the raw descriptor table (see the module docstring);
    ``config`` holds :class:`SolverConfig` fields plus the optional
    ``lam_scale`` and ``y0`` keys.
    """

    problem: dict
    algorithms: tuple
    start_points: tuple
    config: dict = field(default_factory=dict)
    output_path: Optional[str] = None
    seed: int = 0
    base_dir: str = "."

    def __post_init__(self):
        algs = tuple(self.algorithms)
        if not algs:
            raise ConfigError("at least one algorithm is required", "algorithms")
        for a in algs:
            if a not in ALGORITHMS:
                raise ConfigError(
                    f"unknown algorithm {a!r}; choose from {', '.join(ALGORITHMS)}", "algorithms"
                )
        pts = []
        for i, p in enumerate(self.start_points):
            try:
                arr = np.asarray(p, dtype=float).reshape(-1)
            except (TypeError, ValueError):
                raise ConfigError(f"start point {i} is not a numeric vector", f"start_points[{i}]") from None
            if arr.size == 0 or not np.all(np.isfinite(arr)):
                raise ConfigError(f"start point {i} must be a non-empty finite vector", f"start_points[{i}]")
            pts.append(arr)
        if not pts:
            raise ConfigError("at least one start point is required", "start_points")
        unknown = set(self.config) - SOLVER_KEYS
        if unknown:
            raise ConfigError(f"unknown solver keys: {', '.join(sorted(unknown))}", f"solver.{sorted(unknown)[0]}")
        if not isinstance(self.seed, int):
            raise ConfigError("seed must be an integer", "seed")
        object.__setattr__(self, "algorithms", algs)
        object.__setattr__(self, "start_points", tuple(pts))
        object.__setattr__(self, "problem", dict(self.problem))
        object.__setattr__(self, "config", dict(self.config))

    @classmethod
    def from_dict(cls, data: dict, base_dir: str = ".") -> "ExperimentSpec":
        known = {"algorithms", "start_points", "output", "seed", "problem", "solver"}
        unknown = set(data) - known
        if unknown:
            raise ConfigError(f"unknown top-level keys: {', '.join(sorted(unknown))}", sorted(unknown)[0])
        if "problem" not in data:
            raise ConfigError("missing [problem] table", "problem")
        return cls(
            problem=data["problem"],
            algorithms=tuple(data.get("algorithms", ())),
            start_points=tuple(data.get("start_points", ())),
            config=data.get("solver", {}),
            output_path=data.get("output"),
            seed=data.get("seed", 0),
            base_dir=base_dir,
        )

    def build_problem(self) -> EquilibriumProblem:
        desc = dict(self.problem)
        name = desc.pop("builtin", None)
        if name == "example1":
            if desc:
                raise ConfigError("example1 takes no parameters", f"problem.{next(iter(desc))}")
            problem = make_example1()
        elif name == "nash-cournot":
            problem = self._nash_cournot(desc)
        else:
            raise ConfigError(f"problem.builtin must be 'example1' or 'nash-cournot', got {name!r}", "problem.builtin")
        for i, p in enumerate(self.start_points):
            if p.size != problem.dim:
                raise ConfigError(
                    f"start point {i} has dimension {p.size}, problem has {problem.dim}", f"start_points[{i}]"
                )
        return problem

    def _matrix(self, desc: dict, key: str, default):
        if key not in desc:
            return default
        value = desc[key]
        if isinstance(value, str):
            path = Path(self.base_dir) / value
            try:
                return np.loadtxt(path, delimiter=",", ndmin=2 if key in ("P", "Q", "A") else 1)
            except (OSError, ValueError) as exc:
                raise ConfigError(f"cannot read {key} from {path}: {exc}", f"problem.{key}") from None
        try:
            return np.asarray(value, dtype=float)
        except (TypeError, ValueError):
            raise ConfigError(f"{key} must be numeric", f"problem.{key}") from None

    def _nash_cournot(self, desc: dict) -> EquilibriumProblem:
        allowed = {"P", "Q", "q", "norm", "A", "b", "lower", "upper"}
        extra = set(desc) - allowed
        if extra:
            raise ConfigError(f"unknown problem keys: {', '.join(sorted(extra))}", f"problem.{sorted(extra)[0]}")
        P = self._matrix(desc, "P", EXAMPLE2_P)
        Q = self._matrix(desc, "Q", EXAMPLE2_Q)
        q = self._matrix(desc, "q", EXAMPLE2_q)
        n = np.size(q)
        feasible = None
        if any(k in desc for k in ("A", "b", "lower", "upper")):
            A = self._matrix(desc, "A", np.zeros((0, n)))
            b = self._matrix(desc, "b", np.zeros(0))
            lower = self._matrix(desc, "lower", np.full(n, -np.inf))
            upper = self._matrix(desc, "upper", np.full(n, np.inf))
            try:
                feasible = Polyhedron(np.reshape(A, (-1, n)), b, Box(lower, upper))
            except ValueError as exc:
                raise ConfigError(f"invalid feasible set: {exc}", "problem.A") from None
        try:
            return make_nash_cournot(P, Q, q, desc.get("norm", "spectral"), feasible)
        except ValueError as exc:
            raise ConfigError(f"invalid Nash-Cournot data: {exc}", "problem") from None

    def solver_config(self, problem: EquilibriumProblem) -> SolverConfig:
        """Build and validate the :class:`SolverConfig` for ``problem``.

        ``lam_scale = s`` sets ``lam = s / c1``. The step-size bounds are
        checked whenever a listed algorithm relies on them.
        """
        cfg = dict(self.config)
        cfg.pop("y0", None)
        if "lam_scale" in cfg:
            if "lam" in cfg:
                raise ConfigError("give either lam or lam_scale, not both", "solver.lam_scale")
            cfg["lam"] = float(cfg.pop("lam_scale")) / problem.c1
        if "lam" not in cfg:
            raise ConfigError("solver.lam (or solver.lam_scale) is required", "solver.lam")
        try:
            config = SolverConfig(**cfg)
        except ConfigError as exc:
            raise ConfigError(str(exc), f"solver.{exc.field}" if exc.field else "solver") from None
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"invalid solver settings: {exc}", "solver") from None
        if any(a in ("hybrid-ne", "vi-ne") for a in self.algorithms):
            c1, c2 = problem.c1, problem.c2
            if "vi-ne" in self.algorithms and "hybrid-ne" not in self.algorithms:
                L = problem.bifunction.diag_lipschitz
                c1 = c2 = 0.5 * L
            try:
                config.validate(c1, c2)
            except ConfigError as exc:
                raise ConfigError(str(exc), f"solver.{exc.field}") from None
        return config

    def y0(self) -> Optional[np.ndarray]:
        y0 = self.config.get("y0")
        return None if y0 is None else np.asarray(y0, dtype=float)


def _error_location(message: str, text: str) -> str:
    # The decoder embeds "(at line L, column C)" or "(at end of document)".
    m = re.search(r"line (\d+), column (\d+)", message)
    if m:
        return f"line {m.group(1)}, column {m.group(2)}"
    lines = text.splitlines() or [""]
    return f"line {len(lines)}, column {len(lines[-1]) + 1}"


def load_spec(path) -> ExperimentSpec:
    """Read an :class:`ExperimentSpec` from a TOML file.

    Syntax errors are reported as :class:`ConfigError` with the line and
    column of the offending token.
    """
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}", "config") from None
    try:
        data = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"{path}:{_error_location(str(exc), text)}: {exc}", "config") from None
    return ExperimentSpec.from_dict(data, base_dir=str(path.parent))


# ---------------------------------------------------------------------------
# Running experiments


@dataclass(frozen=True)
class ResultRow:
    algorithm: str
    start_point: np.ndarray
    iterations: int
    elapsed_seconds: float
    final_residual: float
    status: str
    message: str = ""
    report: Optional[SolveReport] = field(default=None, repr=False, compare=False)


def format_point(x) -> str:
    return ";".join(repr(float(v)) for v in np.asarray(x).reshape(-1))


def run_experiment(spec: ExperimentSpec, trace_dir=None) -> list[ResultRow]:
    """Run every ``(algorithm, start point)`` pair of ``spec``.

    Rows run sequentially in algorithm-major order. Solver failures become
    row statuses and never abort the remaining rows. When ``spec.output_path``
    is set the rows are written as CSV; with ``trace_dir`` each row's
    iteration trace goes to ``<algorithm>_x<i>.csv`` in that directory.

    Raises
    ------
    ConfigError
        If the problem or solver settings are invalid.
    """
    problem = spec.build_problem()
    config = spec.solver_config(problem)
    y0 = spec.y0()
    rows = []
    for alg in spec.algorithms:
        for i, x0 in enumerate(spec.start_points):
            t0 = time.perf_counter()
            try:
                report = solve(alg, problem, config, x0, y0)
            except ConfigError as exc:
                row = ResultRow(alg, x0, 0, time.perf_counter() - t0, math.nan, "config_error", str(exc))
            except Exception as exc:  # recorded, sibling rows keep running
                row = ResultRow(alg, x0, 0, time.perf_counter() - t0, math.nan, "error", f"{type(exc).__name__}: {exc}")
            else:
                row = ResultRow(
                    alg,
                    x0,
                    report.iterations,
                    time.perf_counter() - t0,
                    report.final_residual,
                    report.status.value,
                    report.message,
                    report,
                )
                if trace_dir is not None:
                    write_trace(report, Path(trace_dir) / f"{alg}_x{i}.csv")
            rows.append(row)
    if spec.output_path:
        out = Path(spec.output_path)
        if not out.is_absolute():
            out = Path(spec.base_dir) / out
        write_results(rows, out)
    return rows


def write_results(rows: Sequence[ResultRow], path) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(RESULT_COLUMNS)
        for r in rows:
            w.writerow(
                [r.algorithm, format_point(r.start_point), r.iterations, f"{r.elapsed_seconds:.6f}", repr(float(r.final_residual)), r.status]
            )


def write_trace(report: SolveReport, path) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(TRACE_COLUMNS)
        for t in report.trace:
            w.writerow(
                [
                    t.iter,
                    repr(t.residual_xy),
                    repr(t.step_norm),
                    "" if math.isnan(t.epsilon_n) else repr(t.epsilon_n),
                    "" if t.dist_to_reference is None else repr(t.dist_to_reference),
                    f"{t.elapsed_s:.6f}",
                ]
            )


# ---------------------------------------------------------------------------
# Table reproduction


@dataclass(frozen=True)
class TableCell:
    algorithm: str
    start_label: str
    published: int
    ours: int
    status: str
    band: Optional[float]
    passed: bool

    @property
    def ratio(self) -> float:
        return self.ours / self.published


@dataclass
class TableReport:
    table_id: str
    cells: list
    checks: list = field(default_factory=list)  # (description, passed)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.cells) and all(ok for _, ok in self.checks)

    def to_markdown(self) -> str:
        lines = [
            f"### {self.table_id}",
            "",
            "| x0 | algorithm | published | ours | ratio | status | band | result |",
            "|---|---|---:|---:|---:|---|---|---|",
        ]
        for c in self.cells:
            band = "converged" if c.band is None else f"±{c.band:.0%}"
            lines.append(
                f"| {c.start_label} | {c.algorithm} | {c.published} | {c.ours} | {c.ratio:.3f} | {c.status} | {band} | {'PASS' if c.passed else 'FAIL'} |"
            )
        if self.checks:
            lines.append("")
            for desc, ok in self.checks:
                lines.append(f"- {desc}: {'PASS' if ok else 'FAIL'}")
        lines.append("")
        lines.append(f"overall: {'PASS' if self.passed else 'FAIL'}")
        return "\n".join(lines)


def _within(ours: int, published: int, band: float) -> bool:
    return abs(ours / published - 1.0) <= band


def reproduce_table(table_id: str, algorithms: Sequence[str] = TABLE_ALGORITHMS) -> TableReport:
    """Re-run one of the two benchmark tables and compare iteration counts.

    ``table1``: Example 1, ``lam=0.2, k=6, eta=0.5``, stop at
    ``|x_n - x_dagger| <= 1e-3``; every cell must be within 30% of the
    published count. ``table2``: the Nash-Cournot instance with
    ``lam = 1/(5 c1)``, stop at ``|y_n - x_n| <= 1e-3`` within 20000
    iterations; every run must converge, hybrid-ne counts must be within 50%
    and below the eg-hybrid count for the same start. ``hybrid-ne`` starts
    from ``y0 = 0`` in both tables.
    """
    if table_id == "table1":
        problem = make_example1()
        config = SolverConfig(lam=0.2, k=6, eta=0.5, tol=1e-3, stop_rule=StopRule.DIST_TO_REFERENCE, max_iter=TABLE2_MAX_ITER)
        starts, published = EXAMPLE1_STARTS, PUBLISHED_TABLE1
        labels = [f"({a:g},{b:g})" for a, b in starts]
    elif table_id == "table2":
        problem = make_example2("spectral")
        config = SolverConfig(
            lam=1.0 / (5.0 * problem.c1), k=6, eta=0.5, tol=1e-3, stop_rule=StopRule.RESIDUAL_XY, max_iter=TABLE2_MAX_ITER
        )
        starts, published = EXAMPLE2_STARTS, PUBLISHED_TABLE2
        labels = [f"x0^{i + 1}" for i in range(len(starts))]
    else:
        raise ConfigError(f"table_id must be 'table1' or 'table2', got {table_id!r}", "table_id")

    y0 = np.zeros(problem.dim)
    cells = []
    counts: dict = {}
    for i, x0 in enumerate(starts):
        for alg in algorithms:
            col = TABLE_ALGORITHMS.index(alg)
            report = solve(alg, problem, config, x0, y0)
            converged = report.status is Status.CONVERGED
            if table_id == "table1":
                band = TABLE1_BAND
            else:
                band = TABLE2_BAND if alg == "hybrid-ne" else None
            ok = converged and (band is None or _within(report.iterations, published[i][col], band))
            cells.append(TableCell(alg, labels[i], published[i][col], report.iterations, report.status.value, band, ok))
            counts[(alg, i)] = (report.iterations, converged)

    checks = []
    if table_id == "table2" and "hybrid-ne" in algorithms and "eg-hybrid" in algorithms:
        for i in range(len(starts)):
            ne, eg = counts[("hybrid-ne", i)], counts[("eg-hybrid", i)]
            checks.append((f"hybrid-ne ({ne[0]}) < eg-hybrid ({eg[0]}) at {labels[i]}", ne[1] and ne[0] < eg[0]))
    return TableReport(table_id, cells, checks)


# ---------------------------------------------------------------------------
# Oracle suite


@dataclass(frozen=True)
class OracleCheck:
    name: str
    trials: int
    max_violation: float
    threshold: float

    @property
    def passed(self) -> bool:
        return self.max_violation < self.threshold

    def line(self) -> str:
        verdict = "PASS" if self.passed else "FAIL"
        return f"{verdict}  {self.name:<34} trials={self.trials:<5d} max_violation={self.max_violation:.3e} (< {self.threshold:g})"


@dataclass
class OracleReport:
    seed: int
    checks: list

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def format(self) -> str:
        head = f"oracle suite, seed={self.seed}"
        tail = f"overall: {'PASS' if self.passed else 'FAIL'}"
        return "\n".join([head] + [c.line() for c in self.checks] + [tail])


def _random_halfspace(rng, d):
    return HalfSpace(rng.standard_normal(d), rng.standard_normal())


def _check_two_halfspaces(rng, trials):
    worst = 0.0
    for _ in range(trials):
        d = int(rng.integers(2, 11))
        h1, h2 = _random_halfspace(rng, d), _random_halfspace(rng, d)
        x = 3.0 * rng.standard_normal(d)
        A = np.vstack([h1.normal, h2.normal])
        b = np.array([h1.offset, h2.offset])
        p = project_two_halfspaces(x, h1, h2)
        ref = solve_qp(QuadraticObjective(np.eye(d), -x), Polyhedron(A, b))[0]
        worst = max(worst, float(np.linalg.norm(p - ref)))
    return worst


def _random_polyhedron(rng, d, m):
    # Positive slack at a random center keeps the set non-empty.
    A = rng.standard_normal((m, d))
    center = rng.standard_normal(d)
    b = A @ center + rng.uniform(0.1, 2.0, m)
    return Polyhedron(A.reshape(m, d), b)


def _check_qp_enumeration(rng, trials):
    worst = 0.0
    for _ in range(trials):
        d = int(rng.integers(1, 7))
        m = int(rng.integers(1, 9))
        poly = _random_polyhedron(rng, d, m)
        B = rng.standard_normal((d, d))
        H = B @ B.T + 0.5 * np.eye(d)
        c = 3.0 * rng.standard_normal(d)
        y = solve_qp(QuadraticObjective(H, c), poly)[0]
        A, b = poly.stacked()
        ref = enumerate_qp(H, c, A, b)
        worst = max(worst, float(np.linalg.norm(y - ref)))
    return worst


def _random_monotone_operator(rng, d):
    S = rng.standard_normal((d, d))
    K = rng.standard_normal((d, d))
    return AffineOperator(S @ S.T + (K - K.T), rng.standard_normal(d))


def _check_vi_prox(rng, trials):
    worst = 0.0
    for _ in range(trials):
        d = int(rng.integers(1, 6))
        m = int(rng.integers(1, 7))
        poly = _random_polyhedron(rng, d, m)
        op = _random_monotone_operator(rng, d)
        f = make_vi_bifunction(op)
        lam = float(rng.uniform(0.05, 1.0))
        x = 3.0 * rng.standard_normal(d)
        y = 3.0 * rng.standard_normal(d)
        prox = prox_subproblem(f, y, x, lam, poly)
        A, b = poly.stacked()
        ref = enumerate_qp(np.eye(d), -(x - lam * op(y)), A, b)
        worst = max(worst, float(np.linalg.norm(prox - ref)))
    return worst


def _check_example1_invariants(rng, trials):
    """Fejer inequality, cut membership and monotone anchor distance on Example 1.

    Runs cover the four benchmark starts with ``y0 = 0`` and then random
    starts with the default ``y0 = P_C(x0)``. An arbitrary ``y0`` is not
    used: the first cut is only guaranteed valid when ``y0`` is tied to ``x0``
    like a prox output.
    """
    problem = make_example1()
    seg = problem.reference_solution
    config = SolverConfig(lam=0.2, k=6, tol=1e-3, stop_rule=StopRule.DIST_TO_REFERENCE, max_iter=500)
    n_runs = max(1, min(trials, 20))
    starts = [(np.asarray(x0), np.zeros(2)) for x0 in EXAMPLE1_STARTS]
    starts += [(rng.uniform(-2.0, 6.0, 2), None) for _ in range(max(0, n_runs - len(starts)))]
    worst = 0.0
    for x0, y0 in starts[:n_runs]:
        sols = seg.sample(rng, 20)
        states: list[HybridState] = []
        solve_hybrid_no_extrapolation(problem, config, x0, y0, callback=states.append)
        prev_dist = 0.0
        for s in states:
            lhs = np.sum((s.y_next - sols) ** 2, axis=1)
            rhs = np.sum((s.x_cur - sols) ** 2, axis=1) + s.epsilon
            worst = max(worst, float(np.max(lhs - rhs)))
            for h in s.cuts:
                worst = max(worst, float(np.max(sols @ h.normal - h.offset)))
            dist = float(np.linalg.norm(s.x_cur - x0))
            worst = max(worst, prev_dist - dist)
            prev_dist = dist
    return worst, n_runs


def _check_lipschitz_type(rng, trials):
    """Sample ``f(x,y)+f(y,z) - f(x,z) + c1|x-y|^2 + c2|y-z|^2 >= 0`` on both examples."""
    worst = 0.0
    for problem, lo, hi in ((make_example1(), 0.0, 1.0), (make_example2(), -5.0, 5.0)):
        f = problem.bifunction
        for _ in range(trials):
            x, y, z = (rng.uniform(lo, hi, problem.dim) for _ in range(3))
            gap = f(x, y) + f(y, z) - f(x, z) + f.c1 * np.sum((x - y) ** 2) + f.c2 * np.sum((y - z) ** 2)
            scale = 1.0 + abs(f(x, y)) + abs(f(y, z)) + abs(f(x, z))
            worst = max(worst, -gap / scale)
    return worst


ORACLE_THRESHOLD = 1e-8


def run_oracle_suite(seed: int, trials: int) -> OracleReport:
    """Run the brute-force cross-checks with a seeded generator.

    Each check draws ``trials`` random instances (the Example 1 invariant
    check uses at most 20 runs) and reports its largest violation; a check
    passes when that is below 1e-8.

    Raises
    ------
    ValueError
        If ``trials < 1``.
    """
    if int(trials) != trials or trials < 1:
        raise ValueError(f"trials must be a positive integer, got {trials}")
    trials = int(trials)
    rng = np.random.default_rng(seed)
    checks = [
        OracleCheck("two-halfspace projection vs QP", trials, _check_two_halfspaces(rng, trials), ORACLE_THRESHOLD),
        OracleCheck("QP vs active-set enumeration", trials, _check_qp_enumeration(rng, trials), ORACLE_THRESHOLD),
        OracleCheck("VI prox vs projection", trials, _check_vi_prox(rng, trials), ORACLE_THRESHOLD),
    ]
    worst, runs = _check_example1_invariants(rng, trials)
    checks.append(OracleCheck("Fejer and cut invariants", runs, worst, ORACLE_THRESHOLD))
    checks.append(OracleCheck("Lipschitz-type inequality", trials, _check_lipschitz_type(rng, trials), ORACLE_THRESHOLD))
    return OracleReport(seed, checks)
