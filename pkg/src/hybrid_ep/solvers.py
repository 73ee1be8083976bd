"""Hybrid (outer-approximation) solvers for equilibrium problems.

Six methods share one reporting format:

``hybrid-ne``      one prox step per iteration; the cut ``C_n`` carries the
                   correction term ``eps_n`` and ``x_{n+1}`` is the projection
                   of ``x0`` onto the intersection of two half-spaces.
``eg-hybrid``      extragradient (two prox steps) with cuts intersected with C.
``eg-growing``     extragradient with an accumulating polyhedron of cuts.
``armijo-hybrid``  one prox step plus an Armijo linesearch and a projection.
``vi-ne``          ``hybrid-ne`` for a variational inequality, with the prox
                   step replaced by ``P_C(x - lam * u)``, ``u`` in ``A(y)``.
``sg-eg``          subgradient extragradient for differentiable bifunctions.

All solvers return a :class:`SolveReport`; subproblem failures and empty cuts
are reported through ``status`` rather than raised, so benchmark runs never
abort part-way.
"""
from __future__ import annotations

import enum
import time
from dataclasses import dataclass, field
from typing import Callable, Optional, Union

import numpy as np

from .geometry import (
    EmptySet,
    HalfSpace,
    Polyhedron,
    as_point,
    halfspace_from_ball_comparison,
    project_halfspace,
    project_two_halfspaces,
)
from .problems import EquilibriumProblem
from .qp import Infeasible, QPError, QuadraticObjective, project_polyhedron, prox_subproblem, solve_qp

__all__ = [
    "ConfigError",
    "Status",
    "StopRule",
    "SolverConfig",
    "HybridState",
    "ExtragradientState",
    "TraceRow",
    "SolveReport",
    "compute_epsilon",
    "solve_hybrid_no_extrapolation",
    "solve_extragradient_hybrid",
    "solve_extragradient_growing",
    "solve_armijo_hybrid",
    "solve_vi_no_extrapolation",
    "solve_subgradient_extragradient",
    "ALGORITHMS",
    "solve",
]

MAX_LINESEARCH = 100
ZERO_SUBGRADIENT = 1e-14


class ConfigError(ValueError):
    """Invalid solver or experiment configuration.

    ``field`` names the offending parameter when there is one.
    """

    def __init__(self, message: str, field: Optional[str] = None):
        super().__init__(message)
        self.field = field


class Status(str, enum.Enum):
    CONVERGED = "converged"
    EXACT_SOLUTION = "exact_solution"
    MAX_ITER = "max_iter"
    SUBPROBLEM_FAILURE = "subproblem_failure"
    EMPTY_CUT = "empty_cut"


class StopRule(str, enum.Enum):
    DIST_TO_REFERENCE = "dist_to_reference"  # ||x_n - P_sol(x0)|| <= tol
    RESIDUAL_XY = "residual_xy"  # ||y_n - x_n|| <= tol
    STEP_NORM = "step_norm"  # ||x_n - x_{n-1}|| <= tol


@dataclass(frozen=True)
class SolverConfig:
    """Step size ``lam``, cut weight ``k``, Armijo ratio ``eta`` and stopping controls.

    Bounds that depend on the problem's Lipschitz-type constants are checked
    by :meth:`validate`, which every solver calls.
    """

    lam: float
    k: float = 6.0
    eta: float = 0.5
    tol: float = 1e-3
    exact_stop_tol: float = 1e-9
    max_iter: int = 10_000
    qp_tol: float = 1e-10
    stop_rule: StopRule = StopRule.STEP_NORM
    alpha: Union[float, Callable[[int], float]] = 0.0

    def __post_init__(self):
        object.__setattr__(self, "stop_rule", StopRule(self.stop_rule))
        if not (np.isfinite(self.lam) and self.lam > 0):
            raise ConfigError(f"lam must be positive, got {self.lam}", "lam")
        if not 0.0 < self.eta < 1.0:
            raise ConfigError(f"eta must lie in (0, 1), got {self.eta}", "eta")
        if not self.tol > 0:
            raise ConfigError(f"tol must be positive, got {self.tol}", "tol")
        if not self.exact_stop_tol >= 0:
            raise ConfigError("exact_stop_tol must be nonnegative", "exact_stop_tol")
        if int(self.max_iter) != self.max_iter or self.max_iter < 1:
            raise ConfigError(f"max_iter must be a positive integer, got {self.max_iter}", "max_iter")
        if not self.qp_tol > 0:
            raise ConfigError("qp_tol must be positive", "qp_tol")

    def validate(self, c1: float, c2: float) -> "SolverConfig":
        """Check ``0 < lam < 1/(2(c1+c2))`` and ``k > 1/(1 - 2 lam (c1+c2))``."""
        c = c1 + c2
        if c > 0:
            lam_max = 1.0 / (2.0 * c)
            if not self.lam < lam_max:
                raise ConfigError(
                    f"lam={self.lam} violates lam < 1/(2(c1+c2)) = {lam_max:.6g}", "lam"
                )
        k_min = 1.0 / (1.0 - 2.0 * self.lam * c)
        if not self.k > k_min:
            raise ConfigError(
                f"k={self.k} violates k > 1/(1 - 2 lam (c1+c2)) = {k_min:.6g}", "k"
            )
        return self

    def alpha_at(self, n: int) -> float:
        a = self.alpha(n) if callable(self.alpha) else self.alpha
        if not 0.0 <= a < 1.0:
            raise ConfigError(f"alpha_n must lie in [0, 1), got {a} at n={n}", "alpha")
        return float(a)


@dataclass(frozen=True)
class HybridState:
    """Iterates of one pass of the single-prox hybrid method.

    ``x_prev, x_cur`` are ``x_{n-1}, x_n``; ``y_prev, y_cur, y_next`` are
    ``y_{n-1}, y_n, y_{n+1}``. ``cuts`` holds ``(C_n, Q_n)`` and ``x_next`` the
    projection of ``x0`` onto their intersection.
    """

    x_prev: np.ndarray
    x_cur: np.ndarray
    y_prev: np.ndarray
    y_cur: np.ndarray
    y_next: np.ndarray
    epsilon: float
    iter: int
    x_next: Optional[np.ndarray] = None
    cuts: tuple = ()


@dataclass(frozen=True)
class ExtragradientState:
    x_cur: np.ndarray
    y: np.ndarray
    z: np.ndarray
    x_next: np.ndarray
    iter: int
    cuts: tuple = ()
    linesearch_power: Optional[int] = None


@dataclass(frozen=True)
class TraceRow:
    iter: int
    residual_xy: float
    step_norm: float
    epsilon_n: float
    dist_to_reference: Optional[float]
    elapsed_s: float


@dataclass
class SolveReport:
    algorithm: str
    status: Status
    final_point: np.ndarray
    iterations: int
    trace: list = field(default_factory=list)
    final_residual: float = float("nan")
    message: str = ""
    counters: dict = field(default_factory=dict)
    elapsed_s: float = 0.0

    @property
    def ok(self) -> bool:
        return self.status in (Status.CONVERGED, Status.EXACT_SOLUTION)


def compute_epsilon(state: HybridState, lam: float, k: float, c1: float, c2: float) -> float:
    """``k|x_n - x_{n-1}|^2 + 2 lam c2 |y_n - y_{n-1}|^2 - (1 - 1/k - 2 lam c1)|y_{n+1} - y_n|^2``."""
    dx = state.x_cur - state.x_prev
    dy = state.y_cur - state.y_prev
    dy_next = state.y_next - state.y_cur
    return float(
        k * (dx @ dx) + 2.0 * lam * c2 * (dy @ dy) - (1.0 - 1.0 / k - 2.0 * lam * c1) * (dy_next @ dy_next)
    )


def _q_cut(x0: np.ndarray, x: np.ndarray) -> HalfSpace:
    # {z : <x0 - x, z - x> <= 0}
    a = x0 - x
    return HalfSpace(a, a @ x)


def _with_cuts(feasible: Polyhedron, *cuts: HalfSpace) -> Polyhedron:
    if any(h.is_empty for h in cuts):
        raise EmptySet("degenerate cut is empty")
    rows = [h for h in cuts if not h.degenerate]
    if not rows:
        return feasible
    return feasible.with_constraints([h.normal for h in rows], [h.offset for h in rows])


def _project_onto(x0: np.ndarray, feasible: Polyhedron, qp_tol: float) -> np.ndarray:
    return solve_qp(QuadraticObjective(np.eye(x0.size), -x0), feasible, qp_tol)[0]


class _Run:
    """Bookkeeping shared by all solvers: timing, trace rows, stop rules."""

    def __init__(self, algorithm: str, config: SolverConfig, x0: np.ndarray, reference: Optional[np.ndarray]):
        self.algorithm = algorithm
        self.config = config
        self.x0 = x0
        self.reference = reference
        self.trace: list[TraceRow] = []
        self.counters: dict[str, int] = {}
        self.t0 = time.perf_counter()
        if config.stop_rule is StopRule.DIST_TO_REFERENCE and reference is None:
            raise ConfigError("stop rule dist_to_reference needs a problem with a known solution set", "stop_rule")

    def count(self, key: str, inc: int = 1) -> None:
        self.counters[key] = self.counters.get(key, 0) + inc

    def dist(self, x: np.ndarray) -> Optional[float]:
        return None if self.reference is None else float(np.linalg.norm(x - self.reference))

    def stop_residual(self, n: int, x, x_prev, residual_xy: Optional[float]) -> Optional[float]:
        """Residual of the configured stop rule at ``x_n``, or None when not yet defined."""
        rule = self.config.stop_rule
        if rule is StopRule.DIST_TO_REFERENCE:
            return self.dist(x)
        if rule is StopRule.RESIDUAL_XY:
            return residual_xy
        return float(np.linalg.norm(x - x_prev)) if n > 0 else None

    def row(self, n, residual_xy, x_cur, x_next, eps=float("nan")) -> None:
        self.trace.append(
            TraceRow(
                iter=n,
                residual_xy=float(residual_xy),
                step_norm=float(np.linalg.norm(x_next - x_cur)),
                epsilon_n=float(eps),
                dist_to_reference=self.dist(x_cur),
                elapsed_s=time.perf_counter() - self.t0,
            )
        )

    def report(self, status: Status, x, n: int, residual=float("nan"), message: str = "") -> SolveReport:
        return SolveReport(
            algorithm=self.algorithm,
            status=status,
            final_point=np.array(x, dtype=float),
            iterations=n,
            trace=self.trace,
            final_residual=float(residual),
            message=message,
            counters=dict(self.counters),
            elapsed_s=time.perf_counter() - self.t0,
        )


def _reference_point(problem: EquilibriumProblem, x0: np.ndarray) -> Optional[np.ndarray]:
    ref = problem.reference_solution
    return None if ref is None else ref.project(x0)


def _hybrid_ne_loop(
    algorithm: str,
    step: Callable[[np.ndarray, np.ndarray], np.ndarray],
    feasible: Polyhedron,
    c1: float,
    c2: float,
    config: SolverConfig,
    x0,
    y0,
    reference: Optional[np.ndarray],
    callback,
) -> SolveReport:
    x0 = as_point(x0, feasible.dim)
    y0 = project_polyhedron(x0, feasible, config.qp_tol) if y0 is None else as_point(y0, feasible.dim)
    if not feasible.contains(y0):
        raise ConfigError("y0 must lie in the feasible set", "y0")
    run = _Run(algorithm, config, x0, reference)
    lam, k = config.lam, config.k

    # Initialization x_1 = x_0, y_1 = y_0: the first eps has only its last term.
    x_prev = x_cur = x0
    y_prev = y_cur = y0
    for n in range(config.max_iter + 1):
        residual_xy = float(np.linalg.norm(y_cur - x_cur))
        # y_0 is user-chosen rather than computed from x_0, so the pair
        # residual only becomes meaningful after the first pass.
        res = run.stop_residual(n, x_cur, x_prev, residual_xy if n > 0 else None)
        if res is not None and res <= config.tol:
            return run.report(Status.CONVERGED, x_cur, n, res)
        if n == config.max_iter:
            return run.report(Status.MAX_ITER, x_cur, n, res if res is not None else residual_xy)

        try:
            y_next = step(y_cur, x_cur)
        except QPError as exc:
            return run.report(Status.SUBPROBLEM_FAILURE, x_cur, n, residual_xy, str(exc))
        run.count("prox_solves")
        if max(np.linalg.norm(y_next - y_cur), residual_xy) <= config.exact_stop_tol:
            return run.report(Status.EXACT_SOLUTION, x_cur, n, residual_xy)

        state = HybridState(x_prev, x_cur, y_prev, y_cur, y_next, 0.0, n)
        eps = compute_epsilon(state, lam, k, c1, c2)
        C_n = halfspace_from_ball_comparison(x_cur, y_next, eps)
        Q_n = _q_cut(x0, x_cur)
        try:
            x_next = project_two_halfspaces(x0, C_n, Q_n)
        except EmptySet as exc:
            return run.report(Status.EMPTY_CUT, x_cur, n, residual_xy, str(exc))
        run.row(n, residual_xy, x_cur, x_next, eps)
        if callback is not None:
            callback(HybridState(x_prev, x_cur, y_prev, y_cur, y_next, eps, n, x_next, (C_n, Q_n)))
        x_prev, x_cur = x_cur, x_next
        y_prev, y_cur = y_cur, y_next
    raise AssertionError("unreachable")


def solve_hybrid_no_extrapolation(
    problem: EquilibriumProblem,
    config: SolverConfig,
    x0,
    y0=None,
    callback: Optional[Callable[[HybridState], None]] = None,
) -> SolveReport:
    """Hybrid method without extrapolation step.

    Each pass solves one strongly convex program

        y_{n+1} = argmin_{y in C} lam f(y_n, y) + 1/2 |x_n - y|^2

    then projects ``x0`` onto ``C_n & Q_n`` where

        C_n = {z : |y_{n+1} - z|^2 <= |x_n - z|^2 + eps_n}
        Q_n = {z : <x0 - x_n, z - x_n> <= 0}

    are half-spaces, so the projection is closed form.

    Parameters
    ----------
    problem : EquilibriumProblem
    config : SolverConfig
        Must satisfy ``config.validate(c1, c2)``.
    x0 : array_like
        Anchor and first iterate; may lie outside ``C``.
    y0 : array_like, optional
        Initial prox base in ``C``; defaults to the projection of ``x0`` on ``C``.
    callback : callable, optional
        Called with a :class:`HybridState` after every pass.
    """
    f, C = problem.bifunction, problem.feasible
    config.validate(f.c1, f.c2)

    def step(y, x):
        return prox_subproblem(f, y, x, config.lam, C, config.qp_tol)

    x0 = as_point(x0, C.dim)
    return _hybrid_ne_loop(
        "hybrid-ne", step, C, f.c1, f.c2, config, x0, y0, _reference_point(problem, x0), callback
    )


def solve_vi_no_extrapolation(
    op: Callable[[np.ndarray], np.ndarray],
    feasible: Polyhedron,
    config: SolverConfig,
    x0,
    y0=None,
    lipschitz: Optional[float] = None,
    reference=None,
    callback: Optional[Callable[[HybridState], None]] = None,
) -> SolveReport:
    """Hybrid method without extrapolation for the VI ``<u*, y - x*> >= 0``.

    ``op(y)`` returns one element ``u`` of ``A(y)`` (for a single-valued
    operator, ``A(y)`` itself); the step is ``y_{n+1} = P_C(x_n - lam * u_n)``.
    The cut constants are ``c1 = c2 = L/2``.
    """
    if lipschitz is None:
        lipschitz = getattr(op, "lipschitz", None)
        if lipschitz is None:
            raise ConfigError("the operator's Lipschitz constant is required", "lipschitz")
    c = 0.5 * float(lipschitz)
    config.validate(c, c)

    def step(y, x):
        u = np.asarray(op(y), dtype=float)
        return project_polyhedron(x - config.lam * u, feasible, config.qp_tol)

    x0 = as_point(x0, feasible.dim)
    ref = None
    if reference is not None:
        ref = reference.project(x0) if hasattr(reference, "project") else as_point(reference, feasible.dim)
    return _hybrid_ne_loop("vi-ne", step, feasible, c, c, config, x0, y0, ref, callback)


def _extragradient_loop(
    algorithm: str,
    problem: EquilibriumProblem,
    config: SolverConfig,
    x0,
    second_step,
    project_next,
    callback,
    start_in_feasible: bool = False,
) -> SolveReport:
    """Shared loop for the methods whose pass starts with ``y_n = prox(x_n, x_n)``.

    ``second_step(n, x, y, run)`` returns ``(w, extra)`` where ``w`` replaces
    ``z_n`` in the ball-comparison cut; ``project_next(x, C_n, Q_n, run)``
    returns ``x_{n+1}``. With ``start_in_feasible``, an anchor outside ``C``
    makes the first pass ``x_1 = P_C(x0)`` (the cuts ``C_0 = Q_0`` are the
    whole space).
    """
    f, C = problem.bifunction, problem.feasible
    x0 = as_point(x0, C.dim)
    run = _Run(algorithm, config, x0, _reference_point(problem, x0))
    x_prev = x_cur = x0
    for n in range(config.max_iter + 1):
        pre = run.stop_residual(n, x_cur, x_prev, None)
        if pre is not None and pre <= config.tol:
            return run.report(Status.CONVERGED, x_cur, n, pre)
        try:
            y = prox_subproblem(f, x_cur, x_cur, config.lam, C, config.qp_tol)
        except QPError as exc:
            return run.report(Status.SUBPROBLEM_FAILURE, x_cur, n, float("nan"), str(exc))
        run.count("prox_solves")
        residual_xy = float(np.linalg.norm(y - x_cur))
        if config.stop_rule is StopRule.RESIDUAL_XY and residual_xy <= config.tol:
            return run.report(Status.CONVERGED, x_cur, n, residual_xy)
        if residual_xy <= config.exact_stop_tol:
            return run.report(Status.EXACT_SOLUTION, x_cur, n, residual_xy)
        if n == config.max_iter:
            last = pre if pre is not None else residual_xy
            return run.report(Status.MAX_ITER, x_cur, n, last)

        if n == 0 and start_in_feasible and not C.contains(x_cur):
            try:
                x_next = project_polyhedron(x_cur, C, config.qp_tol)
            except QPError as exc:
                return run.report(Status.SUBPROBLEM_FAILURE, x_cur, n, residual_xy, str(exc))
            run.count("projections")
            run.row(n, residual_xy, x_cur, x_next)
            x_prev, x_cur = x_cur, x_next
            continue

        try:
            w, extra = second_step(n, x_cur, y, run)
        except _ExactSolution as sol:
            return run.report(Status.EXACT_SOLUTION, sol.point, n, residual_xy, sol.reason)
        except (QPError, _LinesearchStall) as exc:
            return run.report(Status.SUBPROBLEM_FAILURE, x_cur, n, residual_xy, str(exc))
        C_n = halfspace_from_ball_comparison(x_cur, w, 0.0)
        Q_n = _q_cut(x0, x_cur)
        try:
            x_next = project_next(x_cur, C_n, Q_n, run)
        except EmptySet as exc:
            return run.report(Status.EMPTY_CUT, x_cur, n, residual_xy, str(exc))
        except Infeasible as exc:
            return run.report(Status.EMPTY_CUT, x_cur, n, residual_xy, str(exc))
        except QPError as exc:
            return run.report(Status.SUBPROBLEM_FAILURE, x_cur, n, residual_xy, str(exc))
        run.row(n, residual_xy, x_cur, x_next)
        if callback is not None:
            callback(ExtragradientState(x_cur, y, w, x_next, n, (C_n, Q_n), extra))
        x_prev, x_cur = x_cur, x_next
    raise AssertionError("unreachable")


class _ExactSolution(Exception):
    def __init__(self, point, reason):
        super().__init__(reason)
        self.point = point
        self.reason = reason


class _LinesearchStall(Exception):
    pass


def solve_extragradient_hybrid(
    problem: EquilibriumProblem,
    config: SolverConfig,
    x0,
    callback: Optional[Callable[[ExtragradientState], None]] = None,
) -> SolveReport:
    """Extragradient hybrid method.

    ``y_n = prox(x_n; x_n)``, ``z_n = prox(y_n; x_n)``, and
    ``x_{n+1} = P_{C & C_n & Q_n}(x0)`` with ``C_n = {|z_n - z| <= |x_n - z|}``.
    """
    f, C = problem.bifunction, problem.feasible

    def second_step(n, x, y, run):
        run.count("prox_solves")
        return prox_subproblem(f, y, x, config.lam, C, config.qp_tol), None

    def project_next(x, C_n, Q_n, run):
        run.count("projections")
        return _project_onto(run.x0, _with_cuts(C, C_n, Q_n), config.qp_tol)

    return _extragradient_loop("eg-hybrid", problem, config, x0, second_step, project_next, callback)


def solve_extragradient_growing(
    problem: EquilibriumProblem,
    config: SolverConfig,
    x0,
    callback: Optional[Callable[[ExtragradientState], None]] = None,
) -> SolveReport:
    """Extragradient method with the accumulating set ``C_{n+1} = C_n & {|z_n - z| <= |x_n - z|}``.

    ``C_0 = C``; each pass appends one inequality row and ``x_{n+1}`` is the
    projection of ``x0`` onto the grown polyhedron. The ``Q_n`` argument of the
    shared loop is ignored.
    """
    f, C = problem.bifunction, problem.feasible
    grown = [C]

    def second_step(n, x, y, run):
        run.count("prox_solves")
        return prox_subproblem(f, y, x, config.lam, C, config.qp_tol), None

    def project_next(x, C_n, Q_n, run):
        grown[0] = _with_cuts(grown[0], C_n)
        run.counters["constraints"] = grown[0].n_ineq
        run.count("projections")
        return _project_onto(run.x0, grown[0], config.qp_tol)

    return _extragradient_loop("eg-growing", problem, config, x0, second_step, project_next, callback)


def solve_armijo_hybrid(
    problem: EquilibriumProblem,
    config: SolverConfig,
    x0,
    callback: Optional[Callable[[ExtragradientState], None]] = None,
) -> SolveReport:
    """Hybrid method with an Armijo linesearch in place of the second prox step.

    After ``y_n = prox(x_n; x_n)``, find the smallest ``m >= 0`` with

        z = (1 - eta^m) x_n + eta^m y_n,   f(z, y_n) + |x_n - y_n|^2 / (2 lam) <= 0,

    take ``g`` in the subdifferential of ``f(z, .)`` at ``z``,
    ``sigma = -eta^m f(z, y_n) / ((1 - eta^m) |g|^2)`` and
    ``u_n = P_C(x_n - sigma g)``; ``u_n`` then plays the role of ``z_n`` in the
    extragradient cuts. A vanishing ``g`` means ``z`` solves the problem.
    """
    f, C = problem.bifunction, problem.feasible
    eta, lam = config.eta, config.lam

    def second_step(n, x, y, run):
        gap = (y - x) @ (y - x) / (2.0 * lam)
        for m in range(MAX_LINESEARCH + 1):
            t = eta**m
            z = (1.0 - t) * x + t * y
            fz = f(z, y)
            if fz + gap <= 0.0:
                break
        else:
            raise _LinesearchStall(f"Armijo linesearch found no step within m <= {MAX_LINESEARCH}")
        run.count("linesearch_steps", m + 1)
        if m == 0:
            # Only possible when x_n = y_n.
            raise _ExactSolution(x, "linesearch accepted m=0")
        g = f.subgrad2(z)
        gn2 = g @ g
        if np.sqrt(gn2) <= ZERO_SUBGRADIENT:
            raise _ExactSolution(z, "zero subgradient")
        sigma = -t * fz / ((1.0 - t) * gn2)
        run.count("projections")
        u = project_polyhedron(x - sigma * g, C, config.qp_tol)
        return u, m

    def project_next(x, C_n, Q_n, run):
        run.count("projections")
        return _project_onto(run.x0, _with_cuts(C, C_n, Q_n), config.qp_tol)

    return _extragradient_loop(
        "armijo-hybrid", problem, config, x0, second_step, project_next, callback, start_in_feasible=True
    )


def solve_subgradient_extragradient(
    problem: EquilibriumProblem,
    config: SolverConfig,
    x0,
    callback: Optional[Callable[[ExtragradientState], None]] = None,
) -> SolveReport:
    """Hybrid subgradient extragradient method for differentiable bifunctions.

    With ``A(x) = grad_2 f(x, x)``::

        y_n = P_C(x_n - lam A(x_n))
        T_n = {z : <x_n - lam A(x_n) - y_n, z - y_n> <= 0}
        z_n = alpha_n x_n + (1 - alpha_n) P_{T_n}(x_n - lam A(y_n))

    and ``x_{n+1}`` is the projection of ``x0`` onto the half-spaces
    ``C_n = {|z_n - z| <= |x_n - z|}`` and ``Q_n``. ``alpha_n`` comes from
    ``config.alpha`` (a constant or a function of ``n``).
    """
    f, C = problem.bifunction, problem.feasible
    A = f.diag_gradient
    lam = config.lam
    x0 = as_point(x0, C.dim)
    run = _Run("sg-eg", config, x0, _reference_point(problem, x0))
    x_prev = x_cur = x0
    for n in range(config.max_iter + 1):
        pre = run.stop_residual(n, x_cur, x_prev, None)
        if pre is not None and pre <= config.tol:
            return run.report(Status.CONVERGED, x_cur, n, pre)
        w = x_cur - lam * A(x_cur)
        try:
            y = project_polyhedron(w, C, config.qp_tol)
        except QPError as exc:
            return run.report(Status.SUBPROBLEM_FAILURE, x_cur, n, float("nan"), str(exc))
        run.count("projections")
        residual_xy = float(np.linalg.norm(y - x_cur))
        if config.stop_rule is StopRule.RESIDUAL_XY and residual_xy <= config.tol:
            return run.report(Status.CONVERGED, x_cur, n, residual_xy)
        if residual_xy <= config.exact_stop_tol:
            return run.report(Status.EXACT_SOLUTION, x_cur, n, residual_xy)
        if n == config.max_iter:
            return run.report(Status.MAX_ITER, x_cur, n, pre if pre is not None else residual_xy)

        a = w - y
        T_n = HalfSpace(a, a @ y)
        alpha = config.alpha_at(n)
        z = alpha * x_cur + (1.0 - alpha) * project_halfspace(x_cur - lam * A(y), T_n)
        C_n = halfspace_from_ball_comparison(x_cur, z, 0.0)
        Q_n = _q_cut(x0, x_cur)
        try:
            x_next = project_two_halfspaces(x0, C_n, Q_n)
        except EmptySet as exc:
            return run.report(Status.EMPTY_CUT, x_cur, n, residual_xy, str(exc))
        run.row(n, residual_xy, x_cur, x_next)
        if callback is not None:
            callback(ExtragradientState(x_cur, y, z, x_next, n, (C_n, Q_n, T_n)))
        x_prev, x_cur = x_cur, x_next
    raise AssertionError("unreachable")


def _solve_vi_on_problem(problem: EquilibriumProblem, config: SolverConfig, x0, y0=None, callback=None):
    f = problem.bifunction
    L = getattr(f, "diag_lipschitz", None)
    if L is None:
        raise ConfigError("vi-ne needs a bifunction with a known Lipschitz constant of its diagonal gradient")
    return solve_vi_no_extrapolation(
        f.diag_gradient, problem.feasible, config, x0, y0, L, problem.reference_solution, callback
    )


ALGORITHMS: dict[str, Callable[..., SolveReport]] = {
    "hybrid-ne": solve_hybrid_no_extrapolation,
    "eg-hybrid": solve_extragradient_hybrid,
    "eg-growing": solve_extragradient_growing,
    "armijo-hybrid": solve_armijo_hybrid,
    "sg-eg": solve_subgradient_extragradient,
    "vi-ne": _solve_vi_on_problem,
}


def solve(algorithm: str, problem: EquilibriumProblem, config: SolverConfig, x0, y0=None) -> SolveReport:
    """Run the solver registered under ``algorithm`` (see :data:`ALGORITHMS`)."""
    try:
        fn = ALGORITHMS[algorithm]
    except KeyError:
        raise ConfigError(
            f"unknown algorithm {algorithm!r}; choose from {', '.join(ALGORITHMS)}", "algorithm"
        ) from None
    if algorithm in ("hybrid-ne", "vi-ne"):
        return fn(problem, config, x0, y0)
    return fn(problem, config, x0)
