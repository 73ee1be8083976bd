"""Equilibrium bifunctions and the built-in problem instances.

A bifunction ``f(x, y)`` with ``f(x, x) = 0`` defines the equilibrium problem
of finding ``x* in C`` with ``f(x*, y) >= 0`` for every ``y in C``. The solvers
need more than pointwise evaluation, so every bifunction here also provides

* ``prox_model(x)``: ``f(x, .)`` as an exact :class:`QuadraticObjective`,
* ``diag_gradient(x)``: the gradient of ``f(x, .)`` at ``x``,
* ``c1, c2``: constants of the Lipschitz-type inequality
  ``f(x,y) + f(y,z) >= f(x,z) - c1|x-y|^2 - c2|y-z|^2``.
"""
from __future__ import annotations

from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .geometry import Box, Polyhedron, as_point
from .qp import QuadraticObjective

__all__ = [
    "ModelAssumptionViolated",
    "Bifunction",
    "QuadraticBifunction",
    "VIBifunction",
    "AffineOperator",
    "SegmentSolutionSet",
    "EquilibriumProblem",
    "spectral_norm",
    "make_example1",
    "make_nash_cournot",
    "make_example2",
    "make_vi_bifunction",
    "nash_cournot_feasible_set",
    "EXAMPLE1_STARTS",
    "EXAMPLE2_STARTS",
    "EXAMPLE2_P",
    "EXAMPLE2_Q",
    "EXAMPLE2_q",
]

# Instance data of the two benchmark examples.
EXAMPLE1_STARTS = ((2.0, 5.0), (5.0, 5.0), (4.0, 4.5), (-0.75, 0.0))
EXAMPLE2_P = np.array(
    [
        [3.1, 2.0, 0.0, 0.0, 0.0],
        [2.0, 3.6, 0.0, 0.0, 0.0],
        [0.0, 0.0, 3.5, 2.0, 0.0],
        [0.0, 0.0, 2.0, 3.5, 0.0],
        [0.0, 0.0, 0.0, 0.0, 3.0],
    ]
)
EXAMPLE2_Q = np.array(
    [
        [1.6, 1.0, 0.0, 0.0, 0.0],
        [1.0, 1.6, 0.0, 0.0, 0.0],
        [0.0, 0.0, 1.5, 1.0, 0.0],
        [0.0, 0.0, 1.0, 1.5, 0.0],
        [0.0, 0.0, 0.0, 0.0, 2.0],
    ]
)
EXAMPLE2_q = np.array([1.0, -2.0, -1.0, 2.0, -1.0])
EXAMPLE2_STARTS = (
    (1.0, 3.0, 1.0, 1.0, 2.0),
    (-3.0, 4.0, 1.0, -5.0, 6.0),
    (3.0, -2.0, 1.0, 9.0, -8.0),
    (-2.0, 3.0, -1.0, 8.0, 8.0),
)

EIG_TOL = 1e-10


class ModelAssumptionViolated(ValueError):
    pass


def spectral_norm(M, rtol: float = 1e-15, max_iter: int = 100_000) -> float:
    """Largest singular value of ``M`` by power iteration on ``M'M``.

    The start vector is drawn from a fixed-seed generator so the result is
    deterministic.
    """
    M = np.atleast_2d(np.asarray(M, dtype=float))
    if not np.all(np.isfinite(M)):
        raise ValueError("matrix entries must be finite")
    MtM = M.T @ M
    v = np.random.default_rng(0).standard_normal(MtM.shape[0])
    v /= np.linalg.norm(v)
    est = 0.0
    for _ in range(max_iter):
        w = MtM @ v
        new = float(v @ w)  # Rayleigh quotient
        nw = np.linalg.norm(w)
        if nw == 0.0:
            return 0.0
        v = w / nw
        if abs(new - est) <= rtol * new:
            est = new
            break
        est = new
    return float(np.sqrt(max(est, 0.0)))


class Bifunction(ABC):
    """Equilibrium bifunction quadratic in its second argument."""

    c1: float
    c2: float

    @abstractmethod
    def __call__(self, x, y) -> float:
        ...

    def eval(self, x, y) -> float:
        return self(x, y)

    @abstractmethod
    def prox_model(self, x) -> QuadraticObjective:
        ...

    def diag_gradient(self, x) -> np.ndarray:
        """Gradient of ``f(x, .)`` evaluated at ``x``."""
        return self.prox_model(x).gradient(x)

    def subgrad2(self, x) -> np.ndarray:
        # f(x, .) is differentiable for every instance here.
        return self.diag_gradient(x)


class QuadraticBifunction(Bifunction):
    """``f(x, y) = <P x + Q y + q, y - x>``.

    Expanding in ``y`` gives ``y'Qy + (Px + q - Qx)'y - x'(Px + q)``, hence a
    prox model with hessian ``2Q``.
    """

    def __init__(self, P, Q, q, c1: float, c2: float):
        self.P = np.array(P, dtype=float)
        self.Q = np.array(Q, dtype=float)
        self.q = as_point(q)
        n = self.q.size
        if self.P.shape != (n, n) or self.Q.shape != (n, n):
            raise ValueError(f"P and Q must be {n}x{n}")
        self.c1, self.c2 = float(c1), float(c2)
        # Lipschitz constant of x -> grad_2 f(x, x) = (P + Q) x + q.
        self.diag_lipschitz = spectral_norm(self.P + self.Q)

    @property
    def dim(self) -> int:
        return self.q.size

    def __call__(self, x, y) -> float:
        x, y = as_point(x, self.dim), as_point(y, self.dim)
        return float((self.P @ x + self.Q @ y + self.q) @ (y - x))

    def prox_model(self, x) -> QuadraticObjective:
        x = as_point(x, self.dim)
        Px_q = self.P @ x + self.q
        return QuadraticObjective(2.0 * self.Q, Px_q - self.Q @ x, -(x @ Px_q))

    def diag_gradient(self, x) -> np.ndarray:
        x = as_point(x, self.dim)
        return (self.P + self.Q) @ x + self.q


@dataclass(frozen=True, eq=False)
class AffineOperator:
    """``A(x) = M x + shift`` with Lipschitz constant ``lipschitz``.

    When ``lipschitz`` is omitted it is set to the spectral norm of ``M``.
    """

    matrix: np.ndarray
    shift: np.ndarray
    lipschitz: Optional[float] = None

    def __post_init__(self):
        M = np.array(self.matrix, dtype=float)
        s = as_point(self.shift)
        if M.shape != (s.size, s.size):
            raise ValueError("matrix must be square and match the shift")
        norm = spectral_norm(M)
        L = norm if self.lipschitz is None else float(self.lipschitz)
        if L < norm - 1e-8:
            raise ModelAssumptionViolated(f"lipschitz={L} is below the spectral norm {norm}")
        object.__setattr__(self, "matrix", M)
        object.__setattr__(self, "shift", s)
        object.__setattr__(self, "lipschitz", L)

    def __call__(self, x) -> np.ndarray:
        return self.matrix @ as_point(x, self.shift.size) + self.shift


class VIBifunction(Bifunction):
    """``f(x, y) = <A(x), y - x>`` for an ``L``-Lipschitz operator ``A``.

    Lipschitz-type constants are ``c1 = c2 = L / 2``.
    """

    def __init__(self, op: Callable[[np.ndarray], np.ndarray], lipschitz: float):
        if not lipschitz > 0:
            raise ValueError("the operator's Lipschitz constant must be positive")
        self.op = op
        self.lipschitz = float(lipschitz)
        self.c1 = self.c2 = 0.5 * self.lipschitz
        self.diag_lipschitz = self.lipschitz

    def __call__(self, x, y) -> float:
        x, y = as_point(x), as_point(y)
        return float(self.op(x) @ (y - x))

    def prox_model(self, x) -> QuadraticObjective:
        x = as_point(x)
        Ax = np.asarray(self.op(x), dtype=float)
        return QuadraticObjective(np.zeros((x.size, x.size)), Ax, -(Ax @ x))

    def diag_gradient(self, x) -> np.ndarray:
        return np.asarray(self.op(as_point(x)), dtype=float)


def make_vi_bifunction(op, lipschitz: Optional[float] = None) -> VIBifunction:
    if lipschitz is None:
        lipschitz = getattr(op, "lipschitz", None)
        if lipschitz is None:
            raise ValueError("a Lipschitz constant is required for a plain callable operator")
    return VIBifunction(op, lipschitz)


@dataclass(frozen=True, eq=False)
class SegmentSolutionSet:
    """A solution set that is the segment ``[start, end]``."""

    start: np.ndarray
    end: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "start", as_point(self.start))
        object.__setattr__(self, "end", as_point(self.end, self.start.size))

    def project(self, x) -> np.ndarray:
        x = as_point(x, self.start.size)
        d = self.end - self.start
        t = np.clip((x - self.start) @ d / (d @ d), 0.0, 1.0)
        return self.start + t * d

    def sample(self, rng: np.random.Generator, n: int) -> np.ndarray:
        t = rng.uniform(0.0, 1.0, size=(n, 1))
        return self.start + t * (self.end - self.start)


@dataclass(frozen=True, eq=False)
class EquilibriumProblem:
    bifunction: Bifunction
    feasible: Polyhedron
    reference_solution: Optional[SegmentSolutionSet] = None
    name: str = "custom"
    meta: dict = field(default_factory=dict)

    @property
    def dim(self) -> int:
        return self.feasible.dim

    @property
    def c1(self) -> float:
        return self.bifunction.c1

    @property
    def c2(self) -> float:
        return self.bifunction.c2


def example1_operator() -> AffineOperator:
    """``A(x) = (x1 + x2 - 1) * (1, 1)``, the operator behind Example 1."""
    return AffineOperator(np.ones((2, 2)), -np.ones(2))


def make_example1() -> EquilibriumProblem:
    """``f(x,y) = (x1+x2-1)(y1-x1) + (x1+x2-1)(y2-x2)`` on ``[0,1]^2``.

    The solution set is the segment ``x1 + x2 = 1`` inside the box.
    """
    f = make_vi_bifunction(example1_operator())  # L = 2, so c1 = c2 = 1
    return EquilibriumProblem(
        bifunction=f,
        feasible=Polyhedron.from_box([0.0, 0.0], [1.0, 1.0]),
        reference_solution=SegmentSolutionSet([1.0, 0.0], [0.0, 1.0]),
        name="example1",
    )


def nash_cournot_feasible_set(dim: int = 5) -> Polyhedron:
    """``sum(x) >= -1`` and ``-5 <= x_i <= 5``."""
    return Polyhedron(-np.ones((1, dim)), [1.0], Box(-5.0 * np.ones(dim), 5.0 * np.ones(dim)))


def _sym_eigs(M: np.ndarray) -> np.ndarray:
    return np.linalg.eigvalsh(0.5 * (M + M.T))


def make_nash_cournot(
    P,
    Q,
    q,
    norm_kind: str = "spectral",
    feasible: Optional[Polyhedron] = None,
) -> EquilibriumProblem:
    """Nash-Cournot bifunction ``<Px + Qy + q, y - x>`` with ``c1 = c2 = ||P - Q|| / 2``.

    Parameters
    ----------
    P, Q : (n, n) array_like
        ``Q`` must be symmetric PSD and ``Q - P`` negative semidefinite.
    q : (n,) array_like
    norm_kind : {"spectral", "frobenius"}
        Matrix norm used for ``||P - Q||``.
    feasible : Polyhedron, optional
        Defaults to ``sum(x) >= -1, -5 <= x_i <= 5``.

    Raises
    ------
    ModelAssumptionViolated
        If ``Q`` is not symmetric PSD or ``Q - P`` is not NSD.
    """
    P = np.array(P, dtype=float)
    Q = np.array(Q, dtype=float)
    q = as_point(q)
    scale = 1.0 + np.max(np.abs(Q))
    if np.max(np.abs(Q - Q.T)) > 1e-12 * scale:
        raise ModelAssumptionViolated("Q must be symmetric")
    if _sym_eigs(Q)[0] < -EIG_TOL * scale:
        raise ModelAssumptionViolated("Q must be positive semidefinite")
    if _sym_eigs(Q - P)[-1] > EIG_TOL * (1.0 + np.max(np.abs(P))):
        raise ModelAssumptionViolated("Q - P must be negative semidefinite")
    if norm_kind == "spectral":
        norm = spectral_norm(P - Q)
    elif norm_kind == "frobenius":
        norm = float(np.linalg.norm(P - Q, "fro"))
    else:
        raise ValueError(f"unknown norm_kind {norm_kind!r}")
    c = 0.5 * norm
    if feasible is None:
        feasible = nash_cournot_feasible_set(q.size)
    return EquilibriumProblem(
        bifunction=QuadraticBifunction(P, Q, q, c, c),
        feasible=feasible,
        name="nash-cournot",
        meta={"norm_kind": norm_kind, "norm": norm},
    )


def make_example2(norm_kind: str = "spectral") -> EquilibriumProblem:
    return make_nash_cournot(EXAMPLE2_P, EXAMPLE2_Q, EXAMPLE2_q, norm_kind)
