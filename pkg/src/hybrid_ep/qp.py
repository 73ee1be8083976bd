"""Dense strongly convex QP over polyhedra.

Solves

    minimize   1/2 y'Hy + c'y + const
    subject to A y <= b   (bounds included as rows)

with a dual active-set method in the style of Goldfarb and Idnani: start from
the unconstrained minimizer and add violated constraints one at a time, dropping
active constraints whose multiplier would turn negative. No feasible starting
point is needed, which matters for the growing-cut algorithms where the previous
iterate is cut off by the newest constraint.

Every returned point carries a :class:`KktCertificate`; a solution is only
returned when all four residuals are within ``qp_tol``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Optional

import numpy as np
from scipy import linalg

from .geometry import Polyhedron, as_point, project_box

__all__ = [
    "QPError",
    "Infeasible",
    "NotStronglyConvex",
    "MaxInnerIterations",
    "KktFailure",
    "ModelUnavailable",
    "QuadraticObjective",
    "KktCertificate",
    "certify",
    "solve_qp",
    "project_polyhedron",
    "prox_subproblem",
]

QP_TOL = 1e-10
MIN_EIG = 1e-8
SYM_TOL = 1e-12
PSD_SHIFT = 1e-10


class QPError(RuntimeError):
    pass


class Infeasible(QPError):
    pass


class NotStronglyConvex(QPError):
    pass


class MaxInnerIterations(QPError):
    pass


class KktFailure(QPError):
    """The solver stopped but its point could not be certified."""


class ModelUnavailable(QPError):
    pass


# Solvers call the QP thousands of times with the same hessian; cache its
# spectrum and factorization keyed on the raw bytes.
@lru_cache(maxsize=64)
def _min_eig_cached(shape: tuple, data: bytes) -> float:
    H = np.frombuffer(data, dtype=float).reshape(shape)
    return float(np.linalg.eigvalsh(H)[0])


@lru_cache(maxsize=64)
def _cho_cached(shape: tuple, data: bytes):
    H = np.frombuffer(data, dtype=float).reshape(shape)
    return linalg.cho_factor(H, check_finite=False)


def _min_eig(H: np.ndarray) -> float:
    return _min_eig_cached(H.shape, np.ascontiguousarray(H).tobytes())


@dataclass(frozen=True, eq=False)
class QuadraticObjective:
    """``q(y) = 1/2 y'Hy + c'y + constant`` with ``H`` symmetric PSD."""

    hessian: np.ndarray
    linear: np.ndarray
    constant: float = 0.0

    def __post_init__(self):
        H = np.array(self.hessian, dtype=float)
        c = as_point(self.linear)
        if H.shape != (c.size, c.size):
            raise ValueError(f"hessian shape {H.shape} does not match linear term of size {c.size}")
        absmax = np.abs(H).max()
        if not np.isfinite(absmax):
            raise ValueError("hessian must be finite")
        scale = 1.0 + absmax
        if np.abs(H - H.T).max() > SYM_TOL * scale:
            raise ValueError("hessian must be symmetric")
        H = 0.5 * (H + H.T)
        if _min_eig(H) < -PSD_SHIFT * scale:
            raise ValueError("hessian must be positive semidefinite")
        object.__setattr__(self, "hessian", H)
        object.__setattr__(self, "linear", c)
        object.__setattr__(self, "constant", float(self.constant))

    @property
    def dim(self) -> int:
        return self.linear.size

    def __call__(self, y) -> float:
        y = as_point(y, self.dim)
        return float(0.5 * y @ self.hessian @ y + self.linear @ y + self.constant)

    def gradient(self, y) -> np.ndarray:
        return self.hessian @ as_point(y, self.dim) + self.linear


@dataclass(frozen=True)
class KktCertificate:
    """Scaled KKT residuals of a candidate solution.

    ``min_multiplier`` is the smallest Lagrange multiplier (scaled); it is
    acceptable when it is not below ``-qp_tol``. The other three fields are
    nonnegative and must not exceed ``qp_tol``.
    """

    stationarity_residual: float
    max_primal_violation: float
    min_multiplier: float
    complementarity_residual: float
    multipliers: np.ndarray = field(repr=False, compare=False, default=None)

    def accepted(self, qp_tol: float = QP_TOL) -> bool:
        return (
            self.stationarity_residual <= qp_tol
            and self.max_primal_violation <= qp_tol
            and self.min_multiplier >= -qp_tol
            and self.complementarity_residual <= qp_tol
        )


def certify(H, c, A, b, y, u) -> KktCertificate:
    """KKT residuals of ``(y, u)`` for ``min 1/2 y'Hy + c'y  s.t.  A y <= b``.

    Residuals are relative: stationarity against the size of the gradient
    terms, row quantities against ``1 + |b_i| + |a_i||y|``.
    """
    Hy = H @ y
    m = A.shape[0]
    Atu = A.T @ u if m else np.zeros_like(y)
    grad_scale = 1.0 + np.abs(np.concatenate([Hy, c, Atu])).max()
    stat = float(np.abs(Hy + c + Atu).max()) / grad_scale
    if m == 0:
        return KktCertificate(stat, 0.0, 0.0, 0.0, u)
    row_norm = np.sqrt(np.einsum("ij,ij->i", A, A))
    row_scale = 1.0 + np.abs(b) + row_norm * np.sqrt(y @ y)
    slack = (A @ y - b) / row_scale
    u_scale = u / (1.0 + np.abs(u).max())
    return KktCertificate(
        stationarity_residual=stat,
        max_primal_violation=max(float(slack.max()), 0.0),
        min_multiplier=min(float(u_scale.min()), 0.0),
        complementarity_residual=float(np.abs(u_scale * slack).max()),
        multipliers=u,
    )


def _check_strongly_convex(H: np.ndarray) -> None:
    lam_min = _min_eig(H)
    if lam_min < MIN_EIG:
        raise NotStronglyConvex(f"smallest hessian eigenvalue {lam_min:.3e} is below {MIN_EIG:g}")


def _box_fast_path(obj: QuadraticObjective, feasible: Polyhedron):
    # H = h*I over a box separates into coordinatewise clamps.
    H = obj.hessian
    h = H[0, 0]
    if not np.allclose(H, h * np.eye(obj.dim), rtol=0.0, atol=0.0):
        return None
    y = -obj.linear / h
    box = feasible.bounds
    if box is None:
        return y, np.zeros(0)
    y = project_box(y, box)
    # Bound multipliers from stationarity h*y + c + u_up - u_lo = 0; row
    # order matches Polyhedron.stacked().
    g = h * y + obj.linear
    up, lo = np.isfinite(box.upper), np.isfinite(box.lower)
    u_up = np.where(y == box.upper, np.maximum(-g, 0.0), 0.0)[up]
    u_lo = np.where(y == box.lower, np.maximum(g, 0.0), 0.0)[lo]
    return y, np.concatenate([u_up, u_lo])


def solve_qp(
    obj: QuadraticObjective,
    feasible: Polyhedron,
    qp_tol: float = QP_TOL,
    max_inner: Optional[int] = None,
) -> tuple[np.ndarray, KktCertificate]:
    """Minimize ``obj`` over ``feasible``.

    Returns the unique minimizer and its KKT certificate.

    Raises
    ------
    NotStronglyConvex
        If the smallest eigenvalue of the hessian is below 1e-8.
    Infeasible
        If the dual step is unbounded, certifying an empty feasible set.
    MaxInnerIterations
        After ``50 * (d + m)`` active-set steps (or ``max_inner``).
    KktFailure
        If the final point fails certification at ``qp_tol``.
    """
    if obj.dim != feasible.dim:
        raise ValueError(f"objective has dimension {obj.dim}, feasible set {feasible.dim}")
    H, c = obj.hessian, obj.linear
    _check_strongly_convex(H)
    A, b = feasible.stacked()

    if feasible.is_box:
        fast = _box_fast_path(obj, feasible)
        if fast is not None:
            y, u = fast
            cert = certify(H, c, A, b, y, u)
            if cert.accepted(qp_tol):
                return y, cert

    y, u = _dual_active_set(H, c, A, b, qp_tol, max_inner)
    cert = certify(H, c, A, b, y, u)
    if not cert.accepted(qp_tol):
        raise KktFailure(f"solution failed KKT certification: {cert}")
    return y, cert


def _dual_active_set(H, c, A, b, qp_tol, max_inner):
    d, m = H.shape[0], A.shape[0]
    chol = _cho_cached(H.shape, np.ascontiguousarray(H).tobytes())

    def hsolve(v):
        return linalg.cho_solve(chol, v, check_finite=False)

    y = hsolve(-c)
    if m == 0:
        return y, np.zeros(0)

    row_norm = np.linalg.norm(A, axis=1)
    active: list[int] = []
    u_act = np.zeros(0)
    budget = max_inner if max_inner is not None else 50 * (d + m)
    steps = 0

    while True:
        viol = (A @ y - b) / (1.0 + np.abs(b) + row_norm * np.linalg.norm(y))
        viol[active] = -np.inf
        p = int(np.argmax(viol))  # first maximal index on ties
        if viol[p] <= 0.1 * qp_tol:
            break
        a_p = A[p]
        u_p = 0.0
        while True:
            steps += 1
            if steps > budget:
                raise MaxInnerIterations(f"active-set method exceeded {budget} steps")
            hinv_ap = hsolve(a_p)
            if active:
                N = A[active].T
                hinv_N = hsolve(N)
                M = N.T @ hinv_N
                r = np.linalg.solve(M, N.T @ hinv_ap)
                z = hinv_ap - hinv_N @ r
            else:
                r = np.zeros(0)
                z = hinv_ap
            curvature = a_p @ z
            s_p = a_p @ y - b[p]

            # Dual step limit from active multipliers that would go negative.
            t1, block = np.inf, -1
            for j, rj in enumerate(r):
                if rj > 1e-14 * (1.0 + np.abs(r).max()):
                    t = u_act[j] / rj
                    if t < t1 or (t == t1 and active[j] < active[block]):
                        t1, block = t, j
            if curvature > 1e-12 * (a_p @ hinv_ap):
                t2 = max(s_p, 0.0) / curvature
            else:
                t2 = np.inf

            if t2 == np.inf and t1 == np.inf:
                raise Infeasible(f"constraint {p} cannot be satisfied together with the active set")
            t = min(t1, t2)
            if t2 < np.inf:
                y = y - t * z
            u_act = u_act - t * r
            u_p += t
            if t2 <= t1:
                active.append(p)
                u_act = np.append(u_act, u_p)
                break
            del active[block]
            u_act = np.delete(u_act, block)

    y, u_act = _polish(H, c, A, b, y, active, u_act)
    u = np.zeros(m)
    u[active] = np.maximum(u_act, 0.0)
    return y, u


def _polish(H, c, A, b, y, active, u_act):
    """Re-solve the equality KKT system on the final active set."""
    if not active:
        return y, u_act
    d, q = H.shape[0], len(active)
    N = A[active]
    K = np.zeros((d + q, d + q))
    K[:d, :d] = H
    K[:d, d:] = N.T
    K[d:, :d] = N
    try:
        sol = np.linalg.solve(K, np.concatenate([-c, b[active]]))
    except np.linalg.LinAlgError:
        return y, u_act
    y_new, u_new = sol[:d], sol[d:]
    if not np.all(np.isfinite(sol)) or np.linalg.norm(y_new - y) > 1e-6 * (1.0 + np.linalg.norm(y)):
        return y, u_act
    return y_new, u_new


def project_polyhedron(x, feasible: Polyhedron, qp_tol: float = QP_TOL) -> np.ndarray:
    """Euclidean projection of ``x`` onto ``feasible``."""
    x = as_point(x, feasible.dim)
    if feasible.is_box:
        return x if feasible.bounds is None else project_box(x, feasible.bounds)
    obj = QuadraticObjective(np.eye(x.size), -x)
    return solve_qp(obj, feasible, qp_tol)[0]


def prox_subproblem(f, base, anchor, lam: float, feasible: Polyhedron, qp_tol: float = QP_TOL) -> np.ndarray:
    """``argmin_{y in C} lam * f(base, y) + 1/2 ||anchor - y||^2``.

    ``f`` must expose ``prox_model(base)`` returning the exact quadratic
    ``f(base, .)`` as a :class:`QuadraticObjective`.
    """
    if not lam > 0:
        raise ValueError("lam must be positive")
    model_fn = getattr(f, "prox_model", None)
    if model_fn is None:
        raise ModelUnavailable(f"{type(f).__name__} has no quadratic prox model")
    model = model_fn(as_point(base, feasible.dim))
    anchor = as_point(anchor, feasible.dim)
    obj = QuadraticObjective(lam * model.hessian + np.eye(anchor.size), lam * model.linear - anchor)
    return solve_qp(obj, feasible, qp_tol)[0]
