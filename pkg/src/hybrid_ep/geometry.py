"""Points, half-spaces, boxes and polyhedra, with closed-form projections.

A point is a 1-D float ``numpy.ndarray``; :func:`as_point` is the single place
where raw input is converted and checked. All set types are frozen value
objects and every projection is a pure function.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Optional, Sequence

import numpy as np

__all__ = [
    "GeometryError",
    "DimensionMismatch",
    "EmptySet",
    "EmptyIntersection",
    "as_point",
    "feasibility_tol",
    "HalfSpace",
    "Box",
    "Polyhedron",
    "project_halfspace",
    "project_two_halfspaces",
    "halfspace_from_ball_comparison",
    "project_box",
]

FEAS_TOL = 1e-9
# |det Gram| below this fraction of ||a1||^2 ||a2||^2 means parallel normals.
PARALLEL_TOL = 1e-14


class GeometryError(ValueError):
    pass


class DimensionMismatch(GeometryError):
    pass


class EmptySet(GeometryError):
    pass


class EmptyIntersection(EmptySet):
    pass


def as_point(x, dim: Optional[int] = None) -> np.ndarray:
    """Convert ``x`` to a finite 1-D float array, optionally checking its length."""
    p = np.array(x, dtype=float)
    if p.ndim == 0:
        p = p.reshape(1)
    if p.ndim != 1 or p.size == 0:
        raise DimensionMismatch(f"a point must be a non-empty 1-D vector, got shape {p.shape}")
    # A finite dot product implies finite entries; the full scan runs only otherwise.
    if not np.isfinite(p @ p) and not np.all(np.isfinite(p)):
        raise ValueError("point coordinates must be finite")
    if dim is not None and p.size != dim:
        raise DimensionMismatch(f"expected dimension {dim}, got {p.size}")
    return p


def feasibility_tol(x: np.ndarray) -> float:
    return FEAS_TOL * (1.0 + float(np.linalg.norm(x)))


@dataclass(frozen=True, eq=False)
class HalfSpace:
    """The set ``{z : <normal, z> <= offset}``.

    A zero normal is allowed: the set is then the whole space when
    ``offset >= 0`` and empty otherwise.
    """

    normal: np.ndarray
    offset: float

    def __post_init__(self):
        object.__setattr__(self, "normal", as_point(self.normal))
        offset = float(self.offset)
        if not np.isfinite(offset):
            raise ValueError("half-space offset must be finite")
        object.__setattr__(self, "offset", offset)

    @property
    def dim(self) -> int:
        return self.normal.size

    @property
    def degenerate(self) -> bool:
        return not np.any(self.normal)

    @property
    def is_whole_space(self) -> bool:
        return self.degenerate and self.offset >= 0.0

    @property
    def is_empty(self) -> bool:
        return self.degenerate and self.offset < 0.0

    def value(self, x) -> float:
        """Signed constraint value ``<normal, x> - offset`` (positive means outside)."""
        return float(self.normal @ as_point(x, self.dim)) - self.offset

    def contains(self, x, tol: Optional[float] = None) -> bool:
        x = as_point(x, self.dim)
        if tol is None:
            tol = feasibility_tol(x)
        return self.value(x) <= tol * (1.0 + abs(self.offset))


@dataclass(frozen=True, eq=False)
class Box:
    lower: np.ndarray
    upper: np.ndarray

    def __post_init__(self):
        # Infinite bounds are allowed here, unlike in points.
        lower = np.array(self.lower, dtype=float).reshape(-1)
        upper = np.array(self.upper, dtype=float).reshape(-1)
        if lower.size == 0 or lower.shape != upper.shape:
            raise DimensionMismatch("box bounds must be non-empty vectors of equal length")
        if np.any(np.isnan(lower)) or np.any(np.isnan(upper)):
            raise ValueError("box bounds must not be NaN")
        if np.any(lower > upper):
            raise ValueError("box requires lower <= upper in every coordinate")
        object.__setattr__(self, "lower", lower)
        object.__setattr__(self, "upper", upper)

    @property
    def dim(self) -> int:
        return self.lower.size

    def contains(self, x, tol: Optional[float] = None) -> bool:
        x = as_point(x, self.dim)
        if tol is None:
            tol = feasibility_tol(x)
        return bool(np.all(x >= self.lower - tol) and np.all(x <= self.upper + tol))


@dataclass(frozen=True, eq=False)
class Polyhedron:
    """``{x : A x <= b}`` intersected with optional coordinate bounds.

    ``ineq_normals`` holds the rows of ``A``; it may have zero rows when the
    set is a pure box.
    """

    ineq_normals: np.ndarray
    ineq_offsets: np.ndarray
    bounds: Optional[Box] = None

    def __post_init__(self):
        A = np.array(self.ineq_normals, dtype=float)
        b = np.array(self.ineq_offsets, dtype=float).reshape(-1)
        if A.size == 0:
            if self.bounds is None and A.ndim < 2:
                raise DimensionMismatch("cannot infer the dimension of an empty polyhedron description")
            A = A.reshape(0, A.shape[1] if A.ndim == 2 else self.bounds.dim)
        if A.ndim != 2 or A.shape[0] != b.size:
            raise DimensionMismatch(
                f"{A.shape[0] if A.ndim == 2 else '?'} inequality rows but {b.size} offsets"
            )
        if not (np.all(np.isfinite(A)) and np.all(np.isfinite(b))):
            raise ValueError("polyhedron data must be finite")
        if self.bounds is not None and self.bounds.dim != A.shape[1]:
            raise DimensionMismatch("bounds dimension does not match inequality rows")
        A.setflags(write=False)
        b.setflags(write=False)
        object.__setattr__(self, "ineq_normals", A)
        object.__setattr__(self, "ineq_offsets", b)

    @classmethod
    def from_box(cls, lower: Sequence[float], upper: Sequence[float]) -> "Polyhedron":
        box = Box(lower, upper)
        return cls(np.zeros((0, box.dim)), np.zeros(0), box)

    @classmethod
    def whole_space(cls, dim: int) -> "Polyhedron":
        return cls(np.zeros((0, dim)), np.zeros(0))

    @property
    def dim(self) -> int:
        return self.ineq_normals.shape[1]

    @property
    def n_ineq(self) -> int:
        return self.ineq_normals.shape[0]

    @property
    def is_box(self) -> bool:
        return self.n_ineq == 0

    def with_constraint(self, normal, offset: float) -> "Polyhedron":
        """Return a copy with one more inequality row appended."""
        return self.with_constraints([normal], [offset])

    def with_constraints(self, normals, offsets) -> "Polyhedron":
        """Return a copy with the rows ``normals`` and ``offsets`` appended."""
        normals = np.array(normals, dtype=float).reshape(-1, self.dim)
        return Polyhedron(
            np.vstack([self.ineq_normals, normals]),
            np.concatenate([self.ineq_offsets, np.asarray(offsets, dtype=float).reshape(-1)]),
            self.bounds,
        )

    @cached_property
    def _stacked(self) -> tuple[np.ndarray, np.ndarray]:
        A, b = [self.ineq_normals], [self.ineq_offsets]
        if self.bounds is not None:
            eye = np.eye(self.dim)
            up = np.isfinite(self.bounds.upper)
            lo = np.isfinite(self.bounds.lower)
            A += [eye[up], -eye[lo]]
            b += [self.bounds.upper[up], -self.bounds.lower[lo]]
        A, b = np.vstack(A), np.concatenate(b)
        A.setflags(write=False)
        b.setflags(write=False)
        return A, b

    def stacked(self) -> tuple[np.ndarray, np.ndarray]:
        """All constraints, bounds included, as a single ``(A, b)`` pair.

        Bound rows come after the general rows: upper bounds first, then
        lower bounds. Infinite bounds are dropped. The arrays are read-only.
        """
        return self._stacked

    def contains(self, x, tol: Optional[float] = None) -> bool:
        x = as_point(x, self.dim)
        if tol is None:
            tol = feasibility_tol(x)
        if self.n_ineq and np.any(self.ineq_normals @ x - self.ineq_offsets > tol * (1.0 + np.abs(self.ineq_offsets))):
            return False
        return self.bounds is None or self.bounds.contains(x, tol)


def project_halfspace(x, h: HalfSpace) -> np.ndarray:
    x = as_point(x, h.dim)
    if h.degenerate:
        if h.is_empty:
            raise EmptySet("projection onto an empty degenerate half-space")
        return x
    excess = h.normal @ x - h.offset
    if excess <= 0.0:
        return x
    return x - (excess / (h.normal @ h.normal)) * h.normal


def project_two_halfspaces(x, h1: HalfSpace, h2: HalfSpace) -> np.ndarray:
    """Exact projection of ``x`` onto the intersection of two half-spaces.

    Cases, in order: ``x`` already feasible; projection onto one boundary
    lands inside the other; otherwise both constraints are active and the
    multipliers solve the 2x2 Gram system

        [a1.a1  a1.a2] [mu1]   [a1.x - b1]
        [a1.a2  a2.a2] [mu2] = [a2.x - b2]

    Linearly dependent normals reduce to the tighter single half-space.

    Raises
    ------
    EmptyIntersection
        If the intersection is empty.
    """
    x = as_point(x)
    if h1.dim != x.size or h2.dim != x.size:
        raise DimensionMismatch("half-spaces and point must share a dimension")
    if h1.is_empty or h2.is_empty:
        raise EmptyIntersection("one of the half-spaces is empty")
    if h1.degenerate:
        return project_halfspace(x, h2)
    if h2.degenerate:
        return project_halfspace(x, h1)

    a1, a2 = h1.normal, h2.normal
    r1, r2 = a1 @ x - h1.offset, a2 @ x - h2.offset
    if r1 <= 0.0 and r2 <= 0.0:
        return x

    n11, n22, n12 = a1 @ a1, a2 @ a2, a1 @ a2
    det = n11 * n22 - n12 * n12
    if det <= PARALLEL_TOL * n11 * n22:
        return _project_parallel(x, h1, h2)

    # One constraint active: the other must hold at the candidate.
    if r1 > 0.0:
        p = x - (r1 / n11) * a1
        if a2 @ p - h2.offset <= 0.0:
            return p
    if r2 > 0.0:
        p = x - (r2 / n22) * a2
        if a1 @ p - h1.offset <= 0.0:
            return p

    mu1 = (n22 * r1 - n12 * r2) / det
    mu2 = (n11 * r2 - n12 * r1) / det
    # Both multipliers are nonnegative whenever the two single-constraint
    # cases fail; clip round-off.
    return x - max(mu1, 0.0) * a1 - max(mu2, 0.0) * a2


def _project_parallel(x, h1: HalfSpace, h2: HalfSpace) -> np.ndarray:
    # Normals are (anti)parallel: write a2 = s * a1.
    a1, a2 = h1.normal, h2.normal
    s = (a1 @ a2) / (a1 @ a1)
    if s > 0.0:
        # Same direction: keep the tighter bound on <a1, z>.
        tighter = h1 if h1.offset <= h2.offset / s else h2
        return project_halfspace(x, tighter)
    # Opposite directions: the slab  -b2/|s| <= <a1, z> <= b1.
    lower = -h2.offset / abs(s)
    if lower > h1.offset + 1e-12 * (1.0 + abs(h1.offset)):
        raise EmptyIntersection("anti-parallel half-spaces with incompatible offsets")
    p = project_halfspace(x, h1)
    return project_halfspace(p, h2)


def halfspace_from_ball_comparison(far, near, slack: float = 0.0) -> HalfSpace:
    """The set ``{z : ||near - z||^2 <= ||far - z||^2 + slack}`` as a half-space.

    Expanding both squares leaves ``2 <far - near, z> <= ||far||^2 - ||near||^2 + slack``.
    """
    far = as_point(far)
    near = as_point(near, far.size)
    slack = float(slack)
    if not np.isfinite(slack):
        raise ValueError("slack must be finite")
    return HalfSpace(2.0 * (far - near), far @ far - near @ near + slack)


def project_box(x, box: Box) -> np.ndarray:
    return np.clip(as_point(x, box.dim), box.lower, box.upper)
