"""Brute-force reference solvers used to check the fast paths.

Nothing here shares code with :mod:`hybrid_ep.qp` beyond numpy; the
enumeration oracle is exponential in the number of constraints and is only
meant for small instances (``m <= 12``).
"""
from __future__ import annotations

from itertools import combinations

import numpy as np


def enumerate_qp(H, c, A, b, tol: float = 1e-9) -> np.ndarray:
    """Solve ``min 1/2 y'Hy + c'y  s.t.  A y <= b`` by active-set enumeration.

    Every subset ``S`` of at most ``d`` rows is treated as the active set: the
    equality-constrained KKT system is solved, and the candidate is kept when
    it is primal feasible with nonnegative multipliers. Among survivors the one
    with the lowest objective wins (for strictly convex ``H`` they coincide).
    """
    H = np.asarray(H, dtype=float)
    c = np.asarray(c, dtype=float)
    A = np.asarray(A, dtype=float).reshape(-1, c.size)
    b = np.asarray(b, dtype=float).reshape(-1)
    d, m = c.size, b.size

    best, best_val = None, np.inf
    for size in range(min(d, m) + 1):
        for S in combinations(range(m), size):
            S = list(S)
            N = A[S]
            K = np.block([[H, N.T], [N, np.zeros((size, size))]])
            rhs = np.concatenate([-c, b[S]])
            try:
                sol = np.linalg.solve(K, rhs)
            except np.linalg.LinAlgError:
                continue
            if np.linalg.cond(K) > 1e12:
                continue
            y, u = sol[:d], sol[d:]
            if np.any(u < -tol) or np.any(A @ y - b > tol * (1.0 + np.abs(b))):
                continue
            val = 0.5 * y @ H @ y + c @ y
            if val < best_val:
                best, best_val = y, val
    if best is None:
        raise ValueError("no feasible KKT point found; the polyhedron may be empty")
    return best


def project_enumerate(x, A, b) -> np.ndarray:
    """Euclidean projection onto ``{z : A z <= b}`` by enumeration."""
    x = np.asarray(x, dtype=float)
    return enumerate_qp(np.eye(x.size), -x, A, b)

