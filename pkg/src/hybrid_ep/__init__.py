"""Hybrid (outer-approximation) algorithms for equilibrium problems.

Modules
-------
geometry  half-spaces, boxes, polyhedra and closed-form projections
qp        dense strongly convex QP with KKT certification
problems  bifunctions and the built-in benchmark instances
solvers   the hybrid, extragradient, Armijo and subgradient-extragradient methods
bench     experiment runner, table reproduction and oracle suite
cli       the ``hybrid-ep`` command
"""
from .geometry import Box, HalfSpace, Polyhedron, project_halfspace, project_two_halfspaces
from .problems import (
    AffineOperator,
    EquilibriumProblem,
    make_example1,
    make_example2,
    make_nash_cournot,
    make_vi_bifunction,
)
from .qp import QuadraticObjective, project_polyhedron, prox_subproblem, solve_qp
from .solvers import (
    ALGORITHMS,
    ConfigError,
    SolveReport,
    SolverConfig,
    Status,
    StopRule,
    solve,
    solve_armijo_hybrid,
    solve_extragradient_growing,
    solve_extragradient_hybrid,
    solve_hybrid_no_extrapolation,
    solve_subgradient_extragradient,
    solve_vi_no_extrapolation,
)

__version__ = "0.1.0"
