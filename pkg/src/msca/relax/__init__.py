"""Fractional solvers: compact LPs, a dense simplex method and first-order methods."""

from .lp import LinearProgram, LPBuilder, LPSolution, parse_dump, simplex_solve
from .solvers import (
    HypergraphLP,
    SolverReport,
    build_hmc_lp,
    build_hmp_lp,
    instance_lp,
    project_simplex,
    solve,
    solve_cutting_plane,
    solve_lp,
    solve_subgradient,
)

__all__ = [
    "HypergraphLP", "LPBuilder", "LPSolution", "LinearProgram", "SolverReport", "build_hmc_lp",
    "build_hmp_lp", "instance_lp", "parse_dump", "project_simplex", "simplex_solve", "solve",
    "solve_cutting_plane", "solve_lp", "solve_subgradient",
]
