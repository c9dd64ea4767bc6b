"""SAT and weighted MaxSAT solving, optimum and MCS enumeration."""

from .dimacs import read_cnf, read_wcnf, write_cnf, write_wcnf
from .kernels import JIT_ENABLED
from .maxsat import (McsList, OptimumSolution, enumerate_mcses,
                     enumerate_optimal_solutions, maxsat_optimum)
from .solver import SatResult, SatSolver, sat_solve

__all__ = [
    "JIT_ENABLED",
    "McsList",
    "OptimumSolution",
    "SatResult",
    "SatSolver",
    "enumerate_mcses",
    "enumerate_optimal_solutions",
    "maxsat_optimum",
    "read_cnf",
    "read_wcnf",
    "sat_solve",
    "write_cnf",
    "write_wcnf",
]
