from .core import (
    CardinalityError,
    SatInstance,
    add_clause,
    at_least_k,
    at_most_k,
    export_dimacs,
    parse_dimacs,
)
from .solver import SatModel, SolverTimeout, solve, solve_instance, backend_from_env
from .external import ExternalSolver, ExternalSolverError

__all__ = [
    "SatInstance", "CardinalityError", "add_clause", "at_most_k", "at_least_k",
    "export_dimacs", "parse_dimacs",
    "SatModel", "SolverTimeout", "solve", "solve_instance", "backend_from_env",
    "ExternalSolver", "ExternalSolverError",
]
