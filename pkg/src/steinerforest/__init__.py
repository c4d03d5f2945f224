"""Exact Steiner Forest solvers for structured graph classes."""

from .core import (
    INFEASIBLE,
    DisjointSet,
    ForestCertificate,
    Graph,
    GuardExceeded,
    Instance,
    PreconditionError,
    SchoolPartition,
    SolveResult,
    SteinerError,
    schools_of,
    validate_solution,
)
from .dispatch import Limits, Unsupported, classify, solve

__all__ = [
    "INFEASIBLE",
    "DisjointSet",
    "ForestCertificate",
    "Graph",
    "GuardExceeded",
    "Limits",
    "Instance",
    "PreconditionError",
    "SchoolPartition",
    "SolveResult",
    "SteinerError",
    "Unsupported",
    "classify",
    "schools_of",
    "solve",
    "validate_solution",
]
