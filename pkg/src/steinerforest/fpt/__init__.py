"""Solvers parameterised by a vertex cover or a small 2-deletion set."""

from .matching import min_weight_perfect_matching
from .patterns import PatternForest, enumerate_pattern_forests, hierarchies
from .two_deletion import extension_edges, solve_2ds2, solve_2ds2_extension
from .vertex_cover import (
    ArchipelagoBranch,
    CoverContext,
    lift_terminals_off_cover,
    solve_vertex_cover_fpt,
)

__all__ = [
    "ArchipelagoBranch",
    "CoverContext",
    "PatternForest",
    "enumerate_pattern_forests",
    "extension_edges",
    "hierarchies",
    "lift_terminals_off_cover",
    "min_weight_perfect_matching",
    "solve_2ds2",
    "solve_2ds2_extension",
    "solve_vertex_cover_fpt",
]
