"""
Assignment Module for labelswitch
=================================

Exact solver for the K x K linear assignment problem, the optimization
kernel shared by the relabelling algorithms.
"""

from .solver import (
    AssignmentResult,
    solve_min_assignment,
    solve_max_assignment,
    brute_force_assignment,
    solve_assignment_batch,
)

__all__ = [
    "AssignmentResult",
    "solve_min_assignment",
    "solve_max_assignment",
    "brute_force_assignment",
    "solve_assignment_batch",
]
