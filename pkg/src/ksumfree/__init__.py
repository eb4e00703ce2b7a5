"""Exact computation of k-sum b-free subsets of integer lattice boxes."""

from .errors import CapacityError, KSumFreeError, UsageError
from .lattice import (
    Box,
    Instance,
    PointSet,
    Witness,
    find_witness,
    is_free,
    min_max_coord,
)
from .solver import (
    ForbiddenHypergraph,
    SolveResult,
    count_free,
    count_maximal_free,
    enumerate_forbidden,
    mu_via_reduction,
    solve_bb,
    solve_exhaustive,
    solve_k2_pairing,
)

__all__ = [
    "Box",
    "CapacityError",
    "ForbiddenHypergraph",
    "Instance",
    "KSumFreeError",
    "PointSet",
    "SolveResult",
    "UsageError",
    "Witness",
    "count_free",
    "count_maximal_free",
    "enumerate_forbidden",
    "find_witness",
    "is_free",
    "min_max_coord",
    "mu_via_reduction",
    "solve_bb",
    "solve_exhaustive",
    "solve_k2_pairing",
]
