"""Solvers for minimum lp-norm multiway cut."""

from .approx import (CutCollection, PipelineReport, aggregate, approx_solve, mwu_cover,
                     trivial_solve, uncross)
from .core import Graph, GadgetMeta, Instance, MultiwayCut, cut_weight, lp_objective, part_connectivity
from .exact import ExactReport, solve_exact
from .flow import StCut, min_st_cut
from .relax import FractionalAssignment, cp_objective, star_gap
from .utc import UtcQuery, UtcResult, solve_utc, utc_exact, utc_heuristic

__all__ = [
    "CutCollection", "ExactReport", "FractionalAssignment", "GadgetMeta", "Graph", "Instance",
    "MultiwayCut", "PipelineReport", "StCut", "UtcQuery", "UtcResult", "aggregate",
    "approx_solve", "cp_objective", "cut_weight", "lp_objective", "min_st_cut", "mwu_cover",
    "part_connectivity", "solve_exact", "solve_utc", "star_gap", "trivial_solve", "uncross",
    "utc_exact", "utc_heuristic",
]
