"""All pairs non-decreasing paths on weighted graphs."""

from apnp.directed import SolverConfig, reconstruct_path, run_directed, solve_directed
from apnp.graph import APNPMatrix, BitString, Graph, RankedGraph, parse_graph, rank_weights
from apnp.oracle import brute_force_apnp, naive_apnp, sweep_apnp, undirected_basic
from apnp.solvers import solve_graph
from apnp.undirected import solve_undirected

__all__ = [
    "APNPMatrix",
    "BitString",
    "Graph",
    "RankedGraph",
    "SolverConfig",
    "brute_force_apnp",
    "naive_apnp",
    "parse_graph",
    "rank_weights",
    "reconstruct_path",
    "run_directed",
    "solve_directed",
    "solve_graph",
    "solve_undirected",
    "sweep_apnp",
    "undirected_basic",
]

__version__ = "0.1.0"
