"""Name-based dispatch over all solvers, with automatic tie reduction."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from apnp.directed import SolverConfig, Stats, run_directed
from apnp.graph import APNPMatrix, Graph, GraphFormatError, rank_weights
from apnp.oracle import brute_force_apnp, naive_apnp, sweep_apnp, undirected_basic
from apnp.ties import lift_answers, reduce_graph
from apnp.undirected import UndirectedStats, solve_undirected

DIRECTED_ALGOS = ("fast", "naive", "sweep")
UNDIRECTED_ALGOS = ("undirected-fast", "undirected-basic")
ALGOS = DIRECTED_ALGOS + UNDIRECTED_ALGOS + ("brute",)


@dataclass
class Outcome:
    result: APNPMatrix
    stats: Optional[Stats | UndirectedStats] = None
    reduced: bool = False


def _solve_distinct(g: Graph, algo: str, cfg: SolverConfig, seed: int) -> Outcome:
    if algo == "fast":
        run = run_directed(rank_weights(g), cfg)
        return Outcome(run.result, run.stats)
    if algo == "naive":
        return Outcome(naive_apnp(rank_weights(g)))
    if algo == "sweep":
        return Outcome(sweep_apnp(rank_weights(g)))
    if algo == "undirected-fast":
        st = UndirectedStats()
        return Outcome(solve_undirected(g, seed=seed, debug=cfg.debug, stats=st), st)
    if algo == "undirected-basic":
        return Outcome(undirected_basic(g))
    raise ValueError(f"unknown algorithm {algo!r}")


def solve_graph(g: Graph, algo: str, cfg: SolverConfig = SolverConfig(), seed: int = 0) -> Outcome:
    if algo not in ALGOS:
        raise ValueError(f"unknown algorithm {algo!r}; choose from {', '.join(ALGOS)}")
    if algo == "brute":
        return Outcome(brute_force_apnp(g))
    if g.directed and algo in UNDIRECTED_ALGOS:
        raise GraphFormatError(f"{algo} needs an undirected graph")
    if not g.directed and algo in DIRECTED_ALGOS:
        raise GraphFormatError(f"{algo} needs a directed graph")
    if not g.has_ties():
        return _solve_distinct(g, algo, cfg, seed)
    h, rmap = reduce_graph(g)
    out = _solve_distinct(h, algo, cfg, seed)
    return Outcome(lift_answers(out.result, rmap), out.stats, reduced=True)
