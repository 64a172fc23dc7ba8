"""Command line: ``apnp solve|gen|verify|bench``.

Exit status: 0 success, 1 verification failure, 2 usage or I/O error.
"""

from __future__ import annotations

import argparse
import csv
import sys
import time
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from apnp.directed import SolverConfig, is_valid_path, reconstruct_path
from apnp.gen import DENSITIES, density_edges, generate_graph, parse_weight_mode
from apnp.graph import APNPMatrix, Graph, GraphFormatError, emit_result, format_graph, parse_graph
from apnp.oracle import brute_force_apnp
from apnp.solvers import ALGOS, solve_graph

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

BENCH_COLUMNS = [
    "algo", "n", "m", "rep", "seconds", "t", "threshold", "visits",
    "low_relax_total", "highhigh_relax_total", "highlow_relax_total",
    "q_additions", "waiting_insertions", "matmul_calls", "matmul_cell_ops",
]


class UsageError(Exception):
    pass


def _read_graph(path: str) -> Graph:
    try:
        text = sys.stdin.read() if path == "-" else Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    try:
        return parse_graph(text)
    except GraphFormatError as exc:
        raise UsageError(f"{path}: {exc}") from None


def _write(path: Optional[str], text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
        return
    try:
        Path(path).write_text(text)
    except OSError as exc:
        raise UsageError(f"cannot write {path}: {exc.strerror}") from None


def _config(args: argparse.Namespace) -> SolverConfig:
    return SolverConfig(t=args.t_param, omega_eff=args.omega_eff, kernel=args.kernel,
                        debug=getattr(args, "debug", False))


# -- solve ----------------------------------------------------------------------


def cmd_solve(args: argparse.Namespace) -> int:
    g = _read_graph(args.input)
    try:
        out = solve_graph(g, args.algo, _config(args), seed=args.seed)
    except GraphFormatError as exc:
        raise UsageError(str(exc)) from None
    _write(args.output, emit_result(out.result, dense=args.dense))
    if args.stats:
        lines = out.stats.lines() if out.stats is not None and hasattr(out.stats, "lines") else []
        if out.stats is not None and not lines:
            lines = list(vars(out.stats).items())
        lines = [("reduced", int(out.reduced))] + lines
        _write(args.stats, "".join(f"{k} {v}\n" for k, v in lines))
    return EXIT_OK


# -- gen ------------------------------------------------------------------------


def cmd_gen(args: argparse.Namespace) -> int:
    try:
        mode, k = parse_weight_mode(args.weights)
        g = generate_graph(args.n, args.m, directed=not args.undirected, mode=mode, classes=k,
                           seed=args.seed, multi=args.multi)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    _write(args.output, format_graph(g))
    return EXIT_OK


# -- verify -----------------------------------------------------------------------


def _directed_failure(g: Graph, cfg: SolverConfig, inject: bool) -> Optional[str]:
    fast = solve_graph(g, "fast", cfg).result
    if inject:
        fast = _inject(fast)
    ties = g.has_ties()
    refs = ["brute"] if ties else ["sweep", "naive"]
    for name in refs:
        if not fast.same_values(solve_graph(g, name).result):
            return f"fast differs from {name}"
    if not ties:
        for i, k, w in fast.entries():
            if not is_valid_path(g, reconstruct_path(fast, g, i, k), i, k, w):
                return f"invalid path for ({i}, {k})"
    return None


def _undirected_failure(g: Graph, cfg: SolverConfig, inject: bool) -> Optional[str]:
    fast = solve_graph(g, "undirected-fast", cfg).result
    if inject:
        fast = _inject(fast)
    ref = brute_force_apnp(g) if g.has_ties() else solve_graph(g, "undirected-basic").result
    if not fast.same_values(ref):
        return "undirected-fast differs from reference"
    return None


def _inject(r: APNPMatrix) -> APNPMatrix:
    """Deliberately wrong copy of ``r`` used to exercise the harness."""
    bad = APNPMatrix(r.n, r.opt.copy(), r.present.copy(), r.last_edge.copy())
    if bad.n:
        bad.present[0, bad.n - 1] = not bad.present[0, bad.n - 1]
    return bad


def _failure(g: Graph, cfg: SolverConfig, inject: bool) -> Optional[str]:
    return _directed_failure(g, cfg, inject) if g.directed else _undirected_failure(g, cfg, inject)


def shrink(g: Graph, cfg: SolverConfig, inject: bool = False) -> Graph:
    """Greedily delete edges while the failure persists."""
    edges = g.triples()
    progress = True
    while progress:
        progress = False
        for pos in range(len(edges)):
            trial = edges[:pos] + edges[pos + 1:]
            cand = Graph.from_triples(g.n, trial, g.directed, g.multi)
            if _failure(cand, cfg, inject):
                edges = trial
                progress = True
                break
    return Graph.from_triples(g.n, edges, g.directed, g.multi)


def cmd_verify(args: argparse.Namespace) -> int:
    cfg = _config(args)
    rng = np.random.default_rng(args.seed)
    if args.input:
        graphs = [_read_graph(args.input)]
    else:
        graphs = []
        for trial in range(args.trials):
            n = int(rng.integers(2, args.max_n + 1))
            directed = trial % 2 == 0
            m = density_edges(n, DENSITIES[int(rng.integers(len(DENSITIES)))], directed)
            ties = trial % 5 == 4
            graphs.append(generate_graph(
                n, m, directed=directed, mode="ties" if ties else "distinct",
                classes=max(1, min(m, 3)) if ties else 0, rng=rng))
    for g in graphs:
        reason = _failure(g, cfg, args.inject_fault)
        if reason:
            small = shrink(g, cfg, args.inject_fault)
            print(f"FAIL: {reason}", file=sys.stderr)
            _write(args.output, format_graph(small))
            return EXIT_FAIL
    print(f"OK, {len(graphs)} trials")
    return EXIT_OK


# -- bench ------------------------------------------------------------------------


def cmd_bench(args: argparse.Namespace) -> int:
    try:
        sizes = [int(s) for s in args.sizes.split(",") if s]
    except ValueError:
        raise UsageError("--sizes expects comma-separated integers") from None
    algos = [a for a in args.algos.split(",") if a]
    for a in algos:
        if a not in ("fast", "naive", "sweep"):
            raise UsageError(f"bench supports fast, naive and sweep, not {a!r}")
    cfg = _config(args)
    rows = []
    for n in sizes:
        m = density_edges(n, args.density)
        g = generate_graph(n, m, seed=args.seed)
        for algo in algos:
            for rep in range(args.reps):
                start = time.perf_counter()
                out = solve_graph(g, algo, cfg)
                elapsed = time.perf_counter() - start
                row = {c: "" for c in BENCH_COLUMNS}
                row.update(algo=algo, n=n, m=m, rep=rep, seconds=f"{elapsed:.4f}")
                if out.stats is not None and hasattr(out.stats, "lines"):
                    counters = dict(out.stats.lines())
                    for c in BENCH_COLUMNS[5:]:
                        row[c] = counters.get(c, "")
                rows.append(row)
                print(f"{algo:6s} n={n:5d} rep={rep} {elapsed:8.3f}s", file=sys.stderr)
    fh = sys.stdout if args.output in (None, "-") else open(args.output, "w", newline="")
    try:
        writer = csv.DictWriter(fh, fieldnames=BENCH_COLUMNS)
        writer.writeheader()
        writer.writerows(rows)
    finally:
        if fh is not sys.stdout:
            fh.close()
    _report_ratio(rows)
    return EXIT_OK


def _report_ratio(rows: list[dict]) -> None:
    best: dict[tuple[str, int], float] = {}
    for r in rows:
        key = (r["algo"], r["n"])
        best[key] = min(best.get(key, float("inf")), float(r["seconds"]))
    for (algo, n), sec in sorted(best.items()):
        if algo == "naive" and ("fast", n) in best:
            print(f"n={n}: naive/fast = {sec / max(best[('fast', n)], 1e-9):.2f}", file=sys.stderr)


# -- wiring -------------------------------------------------------------------------


def _add_solver_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--t-param", type=float, default=None, help="balance exponent t (overrides --omega-eff)")
    p.add_argument("--omega-eff", type=float, default=None, help="kernel exponent used for the default t")
    p.add_argument("--kernel", choices=("packed", "strassen"), default="packed")
    p.add_argument("--debug", action="store_true", help="recheck incremental products and fingerprints")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="apnp", description="All pairs non-decreasing paths")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="solve one graph file")
    p.add_argument("--input", required=True, help="graph file, or - for stdin")
    p.add_argument("--algo", choices=ALGOS, default="fast")
    p.add_argument("--output", default=None)
    p.add_argument("--stats", default=None, help="write counters as 'name value' lines")
    p.add_argument("--dense", action="store_true", help="write every pair, 'inf' when absent")
    p.add_argument("--seed", type=int, default=0)
    _add_solver_flags(p)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("gen", help="generate a random graph")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--undirected", action="store_true")
    p.add_argument("--weights", default="distinct", help="distinct or ties:K")
    p.add_argument("--multi", action="store_true")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--output", default=None)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("verify", help="cross-check solvers on random or given graphs")
    p.add_argument("--input", default=None)
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--max-n", type=int, default=24)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--output", default=None, help="where to write a counterexample")
    p.add_argument("--inject-fault", action="store_true", help=argparse.SUPPRESS)
    _add_solver_flags(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("bench", help="time solvers on dense random digraphs")
    p.add_argument("--sizes", default="128,256,512")
    p.add_argument("--algos", default="fast,naive")
    p.add_argument("--reps", type=int, default=1)
    p.add_argument("--density", default="complete", choices=DENSITIES)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--output", default=None)
    _add_solver_flags(p)
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"apnp: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
