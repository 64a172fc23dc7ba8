"""Seeded random graph generation."""

from __future__ import annotations

from typing import Optional

import numpy as np

from apnp.graph import Graph


def parse_weight_mode(text: str) -> tuple[str, int]:
    """``distinct`` or ``ties:K`` (also ``ties(K)``)."""
    text = text.strip()
    if text == "distinct":
        return "distinct", 0
    for pre, post in (("ties:", ""), ("ties(", ")")):
        if text.startswith(pre) and text.endswith(post):
            k = int(text[len(pre):len(text) - len(post)])
            if k < 1:
                raise ValueError("ties needs at least one class")
            return "ties", k
    raise ValueError(f"unknown weight mode {text!r}")


def _pairs(n: int, m: int, directed: bool, multi: bool, rng: np.random.Generator) -> list[tuple[int, int]]:
    total = n * (n - 1) if directed else n * (n - 1) // 2
    if multi:
        if m and total == 0:
            raise ValueError("no vertex pairs available")
        idx = rng.integers(0, max(total, 1), size=m)
    else:
        if m > total:
            raise ValueError(f"m={m} exceeds the {total} possible edges of a simple graph")
        idx = rng.choice(total, size=m, replace=False)
    out = []
    for q in idx.tolist():
        if directed:
            u, r = divmod(q, n - 1)
            v = r if r < u else r + 1
        else:
            # row u holds pairs (u, u+1..n-1)
            u = 0
            while q >= n - 1 - u:
                q -= n - 1 - u
                u += 1
            v = u + 1 + q
            if rng.integers(2):
                u, v = v, u
        out.append((u, v))
    return out


def generate_graph(
    n: int,
    m: int,
    directed: bool = True,
    mode: str = "distinct",
    classes: int = 0,
    seed: int = 0,
    multi: bool = False,
    rng: Optional[np.random.Generator] = None,
) -> Graph:
    """Random graph with ``m`` edges; weights distinct or drawn from ``classes`` values."""
    rng = rng if rng is not None else np.random.default_rng(seed)
    pairs = _pairs(n, m, directed, multi, rng)
    if mode == "distinct":
        weights = (rng.choice(4 * m + 4, size=m, replace=False) + 1).tolist()
    elif mode == "ties":
        if classes > m:
            raise ValueError(f"cannot realise {classes} weight classes with {m} edges")
        values = list(range(1, classes + 1)) + rng.integers(1, classes + 1, size=m - classes).tolist()
        weights = rng.permutation(np.array(values, dtype=np.int64)).tolist() if m else []
    else:
        raise ValueError(f"unknown weight mode {mode!r}")
    return Graph.from_triples(n, [(u, v, w) for (u, v), w in zip(pairs, weights)], directed, multi)


DENSITIES = ("tree", "10%", "50%", "complete")


def density_edges(n: int, density: str, directed: bool = True) -> int:
    total = n * (n - 1) if directed else n * (n - 1) // 2
    if density == "tree":
        return min(total, max(n - 1, 0))
    if density == "complete":
        return total
    return min(total, max(1, round(total * float(density.rstrip("%")) / 100)))
