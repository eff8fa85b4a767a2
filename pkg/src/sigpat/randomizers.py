"""Samplers for the null distribution.

* ``col``: each column's ones are moved to a uniformly random set of rows of
  the same size (column margins kept exactly).
* ``swap``: 2x2 checkerboard swaps on the ones of the matrix (row and column
  margins kept exactly).
* ``graph``: endpoint swaps between two edges of the same graph (degree
  sequence kept, graph stays simple).

Every ensemble member is derived from the original dataset with its own
random stream, keyed by ``(seed, index)``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._parallel import parallel_map
from .dataset import BinaryDataset, Graph, GraphTransactionSet

RANDOMIZERS = ("col", "swap", "graph")
SWAPS_PER_CELL = 4


@dataclass(frozen=True)
class RandomizerSpec:
    kind: str
    seed: int = 0
    attempts: int | None = None

    def __post_init__(self):
        if self.kind == "graph-edge-swap":
            object.__setattr__(self, "kind", "graph")
        if self.kind not in RANDOMIZERS:
            raise ValueError(f"unknown randomizer {self.kind!r}")
        if self.attempts is not None and self.attempts < 1:
            raise ValueError("attempts must be >= 1")

    def to_dict(self) -> dict:
        return {"kind": self.kind, "seed": self.seed, "attempts": self.attempts}


def stream(seed: int, index: int) -> np.random.Generator:
    """Independent generator for ensemble member ``index``."""
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(index,)))


def randomize_col(d: BinaryDataset, seed=None) -> BinaryDataset:
    rng = np.random.default_rng(seed)
    transactions = [[] for _ in range(d.rows)]
    for c, k in enumerate(d.col_margins):
        if k:
            for r in rng.choice(d.rows, size=int(k), replace=False):
                transactions[r].append(c)
    return d.with_transactions(transactions)


def default_swap_attempts(d: BinaryDataset) -> int:
    return max(1, SWAPS_PER_CELL * d.n_cells)


def randomize_swap(d: BinaryDataset, attempts: int | None = None, seed=None, diagnostics: dict | None = None) -> BinaryDataset:
    """Swap randomization.

    Each attempt picks two ones ``(r1, c1)``, ``(r2, c2)`` uniformly.  When
    ``r1 != r2``, ``c1 != c2`` and both ``(r1, c2)`` and ``(r2, c1)`` are
    zeros, the pair is replaced by them.  If ``diagnostics`` is given, the
    numbers of attempted and accepted swaps are stored in it.
    """
    if attempts is None:
        attempts = default_swap_attempts(d)
    if attempts < 1:
        raise ValueError("attempts must be >= 1")
    rng = np.random.default_rng(seed)
    rows = [r for r, t in enumerate(d.transactions) for _ in t]
    cols = [c for t in d.transactions for c in t]
    present = set(zip(rows, cols))
    accepted = 0
    n = len(rows)
    if n >= 2:
        picks = rng.integers(0, n, size=(attempts, 2)).tolist()
        for i, j in picks:
            r1, c1 = rows[i], cols[i]
            r2, c2 = rows[j], cols[j]
            if r1 == r2 or c1 == c2 or (r1, c2) in present or (r2, c1) in present:
                continue
            present.discard((r1, c1))
            present.discard((r2, c2))
            present.add((r1, c2))
            present.add((r2, c1))
            cols[i], cols[j] = c2, c1
            accepted += 1
    if diagnostics is not None:
        diagnostics["attempted"] = attempts
        diagnostics["accepted"] = accepted
    transactions = [[] for _ in range(d.rows)]
    for r, c in zip(rows, cols):
        transactions[r].append(c)
    return d.with_transactions(transactions)


def swap_graph_edges(g: Graph, attempts: int, rng: np.random.Generator) -> Graph:
    edges = list(g.edges)
    labels = list(g.edge_labels)
    m = len(edges)
    if m < 2:
        return Graph(g.gid, dict(g.node_labels), edges, labels)
    present = {frozenset(e) for e in edges}
    picks = rng.integers(0, m, size=(attempts, 2)).tolist()
    flips = rng.integers(0, 2, size=attempts).tolist()
    for (i, j), flip in zip(picks, flips):
        if i == j:
            continue
        a, b = edges[i]
        c, d = edges[j]
        if flip:
            c, d = d, c
        # (a, b), (c, d) -> (a, d), (c, b)
        if a == d or c == b:
            continue
        new1, new2 = frozenset((a, d)), frozenset((c, b))
        if new1 in present or new2 in present:
            continue
        present.difference_update((frozenset((a, b)), frozenset((c, d))))
        present.update((new1, new2))
        edges[i] = (a, d)
        edges[j] = (c, b)
    return Graph(g.gid, dict(g.node_labels), edges, labels)


def randomize_graph(gs: GraphTransactionSet, attempts_per_graph: int = 500, seed=None) -> GraphTransactionSet:
    if attempts_per_graph < 1:
        raise ValueError("attempts_per_graph must be >= 1")
    rng = np.random.default_rng(seed)
    return GraphTransactionSet([swap_graph_edges(g, attempts_per_graph, rng) for g in gs.graphs])


def randomize(data, spec: RandomizerSpec, index: int):
    """Ensemble member ``index`` drawn from ``data`` under ``spec``."""
    rng = stream(spec.seed, index)
    if spec.kind == "col":
        return randomize_col(data, rng)
    if spec.kind == "swap":
        return randomize_swap(data, spec.attempts, rng)
    return randomize_graph(data, spec.attempts or 500, rng)


def _member(args):
    data, spec, i = args
    return randomize(data, spec, i)


def sample_ensemble(data, spec: RandomizerSpec, n: int, threads: int = 1) -> list:
    """``n`` randomized copies of ``data``; identical for any ``threads``."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return parallel_map(_member, [(data, spec, i) for i in range(n)], threads)
