import numpy as np
import pytest

from oracles import margin_matrices, random_dense
from sigpat.dataset import BinaryDataset, parse_graphs
from sigpat.randomizers import (
    RandomizerSpec,
    randomize_col,
    randomize_graph,
    randomize_swap,
    sample_ensemble,
)


def test_col_all_zero_unchanged():
    d = BinaryDataset([[], [], []], cols=4)
    assert randomize_col(d, 1) == d


def test_col_keeps_single_column_margin():
    d = BinaryDataset([[0], [0], [], [0], []])
    for seed in range(20):
        assert randomize_col(d, seed).col_margins.tolist() == [3]


def test_col_two_by_two_over_seeds():
    d = BinaryDataset.from_dense([[1, 0], [1, 0]])
    for seed in range(1000):
        assert randomize_col(d, seed).col_margins.tolist() == [2, 0]


def test_col_is_uniform_over_rows():
    d = BinaryDataset([[0]] + [[]] * 3)
    hits = np.zeros(4)
    for seed in range(4000):
        hits[randomize_col(d, seed).transactions.index((0,))] += 1
    assert np.all(np.abs(hits / 4000 - 0.25) < 0.03)


def test_swap_identity_two_by_two():
    d = BinaryDataset.from_dense([[1, 0], [0, 1]])
    for seed in range(50):
        diag = {}
        out = randomize_swap(d, attempts=1, seed=seed, diagnostics=diag)
        if diag["accepted"] == 1:
            break
    assert diag["accepted"] == 1
    assert out.to_dense().tolist() == [[0, 1], [1, 0]]


def test_swap_preserves_margins_random_inputs():
    rng = np.random.default_rng(11)
    for seed in range(50):
        d = BinaryDataset.from_dense(random_dense(rng, 12, 9, 0.35))
        out = randomize_swap(d, 200, seed)
        assert out.row_margins.tolist() == d.row_margins.tolist()
        assert out.col_margins.tolist() == d.col_margins.tolist()


def test_swap_reaches_all_permutation_matrices():
    d = BinaryDataset.from_cells([(0, 0), (1, 1), (2, 2)], 3, 3)
    reachable = set(margin_matrices([1, 1, 1], [1, 1, 1]))
    assert len(reachable) == 6
    seen = {frozenset(randomize_swap(d, 50, seed).cells()) for seed in range(300)}
    assert seen == reachable


def test_swap_attempts_validation():
    with pytest.raises(ValueError):
        randomize_swap(BinaryDataset([[0]]), attempts=0)


def test_graph_path_degrees():
    gs = parse_graphs("t 0\nv 0 a\nv 1 a\nv 2 a\ne 0 1\ne 1 2\n")
    for seed in range(20):
        assert randomize_graph(gs, 500, seed).degree_sequences() == [[1, 2, 1]]


def test_graph_two_edges_outcomes():
    gs = parse_graphs("t 0\nv 0 a\nv 1 b\nv 2 c\nv 3 d\ne 0 1\ne 2 3\n")
    # Perfect matchings of {a, b, c, d}: the only degree-preserving simple graphs.
    allowed = [
        {frozenset((0, 1)), frozenset((2, 3))},
        {frozenset((0, 3)), frozenset((2, 1))},
        {frozenset((0, 2)), frozenset((1, 3))},
    ]
    seen = []
    for seed in range(200):
        es = randomize_graph(gs, 1, seed).graphs[0].edge_set()
        assert es in allowed
        if es not in seen:
            seen.append(es)
    assert len(seen) == 3


def test_ensemble_requires_n():
    with pytest.raises(ValueError, match="n must be >= 1"):
        sample_ensemble(BinaryDataset([[0]]), RandomizerSpec("col"), 0)


def test_ensemble_deterministic_and_order_free(small_dataset):
    spec = RandomizerSpec("swap", seed=42, attempts=30)
    a = sample_ensemble(small_dataset, spec, 6)
    b = sample_ensemble(small_dataset, spec, 6)
    assert a == b
    assert a[3] == sample_ensemble(small_dataset, spec, 4)[3]
    assert len({x.transactions for x in a}) > 1


def test_ensemble_parallel_matches_sequential(small_dataset):
    spec = RandomizerSpec("col", seed=5)
    assert sample_ensemble(small_dataset, spec, 5, threads=2) == sample_ensemble(small_dataset, spec, 5, threads=1)


def test_spec_validation():
    assert RandomizerSpec("graph-edge-swap").kind == "graph"
    with pytest.raises(ValueError):
        RandomizerSpec("swap", attempts=0)
    with pytest.raises(ValueError):
        RandomizerSpec("bootstrap")
