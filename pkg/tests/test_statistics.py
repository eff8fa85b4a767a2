import math

import numpy as np
import pytest

from oracles import fisher_tail_exact, neg_log
from sigpat import statistics
from sigpat.dataset import AssociationRule, BinaryDataset, Itemset
from sigpat.statistics import (
    StatisticSpec,
    fisher_log_tail,
    fisher_table,
    stat_fisher,
    stat_frequency,
    stat_graph,
    stat_lift,
)


def test_frequency_cases():
    d = BinaryDataset([[0, 1], [0], [1], [2]])
    assert stat_frequency(Itemset((0, 1)), d) == 0.25
    full = BinaryDataset([[0, 1]] * 3)
    assert stat_frequency(Itemset((0, 1)), full) == 1.0
    assert stat_frequency(Itemset((2,)), BinaryDataset([[0]], cols=3)) == 0.0


def test_lift_hand_value():
    # 10 rows: freq(A) = 0.4, freq(B) = 0.5, freq(AB) = 0.2.
    rows = [[0, 1], [0, 1], [0], [0], [1], [1], [1], [], [], []]
    d = BinaryDataset(rows)
    assert stat_lift(Itemset((0, 1)), d) == pytest.approx(0.2 / (0.4 * 0.5), rel=1e-15)
    assert stat_lift(Itemset((0,)), d) == 1.0


def test_lift_unsupported_singleton():
    d = BinaryDataset([[0]], cols=2)
    with pytest.raises(ZeroDivisionError, match="unsupported singleton"):
        stat_lift(Itemset((0, 1)), d)


def test_fisher_perfect_association():
    # 20 rows, antecedent and consequent together in 10 of them and absent elsewhere.
    d = BinaryDataset([[0, 1]] * 10 + [[]] * 10, cols=2)
    rule = AssociationRule(Itemset((0,)), Itemset((1,)))
    assert fisher_table(rule, d) == (10, 0, 0, 10)
    expected = math.log(math.comb(20, 10))
    assert stat_fisher(rule, d) == pytest.approx(expected, rel=1e-13)
    assert stat_fisher(rule, d) == pytest.approx(12.126791314602455, rel=1e-13)


def test_fisher_ones_table_against_enumeration():
    p_exact = fisher_tail_exact(1, 2, 2, 4)
    p, s = fisher_log_tail(1, 2, 2, 4)
    assert p == pytest.approx(float(p_exact), rel=1e-13)
    assert s == pytest.approx(neg_log(p_exact), rel=1e-12)


def test_fisher_empty_consequent():
    d = BinaryDataset([[0], [0], []], cols=2)
    rule = AssociationRule(Itemset((0,)), Itemset((1,)))
    assert stat_fisher(rule, d) == 0.0


def test_fisher_label_symmetry():
    rng = np.random.default_rng(3)
    d = BinaryDataset.from_dense((rng.random((40, 4)) < 0.4).astype(int))
    for a, b in [(0, 1), (1, 2), (0, 3)]:
        r1 = AssociationRule(Itemset((a,)), Itemset((b,)))
        r2 = AssociationRule(Itemset((b,)), Itemset((a,)))
        assert stat_fisher(r1, d) == stat_fisher(r2, d)


def test_fisher_large_counts_finite():
    # The tail mass underflows a double; its logarithm does not.
    p, s = fisher_log_tail(900, 1000, 1000, 88162)
    assert p == 0.0
    assert math.isfinite(s) and s > 1000


def test_fisher_equal_tails_are_bitwise_equal():
    seen = {}
    total = 20
    for row in range(total + 1):
        for col in range(total + 1):
            for a in range(max(0, row + col - total), min(row, col) + 1):
                p = fisher_tail_exact(a, row, col, total)
                seen.setdefault(p, set()).add(fisher_log_tail(a, row, col, total)[1])
    assert all(len(v) == 1 for v in seen.values())


def test_fisher_log_space_path(monkeypatch):
    monkeypatch.setattr(statistics, "EXACT_MAX_TOTAL", 0)
    for a, row, col, total in [(3, 5, 6, 12), (10, 10, 10, 20), (1, 7, 9, 25), (0, 4, 4, 8), (12, 15, 14, 40)]:
        p = fisher_tail_exact(a, row, col, total)
        _, s = fisher_log_tail(a, row, col, total)
        assert s == pytest.approx(neg_log(p), rel=1e-12, abs=0 if p < 1 else 1e-300)


def test_fisher_exact_path_underflow():
    p, s = fisher_log_tail(2400, 2400, 2400, 4800)
    assert p == 0.0
    assert s == pytest.approx(math.log(math.comb(4800, 2400)), rel=1e-12)


def test_fisher_rejects_impossible_table():
    with pytest.raises(ValueError):
        fisher_log_tail(5, 3, 10, 20)


def test_graph_statistic():
    assert stat_graph(1, 0.7) == 0.0
    assert stat_graph(math.e ** 2, 0.5) == pytest.approx(1.0)
    assert stat_graph(6, 40 / 340) == pytest.approx(40 / 340 * math.log(6))
    with pytest.raises(ValueError):
        stat_graph(0, 0.5)


def test_statistic_spec():
    assert StatisticSpec("fisher").pattern_kind == "rule"
    with pytest.raises(ValueError):
        StatisticSpec("chi2")
