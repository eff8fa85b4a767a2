"""Brute-force reference implementations, kept independent of the package code."""

import itertools
import math
from fractions import Fraction

import numpy as np


def fisher_tail_exact(a, row, col, total):
    """P(X >= a) for X hypergeometric, by enumerating the support with exact integers."""
    den = math.comb(total, col)
    lo = max(0, row + col - total)
    hi = min(row, col)
    num = sum(math.comb(row, k) * math.comb(total - row, col - k) for k in range(max(a, lo), hi + 1))
    return Fraction(num, den)


def neg_log(p: Fraction) -> float:
    """-ln p, computed so that p close to 1 keeps full relative accuracy."""
    if p > Fraction(1, 2):
        return -math.log1p(-float(1 - p))
    return -math.log(float(p))


def all_tables(max_total):
    """Every 2x2 table (a, b, c, d) of nonnegative counts with a+b+c+d <= max_total."""
    for total in range(max_total + 1):
        for a in range(total + 1):
            for b in range(total - a + 1):
                for c in range(total - a - b + 1):
                    yield a, b, c, total - a - b - c


def brute_force_itemsets(dense, min_support, min_size):
    dense = np.asarray(dense, dtype=bool)
    cols = dense.shape[1]
    found = []
    for size in range(min_size, cols + 1):
        for combo in itertools.combinations(range(cols), size):
            if dense[:, list(combo)].all(axis=1).sum() >= min_support:
                found.append(combo)
    return sorted(found)


def margin_matrices(row_sums, col_sums):
    """All 0-1 matrices with the given margins, by enumerating every matrix."""
    r, c = len(row_sums), len(col_sums)
    out = []
    for bits in itertools.product((0, 1), repeat=r * c):
        m = np.array(bits).reshape(r, c)
        if list(m.sum(axis=1)) == list(row_sums) and list(m.sum(axis=0)) == list(col_sums):
            out.append(frozenset(zip(*np.nonzero(m))))
    return out


def p_sample_direct(x_stat, outputs):
    """Sample-based p-value written out term by term with fractions."""
    total = Fraction(0)
    for stats in outputs:
        if len(stats):
            total += Fraction(sum(1 for s in stats if x_stat <= s), len(stats))
    return total / len(outputs)


def p_pool_direct(x_stat, outputs):
    num = sum(sum(1 for s in stats if s >= x_stat) for stats in outputs)
    return Fraction(num, sum(len(s) for s in outputs))


def holm_direct(p_sorted):
    """Holm step-down: q_i = max over j <= i of min(1, (m - j + 1) p_j)."""
    m = len(p_sorted)
    return [max(min(1.0, (m - j) * p_sorted[j]) for j in range(i + 1)) for i in range(m)]


def random_dense(rng, rows, cols, density):
    return (rng.random((rows, cols)) < density).astype(np.int8)
