"""Test statistics attached to mined patterns.

Larger values are more interesting.  The Fisher statistic is ``-ln p`` for
the one-sided (over-representation) Fisher exact test between antecedent and
consequent.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .dataset import AssociationRule, BinaryDataset, Itemset

STATISTICS = ("frequency", "lift", "fisher", "graph")
_PATTERN_KIND = {"frequency": "itemset", "lift": "itemset", "fisher": "rule", "graph": "graph"}


@dataclass(frozen=True)
class StatisticSpec:
    kind: str

    def __post_init__(self):
        if self.kind not in STATISTICS:
            raise ValueError(f"unknown statistic {self.kind!r}; choose from {STATISTICS}")

    @property
    def pattern_kind(self) -> str:
        return _PATTERN_KIND[self.kind]


def stat_frequency(x: Itemset, d: BinaryDataset) -> float:
    if d.rows == 0:
        return 0.0
    return d.support(x.items) / d.rows


def stat_lift(x: Itemset, d: BinaryDataset) -> float:
    """freq(x) / prod of single-item frequencies.

    Evaluated as one exact integer ratio so that mathematically equal lifts
    are bitwise equal floats.
    """
    den = 1
    for item in x.items:
        s = int(d.col_margins[item])
        if s == 0:
            raise ZeroDivisionError(f"unsupported singleton {item} in {x}")
        den *= s
    return d.support(x.items) * d.rows ** (len(x) - 1) / den


@lru_cache(maxsize=8)
def _log_factorials(n: int) -> np.ndarray:
    return np.array([math.lgamma(i + 1.0) for i in range(n + 1)])


def log_factorials(n: int) -> np.ndarray:
    """``ln k!`` for ``k = 0..n``, grown in powers of two and cached."""
    size = 64
    while size < n:
        size *= 2
    return _log_factorials(size)


# Tables up to this many observations get an exact integer tail, so equal
# tails give bitwise equal statistics; larger ones are summed in log space.
EXACT_MAX_TOTAL = 5000


def fisher_log_tail(a: int, row: int, col: int, total: int) -> tuple[float, float]:
    """One-sided Fisher tail for a 2x2 table.

    ``a`` is the joint count, ``row`` and ``col`` the two marginal counts and
    ``total`` the number of observations.  Returns ``(p, -ln p)`` where ``p``
    is ``P(X >= a)`` for ``X`` hypergeometric with those margins.
    """
    if not (0 <= a <= min(row, col) and max(row, col) <= total and a >= row + col - total):
        raise ValueError(f"inconsistent table: a={a}, margins=({row}, {col}), total={total}")
    # The tail is symmetric in the two margins; a fixed order makes it bitwise so.
    row, col = min(row, col), max(row, col)
    if a <= max(0, row + col - total):
        return 1.0, 0.0
    if total <= EXACT_MAX_TOTAL:
        return _exact_tail(a, row, col, total)
    return _log_space_tail(a, row, col, total)


def _exact_tail(a, row, col, total):
    lo, hi = max(0, row + col - total), row
    term = math.comb(row, lo) * math.comb(total - row, col - lo)
    upper = lower = 0
    for k in range(lo, hi + 1):
        if k >= a:
            upper += term
        else:
            lower += term
        if k < hi:
            term = term * (row - k) * (col - k) // ((k + 1) * (total - row - col + k + 1))
    den = upper + lower
    g = math.gcd(upper, den)
    upper, lower, den = upper // g, lower // g, den // g
    # Every branch is a function of the reduced fraction alone.
    if 2 * lower < den:
        q = lower / den
        return 1.0 - q, -math.log1p(-q)
    p = upper / den
    if p > 1e-300:
        return p, -math.log(p)
    return p, math.log(den) - math.log(upper)


def _log_space_tail(a, row, col, total):
    lo, hi = max(0, row + col - total), row
    lf = log_factorials(total)
    ks = np.arange(lo, hi + 1)
    logpmf = (
        lf[row] - lf[ks] - lf[row - ks]
        + lf[total - row] - lf[col - ks] - lf[total - row - col + ks]
        - lf[total] + lf[col] + lf[total - col]
    )
    upper = logpmf[a - lo:]
    lower = logpmf[:a - lo]
    log_upper = _logsumexp(upper)
    if log_upper < -math.log(2.0):
        return math.exp(log_upper), -log_upper
    # Upper tail near 1: go through the small complementary mass for accuracy.
    q = min(math.exp(_logsumexp(lower)), 1.0)
    p = 1.0 - q
    return p, -math.log1p(-q) if q < 1.0 else math.inf


def _logsumexp(v: np.ndarray) -> float:
    top = float(v.max())
    return top + math.log(float(np.exp(v - top).sum()))


def fisher_table(r: AssociationRule, d: BinaryDataset) -> tuple[int, int, int, int]:
    """Counts (both, antecedent only, consequent only, neither)."""
    tids = d.tidsets()
    full = (1 << d.rows) - 1
    ant = full
    for c in r.antecedent.items:
        ant &= tids[c]
    con = full
    for c in r.consequent.items:
        con &= tids[c]
    both = (ant & con).bit_count()
    n_ant = ant.bit_count()
    n_con = con.bit_count()
    return both, n_ant - both, n_con - both, d.rows - n_ant - n_con + both


def stat_fisher(r: AssociationRule, d: BinaryDataset) -> float:
    a, b, c, _ = fisher_table(r, d)
    return fisher_log_tail(a, a + b, a + c, d.rows)[1]


def stat_graph(pattern_node_count: int, support: float) -> float:
    """Relative support times the natural log of the pattern's node count."""
    if pattern_node_count < 1:
        raise ValueError("pattern must have at least one node")
    return support * math.log(pattern_node_count)


def evaluate(spec: StatisticSpec, pattern, d: BinaryDataset) -> float:
    if spec.kind == "frequency":
        return stat_frequency(pattern, d)
    if spec.kind == "lift":
        return stat_lift(pattern, d)
    if spec.kind == "fisher":
        return stat_fisher(pattern, d)
    raise ValueError(f"statistic {spec.kind!r} cannot be evaluated on a binary dataset")
