"""Empirical p-values for mined patterns and FWER-controlling adjustments.

The ensemble holds the outputs of the miner on ``n`` randomized datasets and,
as its last entry, on the original dataset.  A pattern's p-value only looks at
statistic values: no pattern is matched across datasets.

``sample`` weights every dataset equally::

    p(x) = sum_i h_i(x) / (n + 1),   h_i(x) = #{y in A(D_i): f(y) >= f(x)} / |A(D_i)|

with ``h_i = 0`` for empty outputs.  ``pool`` weights every pattern equally::

    p(x) = sum_i #{y in A(D_i): f(y) >= f(x)} / sum_i |A(D_i)|

Both include the original output, so the pattern always ties with itself and
p-values are strictly positive.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, field
from typing import Sequence

import numpy as np

from .miners import PatternOutput

METHODS = ("sample", "pool")


class EmptyEnsembleError(ValueError):
    pass


class StatisticPool:
    """Statistics of many outputs, grouped by output size for counting queries.

    Counting ``#{y : f(y) >= x}`` per group keeps every p-value an exact ratio
    of integers whenever all outputs have the same size.
    """

    def __init__(self, statistics: Sequence[np.ndarray]):
        by_size: dict[int, list[np.ndarray]] = {}
        self.n_outputs = 0
        for s in statistics:
            s = np.asarray(s, dtype=float).reshape(-1)
            self.n_outputs += 1
            if len(s):
                by_size.setdefault(len(s), []).append(s)
        self.sizes = np.array(sorted(by_size), dtype=np.int64)
        self.groups = [np.sort(np.concatenate(by_size[k])) for k in self.sizes]
        self.total_patterns = int(sum(len(g) for g in self.groups))

    def counts(self, x) -> np.ndarray:
        """Array ``(groups, len(x))`` of counts of statistics ``>= x``."""
        x = np.atleast_1d(np.asarray(x, dtype=float))
        out = np.empty((len(self.groups), len(x)), dtype=np.int64)
        for g, values in enumerate(self.groups):
            out[g] = len(values) - np.searchsorted(values, x, side="left")
        return out

    def p_sample(self, x) -> np.ndarray:
        c = self.counts(x)
        if len(self.groups) == 1:
            return c[0] / (int(self.sizes[0]) * self.n_outputs)
        if not len(self.groups):
            return np.zeros(c.shape[1])
        return (c / self.sizes[:, None]).sum(axis=0) / self.n_outputs

    def p_pool(self, x) -> np.ndarray:
        if self.total_patterns == 0:
            raise EmptyEnsembleError("no patterns in ensemble")
        return self.counts(x).sum(axis=0) / self.total_patterns

    def p_values(self, x, method: str) -> np.ndarray:
        if method == "sample":
            return self.p_sample(x)
        if method == "pool":
            return self.p_pool(x)
        raise ValueError(f"unknown p-value method {method!r}")


class NullEnsemble:
    """Outputs for ``D_1..D_n`` followed by the original output as ``D_{n+1}``."""

    def __init__(self, original: PatternOutput, randomized: Sequence[PatternOutput]):
        self.outputs = list(randomized) + [original]
        self.n = len(randomized)
        self._pool = None

    @property
    def original(self) -> PatternOutput:
        return self.outputs[-1]

    @property
    def pool(self) -> StatisticPool:
        if self._pool is None:
            self._pool = StatisticPool([o.statistics for o in self.outputs])
        return self._pool

    def statistic_of(self, x) -> float:
        for y, s in zip(self.original.patterns, self.original.statistics):
            if y == x:
                return float(s)
        raise KeyError(f"pattern {x} is not in the original output")

    def p_values(self, method: str = "sample") -> np.ndarray:
        """p-values of all original patterns, in output order."""
        return self.pool.p_values(self.original.statistics, method)


def h_fraction(x_stat: float, target: PatternOutput) -> float:
    m = len(target)
    if m == 0:
        return 0.0
    return int(np.count_nonzero(x_stat <= target.statistics)) / m


def p_sample(x, ens: NullEnsemble) -> float:
    return float(ens.pool.p_sample(ens.statistic_of(x))[0])


def p_pool(x, ens: NullEnsemble) -> float:
    return float(ens.pool.p_pool(ens.statistic_of(x))[0])


def adjust_bonferroni(p, m: int | None = None) -> np.ndarray:
    p = np.asarray(p, dtype=float)
    if m is None:
        m = len(p)
    return np.minimum(1.0, m * p)


def adjust_holm(p) -> np.ndarray:
    """Holm step-down adjustment of ascending p-values.

    ``q_1 = min(1, m p_1)``, ``q_i = min(1, max(q_{i-1}, (m - i + 1) p_i))``.
    """
    p = np.asarray(p, dtype=float)
    if np.any(np.diff(p) < 0):
        raise ValueError("p-values must be sorted ascending")
    m = len(p)
    scaled = np.minimum(1.0, (m - np.arange(m)) * p)
    return np.maximum.accumulate(scaled) if m else scaled


def holm(p) -> np.ndarray:
    """Holm-adjusted values of ``p`` in its original order (stable ties)."""
    p = np.asarray(p, dtype=float)
    order = np.argsort(p, kind="stable")
    out = np.empty_like(p)
    out[order] = adjust_holm(p[order])
    return out


def monte_carlo_se(p, n: int) -> np.ndarray:
    p = np.asarray(p, dtype=float)
    return np.sqrt(p * (1 - p) / (n + 1))


@dataclass
class PatternRecord:
    pattern: object
    statistic: float
    p_sample: float | None = None
    p_pool: float | None = None
    se_sample: float | None = None
    se_pool: float | None = None
    holm_sample: float | None = None
    holm_pool: float | None = None
    bonferroni_sample: float | None = None
    bonferroni_pool: float | None = None
    significant_sample: bool | None = None
    significant_pool: bool | None = None


@dataclass
class SignificanceReport:
    records: list[PatternRecord]
    methods: tuple[str, ...]
    alpha: float | None = None
    n: int = 0
    metadata: dict = field(default_factory=dict)

    def significant_patterns(self, method: str | None = None) -> list[PatternRecord]:
        method = method or self.methods[0]
        hits = [r for r in self.records if getattr(r, f"significant_{method}")]
        return sorted(hits, key=lambda r: getattr(r, f"holm_{method}"))

    def to_json(self, pattern_encoder=None) -> dict:
        enc = pattern_encoder or (lambda x: x)
        records = []
        for r in self.records:
            d = asdict(r)
            d["pattern"] = enc(r.pattern)
            records.append(d)
        return {
            "alpha": self.alpha,
            "n": self.n,
            "methods": list(self.methods),
            "n_patterns": len(self.records),
            "n_significant": {m: len(self.significant_patterns(m)) for m in self.methods},
            "metadata": self.metadata,
            "records": records,
        }


def assess(ens: NullEnsemble, methods: Sequence[str] = ("sample", "pool"), metadata=None) -> SignificanceReport:
    """Raw and adjusted p-values for every original pattern.

    Records are ordered by the first method's raw p-value, ties kept in the
    miner's output order.
    """
    methods = tuple(methods)
    for m in methods:
        if m not in METHODS:
            raise ValueError(f"unknown p-value method {m!r}")
    original = ens.original
    m_patterns = len(original)
    columns = {}
    for meth in methods:
        p = ens.p_values(meth)
        columns[f"p_{meth}"] = p
        columns[f"se_{meth}"] = monte_carlo_se(p, ens.n)
        columns[f"holm_{meth}"] = holm(p)
        columns[f"bonferroni_{meth}"] = adjust_bonferroni(p, m_patterns)
    order = np.argsort(columns[f"p_{methods[0]}"], kind="stable") if m_patterns else []
    records = []
    for i in order:
        rec = PatternRecord(original.patterns[i], float(original.statistics[i]))
        for key, col in columns.items():
            setattr(rec, key, float(col[i]))
        records.append(rec)
    return SignificanceReport(records, methods, None, ens.n, dict(metadata or {}))


def significant(report: SignificanceReport, alpha: float) -> SignificanceReport:
    """Flag patterns whose Holm-adjusted p-value is at most ``alpha``."""
    if not (0 < alpha < 1):
        raise ValueError("alpha must lie in (0, 1)")
    for rec in report.records:
        for meth in report.methods:
            setattr(rec, f"significant_{meth}", getattr(rec, f"holm_{meth}") <= alpha)
    report.alpha = alpha
    return report


def count_significant(adjusted, alphas) -> np.ndarray:
    """Number of adjusted p-values ``<= alpha`` for each alpha."""
    adjusted = np.sort(np.asarray(adjusted, dtype=float))
    return np.searchsorted(adjusted, np.asarray(alphas, dtype=float), side="right")
