"""Pattern miners: level-wise frequent itemsets and association rules."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .dataset import AssociationRule, BinaryDataset, Itemset
from .statistics import StatisticSpec, evaluate

MINERS = ("frequent-itemsets", "association-rules")
_ALIASES = {"itemsets": "frequent-itemsets", "rules": "association-rules"}


@dataclass(frozen=True)
class MinerSpec:
    kind: str
    min_support: int
    min_size: int = 2

    def __post_init__(self):
        object.__setattr__(self, "kind", _ALIASES.get(self.kind, self.kind))
        if self.kind not in MINERS:
            raise ValueError(f"unknown miner {self.kind!r}")
        if self.min_support < 1:
            raise ValueError("min_support must be >= 1")
        if self.min_size < 1:
            raise ValueError("min_size must be >= 1")

    @property
    def pattern_kind(self) -> str:
        return "itemset" if self.kind == "frequent-itemsets" else "rule"


@dataclass
class PatternOutput:
    """Mined patterns of one dataset with their statistic values.

    ``source`` is the ensemble index of the dataset the patterns came from.
    """

    patterns: list
    statistics: np.ndarray = field(default_factory=lambda: np.empty(0))
    source: int | None = None

    def __post_init__(self):
        self.statistics = np.asarray(self.statistics, dtype=float).reshape(-1)
        if len(self.patterns) != len(self.statistics):
            raise ValueError("one statistic per pattern is required")
        if not np.isfinite(self.statistics).all():
            raise ValueError("statistics must be finite")

    def __len__(self):
        return len(self.patterns)

    @classmethod
    def from_statistics(cls, values, source=None) -> "PatternOutput":
        values = np.asarray(values, dtype=float).reshape(-1)
        return cls(list(range(len(values))), values, source)


def _frequent_levels(d: BinaryDataset, min_support: int):
    """Yield ``(itemset_tuple, tidset)`` for every frequent itemset, level by level."""
    tids = d.tidsets()
    level = [((c,), tids[c]) for c in range(d.cols) if tids[c].bit_count() >= min_support]
    while level:
        yield from level
        frequent = {items for items, _ in level}
        nxt = []
        # Join itemsets sharing their first k-1 items; level is lexicographically sorted.
        start = 0
        while start < len(level):
            prefix = level[start][0][:-1]
            end = start
            while end < len(level) and level[end][0][:-1] == prefix:
                end += 1
            for i in range(start, end):
                items_i, tid_i = level[i]
                for j in range(i + 1, end):
                    last = level[j][0][-1]
                    cand = items_i + (last,)
                    if len(cand) > 2 and any(
                        cand[:k] + cand[k + 1:] not in frequent for k in range(len(cand) - 2)
                    ):
                        continue
                    tid = tid_i & tids[last]
                    if tid.bit_count() >= min_support:
                        nxt.append((cand, tid))
            start = end
        level = nxt


def mine_itemsets(d: BinaryDataset, min_support: int, min_size: int = 1) -> list[Itemset]:
    """All itemsets with at least ``min_size`` items and absolute support >= ``min_support``.

    Sorted lexicographically by item indices.
    """
    if min_support < 1 or min_size < 1:
        raise ValueError("min_support and min_size must be >= 1")
    found = [items for items, _ in _frequent_levels(d, min_support) if len(items) >= min_size]
    found.sort()
    return [Itemset(items) for items in found]


def mine_rules(d: BinaryDataset, min_support: int) -> list[AssociationRule]:
    """One rule per single-item consequent of every frequent itemset of size >= 2."""
    rules = []
    for x in mine_itemsets(d, min_support, min_size=2):
        for k, item in enumerate(x.items):
            rules.append(AssociationRule(Itemset(x.items[:k] + x.items[k + 1:]), Itemset((item,))))
    return rules


def run_miner(d: BinaryDataset, spec: MinerSpec, stat: StatisticSpec, source=None) -> PatternOutput:
    if spec.pattern_kind != stat.pattern_kind:
        raise ValueError(f"statistic {stat.kind!r} does not apply to {spec.kind}")
    if spec.kind == "frequent-itemsets":
        patterns = mine_itemsets(d, spec.min_support, spec.min_size)
    else:
        patterns = mine_rules(d, spec.min_support)
    values = np.fromiter((evaluate(stat, x, d) for x in patterns), dtype=float, count=len(patterns))
    return PatternOutput(patterns, values, source)


def load_external(path) -> tuple[PatternOutput, list[PatternOutput]]:
    """Read externally mined outputs.

    The file is a JSON object ``{"original": [...], "randomized": [[...], ...]}``
    where each list holds ``{"id": ..., "statistic": ...}`` records.
    """
    doc = json.loads(Path(path).read_text())
    try:
        original = doc["original"]
        randomized = doc["randomized"]
    except (TypeError, KeyError):
        raise ValueError(f"{path}: expected keys 'original' and 'randomized'") from None

    def convert(records, source):
        return PatternOutput([r["id"] for r in records], [float(r["statistic"]) for r in records], source)

    null = [convert(recs, i) for i, recs in enumerate(randomized)]
    return convert(original, len(null)), null


def dump_output(out: PatternOutput, labels=None) -> list[dict]:
    records = []
    for x, s in zip(out.patterns, out.statistics):
        ident = x.to_json(labels) if hasattr(x, "to_json") else x
        records.append({"id": ident, "statistic": float(s)})
    return records
