"""Binary transaction data and graph-transaction data.

A :class:`BinaryDataset` stores a 0-1 matrix sparsely, one sorted tuple of
column indices per row.  External item ids from FIMI-style files are mapped
onto dense indices ``0..cols-1``; the original ids are kept in ``labels`` so
that reports can print them back.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np


class DataFormatError(ValueError):
    """Raised when an input file cannot be parsed."""


@dataclass(frozen=True, order=True)
class Itemset:
    """A nonempty set of column indices, stored strictly increasing."""

    items: tuple[int, ...]

    def __post_init__(self):
        if not self.items:
            raise ValueError("itemset must be nonempty")
        if any(b <= a for a, b in zip(self.items, self.items[1:])):
            raise ValueError(f"itemset indices must be strictly increasing: {self.items}")

    @classmethod
    def of(cls, items: Iterable[int]) -> "Itemset":
        return cls(tuple(sorted(set(int(i) for i in items))))

    def __len__(self):
        return len(self.items)

    def __iter__(self):
        return iter(self.items)

    def to_json(self, labels: Sequence[int] | None = None) -> list[int]:
        if labels is None:
            return list(self.items)
        return [int(labels[i]) for i in self.items]

    def __str__(self):
        return "{" + ",".join(map(str, self.items)) + "}"


@dataclass(frozen=True, order=True)
class AssociationRule:
    antecedent: Itemset
    consequent: Itemset

    def __post_init__(self):
        if set(self.antecedent.items) & set(self.consequent.items):
            raise ValueError("antecedent and consequent must be disjoint")

    @property
    def items(self) -> tuple[int, ...]:
        return tuple(sorted(self.antecedent.items + self.consequent.items))

    def to_json(self, labels: Sequence[int] | None = None) -> dict:
        return {
            "antecedent": self.antecedent.to_json(labels),
            "consequent": self.consequent.to_json(labels),
        }

    def __str__(self):
        return f"{self.antecedent}->{self.consequent}"


class BinaryDataset:
    """Sparse 0-1 matrix.

    Parameters
    ----------
    transactions : sequence of iterables of int
        Column indices holding a 1, one entry per row.
    cols : int, optional
        Number of columns.  Defaults to one past the largest index.
    labels : sequence of int, optional
        External item id for each column.  Defaults to the identity.
    """

    def __init__(self, transactions, cols=None, labels=None):
        rows = tuple(tuple(sorted(set(int(c) for c in t))) for t in transactions)
        largest = max((t[-1] for t in rows if t), default=-1)
        if cols is None:
            cols = largest + 1
        if any(t and t[0] < 0 for t in rows):
            raise ValueError("column indices must be non-negative")
        if largest >= cols:
            raise ValueError(f"column index {largest} out of bounds for {cols} columns")
        self.transactions: tuple[tuple[int, ...], ...] = rows
        self.rows = len(rows)
        self.cols = int(cols)
        if labels is None:
            labels = range(self.cols)
        self.labels = tuple(int(x) for x in labels)
        if len(self.labels) != self.cols:
            raise ValueError("labels must have one entry per column")
        self.row_margins = np.fromiter((len(t) for t in rows), dtype=np.int64, count=self.rows)
        self.col_margins = np.zeros(self.cols, dtype=np.int64)
        for t in rows:
            self.col_margins[list(t)] += 1
        self._tidsets = None

    @classmethod
    def from_cells(cls, cells, rows, cols, labels=None) -> "BinaryDataset":
        transactions = [[] for _ in range(rows)]
        for r, c in cells:
            if not (0 <= r < rows and 0 <= c < cols):
                raise ValueError(f"cell ({r}, {c}) out of bounds for shape ({rows}, {cols})")
            transactions[r].append(c)
        return cls(transactions, cols=cols, labels=labels)

    @classmethod
    def from_dense(cls, matrix, labels=None) -> "BinaryDataset":
        matrix = np.asarray(matrix)
        if matrix.ndim != 2:
            raise ValueError("dense matrix must be two-dimensional")
        if not np.isin(matrix, (0, 1)).all():
            raise ValueError("dense matrix must hold only 0 and 1")
        return cls([np.flatnonzero(row).tolist() for row in matrix], cols=matrix.shape[1], labels=labels)

    @property
    def n_cells(self) -> int:
        return int(self.row_margins.sum())

    @property
    def density(self) -> float:
        if self.rows == 0 or self.cols == 0:
            return 0.0
        return self.n_cells / (self.rows * self.cols)

    def cells(self) -> set[tuple[int, int]]:
        return {(r, c) for r, t in enumerate(self.transactions) for c in t}

    def to_dense(self) -> np.ndarray:
        out = np.zeros((self.rows, self.cols), dtype=np.int8)
        for r, t in enumerate(self.transactions):
            out[r, list(t)] = 1
        return out

    def tidsets(self) -> list[int]:
        """Per-column bitsets (Python ints) of the rows holding a 1."""
        if self._tidsets is None:
            bits = [0] * self.cols
            for r, t in enumerate(self.transactions):
                bit = 1 << r
                for c in t:
                    bits[c] |= bit
            self._tidsets = bits
        return self._tidsets

    def support(self, items: Iterable[int]) -> int:
        """Number of rows containing every item."""
        tid = (1 << self.rows) - 1
        for c in items:
            tid &= self.tidsets()[c]
        return tid.bit_count()

    def with_transactions(self, transactions) -> "BinaryDataset":
        """A dataset of the same shape and labels with new row contents."""
        return BinaryDataset(transactions, cols=self.cols, labels=self.labels)

    def __eq__(self, other):
        if not isinstance(other, BinaryDataset):
            return NotImplemented
        return (self.cols, self.transactions, self.labels) == (other.cols, other.transactions, other.labels)

    def __hash__(self):
        return hash((self.cols, self.transactions))

    def __repr__(self):
        return f"BinaryDataset(rows={self.rows}, cols={self.cols}, cells={self.n_cells})"


def _read_text(path) -> str:
    text = Path(path).read_text()
    if not text.strip():
        raise DataFormatError(f"{path}: empty file")
    return text


def load_transactions(path, format: str = "item-list") -> BinaryDataset:
    """Read a dataset from an item-list (FIMI) or dense-csv file.

    Item-list files hold one transaction per line as whitespace-separated
    non-negative integer item ids.  Ids are relabelled to dense column indices
    in increasing id order.  Blank lines are empty transactions, except that
    trailing blank lines are ignored.
    """
    text = _read_text(path)
    if format == "item-list":
        lines = text.splitlines()
        while lines and not lines[-1].strip():
            lines.pop()
        raw = []
        for lineno, line in enumerate(lines, start=1):
            try:
                ids = [int(tok) for tok in line.split()]
            except ValueError:
                raise DataFormatError(f"{path}:{lineno}: non-integer item id in {line!r}") from None
            if any(i < 0 for i in ids):
                raise DataFormatError(f"{path}:{lineno}: negative item id")
            raw.append(ids)
        labels = sorted({i for ids in raw for i in ids})
        index = {label: j for j, label in enumerate(labels)}
        return BinaryDataset([[index[i] for i in ids] for ids in raw], cols=len(labels), labels=labels)
    if format == "dense-csv":
        rows = []
        width = None
        for lineno, row in enumerate(csv.reader(io.StringIO(text)), start=1):
            if not row or not "".join(row).strip():
                continue
            try:
                values = [int(v) for v in row]
            except ValueError:
                raise DataFormatError(f"{path}:{lineno}: non-binary value in {row!r}") from None
            if any(v not in (0, 1) for v in values):
                raise DataFormatError(f"{path}:{lineno}: non-binary value in {row!r}")
            if width is None:
                width = len(values)
            elif len(values) != width:
                raise DataFormatError(f"{path}:{lineno}: expected {width} columns, got {len(values)}")
            rows.append(values)
        return BinaryDataset.from_dense(np.array(rows, dtype=np.int8).reshape(len(rows), width))
    raise ValueError(f"unknown format {format!r}")


def write_transactions(d: BinaryDataset, path, use_labels: bool = True) -> None:
    """Write ``d`` in item-list format (LF endings, single spaces)."""
    with open(path, "w", newline="\n") as fh:
        for t in d.transactions:
            ids = (d.labels[c] for c in t) if use_labels else t
            fh.write(" ".join(map(str, ids)) + "\n")


@dataclass
class Graph:
    """A simple undirected graph with node and edge labels."""

    gid: str
    node_labels: dict[int, str]
    edges: list[tuple[int, int]]
    edge_labels: list[str] = field(default_factory=list)

    def __post_init__(self):
        if not self.edge_labels:
            self.edge_labels = [""] * len(self.edges)
        seen = set()
        for u, v in self.edges:
            if u == v:
                raise ValueError(f"graph {self.gid}: self-loop on node {u}")
            if u not in self.node_labels or v not in self.node_labels:
                raise ValueError(f"graph {self.gid}: edge ({u}, {v}) references an undeclared node")
            key = (min(u, v), max(u, v))
            if key in seen:
                raise ValueError(f"graph {self.gid}: duplicate edge ({u}, {v})")
            seen.add(key)

    @property
    def n_nodes(self) -> int:
        return len(self.node_labels)

    def degrees(self) -> dict[int, int]:
        deg = dict.fromkeys(self.node_labels, 0)
        for u, v in self.edges:
            deg[u] += 1
            deg[v] += 1
        return deg

    def degree_sequence(self) -> list[int]:
        """Degrees in node-id order."""
        deg = self.degrees()
        return [deg[v] for v in sorted(deg)]

    def edge_set(self) -> set[frozenset]:
        return {frozenset(e) for e in self.edges}


@dataclass
class GraphTransactionSet:
    graphs: list[Graph]

    def __len__(self):
        return len(self.graphs)

    def degree_sequences(self) -> list[list[int]]:
        return [g.degree_sequence() for g in self.graphs]


def parse_graphs(text: str, source: str = "<string>") -> GraphTransactionSet:
    graphs = []
    current = None

    def close():
        if current is not None:
            gid, nodes, edges, elabels, lineno = current
            try:
                graphs.append(Graph(gid, nodes, edges, elabels))
            except ValueError as exc:
                raise DataFormatError(f"{source}:{lineno}: {exc}") from None

    for lineno, line in enumerate(text.splitlines(), start=1):
        tok = line.split()
        if not tok or tok[0].startswith("#"):
            continue
        try:
            if tok[0] == "t":
                close()
                gid = tok[-1] if len(tok) > 1 else str(len(graphs))
                current = (gid, {}, [], [], lineno)
            elif current is None:
                raise DataFormatError(f"{source}:{lineno}: record before first 't' line")
            elif tok[0] == "v":
                node = int(tok[1])
                if node in current[1]:
                    raise DataFormatError(f"{source}:{lineno}: duplicate node {node}")
                current[1][node] = tok[2] if len(tok) > 2 else ""
            elif tok[0] == "e":
                u, v = int(tok[1]), int(tok[2])
                if u == v:
                    raise DataFormatError(f"{source}:{lineno}: self-loop on node {u}")
                for w in (u, v):
                    if w not in current[1]:
                        raise DataFormatError(f"{source}:{lineno}: dangling node reference {w}")
                current[2].append((u, v))
                current[3].append(tok[3] if len(tok) > 3 else "")
            else:
                raise DataFormatError(f"{source}:{lineno}: unknown record type {tok[0]!r}")
        except (IndexError, ValueError) as exc:
            if isinstance(exc, DataFormatError):
                raise
            raise DataFormatError(f"{source}:{lineno}: malformed line {line!r}") from None
    close()
    if not graphs:
        raise DataFormatError(f"{source}: empty file")
    return GraphTransactionSet(graphs)


def load_graphs(path) -> GraphTransactionSet:
    """Read graph transactions (``t``/``v``/``e`` line blocks)."""
    return parse_graphs(_read_text(path), str(path))


def format_graphs(gs: GraphTransactionSet) -> str:
    out = []
    for g in gs.graphs:
        out.append(f"t # {g.gid}")
        out.extend(f"v {v} {g.node_labels[v]}".rstrip() for v in sorted(g.node_labels))
        out.extend(f"e {u} {v} {lab}".rstrip() for (u, v), lab in zip(g.edges, g.edge_labels))
    return "\n".join(out) + "\n"


def write_graphs(gs: GraphTransactionSet, path) -> None:
    Path(path).write_text(format_graphs(gs))
