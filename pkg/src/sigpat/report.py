"""Run manifests and the JSON layout of significance reports."""

from __future__ import annotations

import hashlib
from datetime import datetime, timezone
from pathlib import Path

from . import __version__

_PVALUE = {"type": ["number", "null"], "minimum": 0, "maximum": 1}

REPORT_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "required": ["manifest", "conventions", "alpha", "n", "methods", "n_patterns", "n_significant", "records", "significant"],
    "properties": {
        "manifest": {
            "type": "object",
            "required": ["tool", "version", "dataset", "randomizer", "miner", "statistic", "n", "alpha", "seed", "started", "finished"],
            "properties": {
                "dataset": {
                    "type": "object",
                    "required": ["path", "sha256"],
                    "properties": {"path": {"type": "string"}, "sha256": {"type": "string", "pattern": "^[0-9a-f]{64}$"}},
                },
                "n": {"type": "integer", "minimum": 1},
                "seed": {"type": "integer"},
            },
        },
        "conventions": {"type": "object"},
        "alpha": {"type": "number", "exclusiveMinimum": 0, "exclusiveMaximum": 1},
        "n": {"type": "integer", "minimum": 1},
        "methods": {"type": "array", "items": {"enum": ["sample", "pool"]}, "minItems": 1},
        "n_patterns": {"type": "integer", "minimum": 0},
        "n_significant": {"type": "object", "additionalProperties": {"type": "integer", "minimum": 0}},
        "records": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["pattern", "statistic"],
                "properties": {
                    "statistic": {"type": "number"},
                    "p_sample": _PVALUE,
                    "p_pool": _PVALUE,
                    "holm_sample": _PVALUE,
                    "holm_pool": _PVALUE,
                    "bonferroni_sample": _PVALUE,
                    "bonferroni_pool": _PVALUE,
                    "significant_sample": {"type": ["boolean", "null"]},
                    "significant_pool": {"type": ["boolean", "null"]},
                },
            },
        },
        "significant": {"type": "array"},
    },
}


def file_sha256(path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for block in iter(lambda: fh.read(1 << 20), b""):
            h.update(block)
    return h.hexdigest()


def now() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="seconds")


def manifest(dataset_path, randomizer, miner, statistic, n, alpha, seed, started, **extra) -> dict:
    """Everything needed to rerun a report; ``finished`` is filled by the caller."""
    m = {
        "tool": "sigpat",
        "version": __version__,
        "dataset": {"path": str(dataset_path), "sha256": file_sha256(dataset_path) if dataset_path and Path(dataset_path).is_file() else "0" * 64},
        "randomizer": randomizer,
        "miner": miner,
        "statistic": statistic,
        "n": n,
        "alpha": alpha,
        "seed": seed,
        "started": started,
        "finished": None,
    }
    m.update(extra)
    return m


# Modelling choices the reader of a report should know about.
CONVENTIONS = {
    "rules": "single-item consequents; no confidence threshold",
    "fisher": "statistic = -ln(one-sided Fisher p, over-representation of joint presence)",
    "swap_attempts_default": "4 x number of ones in the matrix",
    "ties": "f(x) <= f(y) counts as at least as extreme; the original output is part of the ensemble",
    "empty_outputs": "contribute h = 0 (sample) and nothing to the pool (pool)",
}
