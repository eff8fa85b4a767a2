"""Controlled experiments on equicorrelated Gaussian vectors.

A dataset is one vector of length ``k``; its values are directly the test
statistics of the coordinates.  Three toy miners pick coordinates:

* ``ge1``: every value >= 1 (output size varies, may be empty),
* ``max10``: the ten largest values,
* ``rnd10``: ten coordinates chosen uniformly at random.

Null datasets have mean 0; the original may carry ``alt_mean`` on its last
``k - m0`` coordinates, which makes those coordinates false null hypotheses.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ._parallel import parallel_map
from .minp import MinPCurve, curves_from_outputs
from .miners import PatternOutput
from .significance import StatisticPool, holm

ALGORITHMS = ("ge1", "max10", "rnd10")
DEFAULT_ALPHAS = np.arange(101) / 100


@dataclass(frozen=True)
class GaussianConfig:
    k: int = 100
    sigma: float = 0.0
    m0: int | None = None
    alt_mean: float = 4.0
    runs: int = 1000
    n_null: int = 1000
    seed: int = 0

    def __post_init__(self):
        if self.k < 2:
            raise ValueError("k must be >= 2")
        if self.m0 is None:
            object.__setattr__(self, "m0", self.k)
        if not (-1.0 / (self.k - 1) <= self.sigma <= 1.0):
            raise ValueError(
                f"sigma={self.sigma} outside [-1/(k-1), 1]: covariance not positive semi-definite"
            )
        if not (0 <= self.m0 <= self.k):
            raise ValueError("m0 must lie in [0, k]")
        if self.runs < 1 or self.n_null < 1:
            raise ValueError("runs and n_null must be >= 1")

    @property
    def m1(self) -> int:
        return self.k - self.m0

    def mean(self) -> np.ndarray:
        mu = np.zeros(self.k)
        mu[self.m0:] = self.alt_mean
        return mu


def _run_streams(seed: int, run: int):
    ss = np.random.SeedSequence(seed, spawn_key=(run,))
    data_ss, select_ss = ss.spawn(2)
    return np.random.default_rng(data_ss), np.random.default_rng(select_ss)


def draw_equicorrelated(k: int, sigma: float, rng, size: int = 1) -> np.ndarray:
    """``size`` zero-mean rows with unit variances and pairwise correlation ``sigma``."""
    z = rng.standard_normal((size, k))
    if sigma >= 0:
        z0 = rng.standard_normal((size, 1))
        return math.sqrt(sigma) * z0 + math.sqrt(1.0 - sigma) * z
    # x = a z + b (sum z) 1 has covariance a^2 I + (2ab + k b^2) 11^T.
    a = math.sqrt(1.0 - sigma)
    b = (math.sqrt(max(1.0 + (k - 1) * sigma, 0.0)) - a) / k
    return a * z + b * z.sum(axis=1, keepdims=True)


def sample_gaussian(cfg: GaussianConfig, run_index: int) -> np.ndarray:
    """The original vector of run ``run_index`` (alternative means included)."""
    rng, _ = _run_streams(cfg.seed, run_index)
    return draw_equicorrelated(cfg.k, cfg.sigma, rng)[0] + cfg.mean()


def alg_ge1(v) -> PatternOutput:
    v = np.asarray(v, dtype=float)
    idx = np.flatnonzero(v >= 1.0)
    return PatternOutput(idx.tolist(), v[idx])


def alg_max10(v) -> PatternOutput:
    v = np.asarray(v, dtype=float)
    if len(v) < 10:
        raise ValueError("max10 needs at least 10 values")
    idx = np.argsort(-v, kind="stable")[:10]
    return PatternOutput(idx.tolist(), v[idx])


def alg_rnd10(v, seed=None) -> PatternOutput:
    v = np.asarray(v, dtype=float)
    if len(v) < 10:
        raise ValueError("rnd10 needs at least 10 values")
    rng = np.random.default_rng(seed)
    idx = rng.choice(len(v), size=10, replace=False)
    return PatternOutput(idx.tolist(), v[idx])


def run_algorithm(name: str, v, rng=None) -> PatternOutput:
    if name == "ge1":
        return alg_ge1(v)
    if name == "max10":
        return alg_max10(v)
    if name == "rnd10":
        return alg_rnd10(v, rng)
    raise ValueError(f"unknown algorithm {name!r}; choose from {ALGORITHMS}")


def null_statistics(name: str, matrix: np.ndarray, rng) -> list[np.ndarray]:
    """Statistics output by ``name`` on each row of ``matrix``."""
    if name == "ge1":
        return [row[row >= 1.0] for row in matrix]
    if name == "max10":
        return list(-np.sort(-matrix, axis=1)[:, :10])
    if name == "rnd10":
        keys = rng.random(matrix.shape)
        idx = np.argpartition(keys, 10, axis=1)[:, :10]
        return list(np.take_along_axis(matrix, idx, axis=1))
    raise ValueError(f"unknown algorithm {name!r}; choose from {ALGORITHMS}")


def run_once(cfg: GaussianConfig, algorithm: str, run_index: int, methods=("sample", "pool")):
    """One run: mine the original, build the null pool and return p-values.

    Returns ``(output, {method: p-values in output order})``.
    """
    rng, select = _run_streams(cfg.seed, run_index)
    original = draw_equicorrelated(cfg.k, cfg.sigma, rng)[0] + cfg.mean()
    out = run_algorithm(algorithm, original, select)
    null = draw_equicorrelated(cfg.k, cfg.sigma, rng, cfg.n_null)
    pool = StatisticPool(null_statistics(algorithm, null, select) + [out.statistics])
    return out, {m: pool.p_values(out.statistics, m) for m in methods}


@dataclass
class ExperimentTally:
    """Per-run, per-alpha counts of hypothesis outcomes.

    ``V``/``S`` are false/true rejections, ``U``/``T`` true/false acceptances
    and ``R = V + S``.  Coordinates that the miner did not output count as
    not declared significant.  Arrays have shape ``(runs, len(alphas))``.
    """

    alphas: np.ndarray
    m0: int
    m1: int
    V: np.ndarray
    S: np.ndarray

    @property
    def U(self):
        return self.m0 - self.V

    @property
    def T(self):
        return self.m1 - self.S

    @property
    def R(self):
        return self.V + self.S

    def fwer(self) -> np.ndarray:
        return (self.V > 0).mean(axis=0)

    def tpr(self) -> np.ndarray:
        return self.S.mean(axis=0) / self.m1 if self.m1 else np.full(len(self.alphas), np.nan)

    def fpr(self) -> np.ndarray:
        return self.V.mean(axis=0) / self.m0 if self.m0 else np.full(len(self.alphas), np.nan)

    def mean_type2_fraction(self) -> np.ndarray:
        return self.T.mean(axis=0) / self.m1 if self.m1 else np.full(len(self.alphas), np.nan)


@dataclass
class RocCurve:
    alphas: np.ndarray
    fpr: np.ndarray
    tpr: np.ndarray
    auc: float = field(init=False)

    def __post_init__(self):
        # Closed with (0, 0) and (1, 1): rejecting nothing / everything.
        x = np.concatenate(([0.0], self.fpr, [1.0]))
        y = np.concatenate(([0.0], self.tpr, [1.0]))
        order = np.argsort(x, kind="stable")
        x, y = x[order], y[order]
        self.auc = float(np.sum(np.diff(x) * (y[1:] + y[:-1]) / 2.0))


@dataclass
class ExperimentResult:
    config: GaussianConfig
    algorithm: str
    alphas: np.ndarray
    tallies: dict[str, ExperimentTally]
    min_adjusted: dict[str, np.ndarray]
    output_sizes: np.ndarray

    def fwer(self, method: str) -> np.ndarray:
        return self.tallies[method].fwer()

    def roc(self, method: str) -> RocCurve:
        t = self.tallies[method]
        return RocCurve(self.alphas, t.fpr(), t.tpr())


def _run_chunk(args):
    cfg, algorithm, methods, alphas, runs = args
    V = {m: np.zeros((len(runs), len(alphas)), dtype=np.int64) for m in methods}
    S = {m: np.zeros((len(runs), len(alphas)), dtype=np.int64) for m in methods}
    min_adj = {m: np.full(len(runs), np.inf) for m in methods}
    sizes = np.zeros(len(runs), dtype=np.int64)
    for row, run in enumerate(runs):
        out, pvals = run_once(cfg, algorithm, run, methods)
        sizes[row] = len(out)
        if not len(out):
            continue
        is_null = np.asarray(out.patterns) < cfg.m0
        for m in methods:
            adj = holm(pvals[m])
            null_adj = np.sort(adj[is_null])
            alt_adj = np.sort(adj[~is_null])
            V[m][row] = np.searchsorted(null_adj, alphas, side="right")
            S[m][row] = np.searchsorted(alt_adj, alphas, side="right")
            if len(null_adj):
                min_adj[m][row] = null_adj[0]
    return V, S, min_adj, sizes


def run_experiment(cfg: GaussianConfig, algorithm: str, methods=("sample", "pool"), alphas=None, threads=None) -> ExperimentResult:
    if algorithm not in ALGORITHMS:
        raise ValueError(f"unknown algorithm {algorithm!r}; choose from {ALGORITHMS}")
    alphas = DEFAULT_ALPHAS if alphas is None else np.asarray(alphas, dtype=float)
    methods = tuple(methods)
    chunks = [list(c) for c in np.array_split(np.arange(cfg.runs), min(cfg.runs, 16)) if len(c)]
    parts = parallel_map(_run_chunk, [(cfg, algorithm, methods, alphas, c) for c in chunks], threads)
    tallies = {
        m: ExperimentTally(alphas, cfg.m0, cfg.m1,
                           np.concatenate([p[0][m] for p in parts]),
                           np.concatenate([p[1][m] for p in parts]))
        for m in methods
    }
    min_adj = {m: np.concatenate([p[2][m] for p in parts]) for m in methods}
    sizes = np.concatenate([p[3] for p in parts])
    return ExperimentResult(cfg, algorithm, alphas, tallies, min_adj, sizes)


def fwer_experiment(cfg: GaussianConfig, algorithm: str, p_method: str = "sample", alphas=None, threads=None) -> np.ndarray:
    """Empirical ``Pr(V > 0)`` at each alpha."""
    return run_experiment(cfg, algorithm, (p_method,), alphas, threads).fwer(p_method)


def power_experiment(cfg: GaussianConfig, algorithm: str = "ge1", alphas=None, threads=None):
    """ROC curves of both p-value methods plus the raw tallies."""
    if cfg.m0 >= cfg.k:
        raise ValueError("power experiment needs m0 < k")
    res = run_experiment(cfg, algorithm, ("sample", "pool"), alphas, threads)
    return {m: res.roc(m) for m in ("sample", "pool")}, res.tallies


def minp_test_synthetic(cfg: GaussianConfig, algorithm: str, n_total: int, methods=("sample", "pool")) -> dict[str, MinPCurve]:
    """Split-half minP check with Gaussian null vectors in place of randomized data."""
    if n_total < 2 or n_total % 2:
        raise ValueError("n_total must be even and >= 2")
    rng, select = _run_streams(cfg.seed, 0)
    null = draw_equicorrelated(cfg.k, cfg.sigma, rng, n_total)
    stats = null_statistics(algorithm, null, select)
    half = n_total // 2
    return curves_from_outputs(stats[:half], stats[half:], methods)
