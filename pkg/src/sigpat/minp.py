"""Empirical check of the minP-property.

For a dataset ``D_i`` drawn under the null, ``p_hat_i = |A(D_i)| * min_x p(x)``.
The property asks ``#{i : p_hat_i <= t} / n <= t`` for every ``t`` in [0, 1].

The check follows a split-half protocol: the first half of the randomized
datasets supply one ``p_hat`` each; the smallest p-value of a dataset belongs
to its largest statistic, which is tested against the second half (plus the
dataset itself, as in the usual p-value definition).
"""

from __future__ import annotations

import csv
import dataclasses
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Callable, Sequence

import numpy as np

from .pipeline import null_outputs
from .significance import StatisticPool

GRID_POINTS = 1000
ADVERSARIAL_EXACT = Fraction(29, 45)


def default_grid() -> np.ndarray:
    return np.linspace(0.0, 1.0, GRID_POINTS)


@dataclass
class MinPCurve:
    p_hats: np.ndarray
    n: int
    grid: np.ndarray
    fraction: np.ndarray
    n_empty: int = 0
    method: str = "sample"

    @property
    def exceedance(self) -> np.ndarray:
        return self.fraction - self.grid

    @property
    def max_exceedance(self) -> float:
        return float(self.exceedance.max()) if len(self.grid) else 0.0

    @property
    def tolerance(self) -> np.ndarray:
        """Two binomial standard errors at each grid point."""
        return 2.0 * np.sqrt(self.grid * (1.0 - self.grid) / max(self.n, 1))

    @property
    def worst_margin(self) -> float:
        """Largest ``exceedance - tolerance``; the curve passes when it is <= 0."""
        if not len(self.grid):
            return 0.0
        return float((self.exceedance - self.tolerance).max())

    @property
    def passes(self) -> bool:
        return self.worst_margin <= 1e-12


def curve_from_p_hats(p_hats, n: int | None = None, grid=None, n_empty: int = 0, method: str = "sample") -> MinPCurve:
    """Empirical fraction ``#{p_hat <= t} / n`` on ``grid``.

    ``n`` counts every first-half dataset, including empty outputs that
    contributed no ``p_hat``.
    """
    p_hats = np.sort(np.asarray(p_hats, dtype=float))
    if n is None:
        n = len(p_hats) + n_empty
    grid = default_grid() if grid is None else np.asarray(grid, dtype=float)
    fraction = np.searchsorted(p_hats, grid, side="right") / max(n, 1)
    return MinPCurve(p_hats, n, grid, fraction, n_empty, method)


def p_hats_split_half(first: Sequence[np.ndarray], second: Sequence[np.ndarray], method: str = "sample"):
    """``p_hat`` for each nonempty output in ``first`` against ``second``.

    Returns ``(p_hats, n_empty)``.
    """
    ref = StatisticPool(second)
    sizes, tops, ties = [], [], []
    n_empty = 0
    for s in first:
        s = np.asarray(s, dtype=float)
        if not len(s):
            n_empty += 1
            continue
        top = s.max()
        sizes.append(len(s))
        tops.append(top)
        ties.append(int(np.count_nonzero(s == top)))
    sizes = np.array(sizes, dtype=float)
    ties = np.array(ties, dtype=float)
    counts = ref.counts(tops)
    if method == "sample":
        if len(ref.groups) == 1 and np.all(sizes == ref.sizes[0]):
            # Constant output size: one exact integer ratio, as for pool.
            p = (counts[0] + ties) / (sizes * (ref.n_outputs + 1))
        else:
            h = (counts / ref.sizes[:, None]).sum(axis=0) if len(ref.groups) else np.zeros(len(tops))
            p = (h + ties / sizes) / (ref.n_outputs + 1)
    elif method == "pool":
        p = (counts.sum(axis=0) + ties) / (ref.total_patterns + sizes)
    else:
        raise ValueError(f"unknown p-value method {method!r}")
    return sizes * p, n_empty


def minp_curves(draw: Callable[[int], np.ndarray], n_total: int, methods=("sample", "pool"), grid=None) -> dict[str, MinPCurve]:
    """Run the split-half check with ``draw(i)`` giving the statistics of null output ``i``."""
    if n_total < 2 or n_total % 2:
        raise ValueError("n_total must be even and >= 2")
    half = n_total // 2
    first = [draw(i) for i in range(half)]
    second = [draw(i) for i in range(half, n_total)]
    return curves_from_outputs(first, second, methods, grid)


def curves_from_outputs(first, second, methods=("sample", "pool"), grid=None) -> dict[str, MinPCurve]:
    curves = {}
    for method in methods:
        p_hats, n_empty = p_hats_split_half(first, second, method)
        curves[method] = curve_from_p_hats(p_hats, len(first), grid, n_empty, method)
    return curves


def minp_test(d, randomizer, miner, stat, n_total: int, seed=None, method: str = "sample", threads=None) -> MinPCurve:
    """Split-half minP check for a binary-data pipeline."""
    return minp_test_all(d, randomizer, miner, stat, n_total, seed, (method,), threads)[method]


def minp_test_all(d, randomizer, miner, stat, n_total, seed=None, methods=("sample", "pool"), threads=None):
    if n_total < 2 or n_total % 2:
        raise ValueError("n_total must be even and >= 2")
    if seed is not None:
        randomizer = dataclasses.replace(randomizer, seed=seed)
    outs = null_outputs(d, randomizer, miner, stat, n_total, threads=threads)
    stats = [o.statistics for o in outs]
    half = n_total // 2
    return curves_from_outputs(stats[:half], stats[half:], methods)


def adversarial_simulation(runs: int, seed=None, threshold: float = 0.6) -> float:
    """Monte Carlo estimate of ``Pr(m * min p <= threshold)`` for the adversarial miner.

    With probability 4/5 the miner outputs one pattern with p ~ U(0.1, 1);
    otherwise two patterns with p ~ U(0, 0.1) and p ~ U(0.1, 1).
    """
    if runs < 1:
        raise ValueError("runs must be >= 1")
    rng = np.random.default_rng(seed)
    two = rng.random(runs) < 0.2
    p_high = rng.uniform(0.1, 1.0, runs)
    p_low = rng.uniform(0.0, 0.1, runs)
    m = np.where(two, 2, 1)
    p_min = np.where(two, np.minimum(p_low, p_high), p_high)
    return float(np.mean(m * p_min <= threshold))


def adversarial_exact(threshold: float = 0.6) -> float:
    """Closed form of the probability estimated by :func:`adversarial_simulation`."""
    t = float(threshold)
    one = min(max((t - 0.1) / 0.9, 0.0), 1.0)
    two = min(max(t / 0.2, 0.0), 1.0)
    return 0.8 * one + 0.2 * two


def curve_export(c: MinPCurve, path) -> None:
    """Write ``t,empirical_fraction,diagonal`` rows.

    Floats are written with ``repr`` so that reading them back is exact.
    """
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["t", "empirical_fraction", "diagonal"])
        for t, f in zip(c.grid, c.fraction):
            w.writerow([repr(float(t)), repr(float(f)), repr(float(t))])


def curve_load(path) -> tuple[np.ndarray, np.ndarray]:
    """Inverse of :func:`curve_export`: returns ``(grid, fraction)``."""
    with open(Path(path), newline="") as fh:
        rows = list(csv.DictReader(fh))
    grid = np.array([float(r["t"]) for r in rows])
    fraction = np.array([float(r["empirical_fraction"]) for r in rows])
    return grid, fraction
