"""End-to-end significance testing of mined patterns on a binary dataset."""

from __future__ import annotations

from ._parallel import parallel_map
from .miners import MinerSpec, PatternOutput, run_miner
from .randomizers import RandomizerSpec, randomize
from .significance import NullEnsemble, assess, significant
from .statistics import StatisticSpec


def _mine_member(args):
    d, randomizer, miner, stat, i = args
    return run_miner(randomize(d, randomizer, i), miner, stat, source=i)


def null_outputs(d, randomizer: RandomizerSpec, miner: MinerSpec, stat: StatisticSpec,
                 n: int, start: int = 0, threads=None) -> list[PatternOutput]:
    """Mine ensemble members ``start .. start+n-1`` of ``d``."""
    if n < 1:
        raise ValueError("n must be >= 1")
    jobs = [(d, randomizer, miner, stat, i) for i in range(start, start + n)]
    return parallel_map(_mine_member, jobs, threads)


def build_ensemble(d, randomizer, miner, stat, n, threads=None) -> NullEnsemble:
    original = run_miner(d, miner, stat, source=n)
    return NullEnsemble(original, null_outputs(d, randomizer, miner, stat, n, threads=threads))


def test_patterns(d, randomizer, miner, stat, n, alpha=0.05, methods=("sample", "pool"), threads=None, metadata=None):
    """Mine ``d``, build the null ensemble and return the flagged report."""
    ens = build_ensemble(d, randomizer, miner, stat, n, threads)
    return significant(assess(ens, methods, metadata), alpha), ens


test_patterns.__test__ = False
