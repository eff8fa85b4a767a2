"""Significance testing of mined patterns with randomized null datasets."""

__version__ = "0.1.0"

from .dataset import (  # noqa: E402
    AssociationRule,
    BinaryDataset,
    DataFormatError,
    Graph,
    GraphTransactionSet,
    Itemset,
    load_graphs,
    load_transactions,
    write_transactions,
)
from .miners import MinerSpec, PatternOutput, mine_itemsets, mine_rules, run_miner  # noqa: E402
from .pipeline import build_ensemble, test_patterns  # noqa: E402
from .randomizers import (  # noqa: E402
    RandomizerSpec,
    randomize_col,
    randomize_graph,
    randomize_swap,
    sample_ensemble,
)
from .significance import (  # noqa: E402
    NullEnsemble,
    SignificanceReport,
    adjust_bonferroni,
    adjust_holm,
    assess,
    h_fraction,
    holm,
    p_pool,
    p_sample,
    significant,
)
from .statistics import StatisticSpec, stat_fisher, stat_frequency, stat_graph, stat_lift  # noqa: E402
