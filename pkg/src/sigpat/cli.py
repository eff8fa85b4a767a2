"""Command line interface: ``sigpat <subcommand> ...``."""

from __future__ import annotations

import argparse
import csv
import json
import logging
import sys
from pathlib import Path

import numpy as np

from . import __version__
from ._parallel import resolve_threads
from .dataset import DataFormatError, load_graphs, load_transactions, write_graphs, write_transactions
from .miners import MinerSpec, dump_output, load_external, run_miner
from .minp import ADVERSARIAL_EXACT, adversarial_simulation, curve_export, minp_test_all
from .pipeline import build_ensemble
from .randomizers import RandomizerSpec, default_swap_attempts, sample_ensemble
from .report import CONVENTIONS, manifest, now
from .significance import NullEnsemble, assess, significant
from .statistics import STATISTICS, StatisticSpec
from .synthetic import ALGORITHMS, GaussianConfig, run_experiment

log = logging.getLogger("sigpat")


def _common(seed_default=0):
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--seed", type=int, default=argparse.SUPPRESS, help=f"random seed (default {seed_default})")
    p.add_argument("--threads", type=int, default=argparse.SUPPRESS, help="worker processes (env SIGPAT_THREADS)")
    return p


def _pipeline_args(p, need_data=True):
    p.add_argument("--in", dest="input", required=need_data, help="input dataset")
    p.add_argument("--format", choices=["item-list", "dense-csv"], default="item-list")
    p.add_argument("--miner", choices=["itemsets", "rules"], default="itemsets")
    p.add_argument("--min-support", type=int, default=None, help="absolute support threshold")
    p.add_argument("--min-size", type=int, default=2)
    p.add_argument("--stat", choices=STATISTICS, default=None)


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(prog="sigpat", description=__doc__, parents=[_common()])
    parser.add_argument("--version", action="version", version=f"sigpat {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("randomize", parents=[common], help="write randomized copies of a dataset")
    p.add_argument("--method", choices=["col", "swap", "graph"], required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--attempts", type=int, default=None)
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--format", choices=["item-list", "dense-csv"], default="item-list")
    p.add_argument("--out-dir", required=True)

    p = sub.add_parser("mine", parents=[common], help="mine patterns and their statistics")
    _pipeline_args(p)
    p.add_argument("--out", required=True)

    p = sub.add_parser("test", parents=[common], help="significance test of mined patterns")
    _pipeline_args(p, need_data=False)
    p.add_argument("--external", help="JSON with externally mined original and randomized outputs")
    p.add_argument("--randomizer", choices=["col", "swap", "graph"], default="col")
    p.add_argument("--attempts", type=int, default=None)
    p.add_argument("--n", type=int, default=1000)
    p.add_argument("--alpha", type=float, default=0.05)
    p.add_argument("--method", choices=["sample", "pool", "both"], default="both")
    p.add_argument("--out", required=True)

    p = sub.add_parser("minp-check", parents=[common], help="split-half minP-property check")
    _pipeline_args(p)
    p.add_argument("--randomizer", choices=["col", "swap"], default="col")
    p.add_argument("--attempts", type=int, default=None)
    p.add_argument("--n", type=int, default=1000, help="total randomizations (even)")
    p.add_argument("--method", choices=["sample", "pool", "both"], default="both")
    p.add_argument("--out", required=True)

    p = sub.add_parser("synth", parents=[common], help="Gaussian FWER and power experiments")
    p.add_argument("--alg", choices=ALGORITHMS, required=True)
    p.add_argument("--sigma", type=float, default=0.0)
    p.add_argument("--k", type=int, default=100)
    p.add_argument("--m0", type=int, default=None)
    p.add_argument("--alt-mean", type=float, default=4.0)
    p.add_argument("--runs", type=int, default=1000)
    p.add_argument("--n", type=int, default=1000)
    p.add_argument("--method", choices=["sample", "pool", "both"], default="both")
    p.add_argument("--out", required=True)

    p = sub.add_parser("adversarial", parents=[common], help="simulate the adversarial minP counterexample")
    p.add_argument("--runs", type=int, default=100_000)
    p.add_argument("--threshold", type=float, default=0.6)
    return parser


def _methods(choice):
    return ("sample", "pool") if choice == "both" else (choice,)


def _specs(args, parser):
    if args.min_support is None:
        parser.error("--min-support is required")
    stat = args.stat or ("lift" if args.miner == "itemsets" else "fisher")
    try:
        miner = MinerSpec(args.miner, args.min_support, args.min_size)
        stat_spec = StatisticSpec(stat)
    except ValueError as exc:
        parser.error(str(exc))
    if miner.pattern_kind != stat_spec.pattern_kind:
        parser.error(f"--stat {stat} does not apply to --miner {args.miner}")
    return miner, stat_spec


def _randomizer(args, kind):
    return RandomizerSpec(kind, args.seed, args.attempts)


def cmd_randomize(args, parser):
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    spec = _randomizer(args, args.method)
    if args.n < 1:
        parser.error("--n must be >= 1")
    if args.method == "graph":
        data = load_graphs(args.input)
        for i, g in enumerate(sample_ensemble(data, spec, args.n, args.threads)):
            write_graphs(g, out_dir / f"random_{i:05d}.graph")
    else:
        data = load_transactions(args.input, args.format)
        for i, d in enumerate(sample_ensemble(data, spec, args.n, args.threads)):
            write_transactions(d, out_dir / f"random_{i:05d}.dat")
    print(f"wrote {args.n} randomized datasets to {out_dir}")
    return 0


def cmd_mine(args, parser):
    miner, stat = _specs(args, parser)
    d = load_transactions(args.input, args.format)
    out = run_miner(d, miner, stat)
    doc = {
        "manifest": manifest(args.input, None, miner.__dict__, stat.kind, None, None, args.seed, now()),
        "patterns": dump_output(out, d.labels),
    }
    doc["manifest"]["finished"] = now()
    Path(args.out).write_text(json.dumps(doc, indent=1) + "\n")
    print(f"{len(out)} patterns written to {args.out}")
    return 0


def _encode_pattern(labels):
    def enc(x):
        return x.to_json(labels) if hasattr(x, "to_json") else x
    return enc


def cmd_test(args, parser):
    methods = _methods(args.method)
    if not (0 < args.alpha < 1):
        parser.error("--alpha must lie in (0, 1)")
    started = now()
    labels = None
    if args.external:
        original, null = load_external(args.external)
        ens = NullEnsemble(original, null)
        man = manifest(args.external, {"kind": "external"}, {"kind": "external"}, "external", max(ens.n, 1), args.alpha, args.seed, started)
    else:
        if not args.input:
            parser.error("the following arguments are required: --in (or --external)")
        if args.randomizer == "graph":
            parser.error("--randomizer graph needs externally mined patterns (--external)")
        if args.n < 1:
            parser.error("--n must be >= 1")
        miner, stat = _specs(args, parser)
        d = load_transactions(args.input, args.format)
        labels = d.labels
        rand = _randomizer(args, args.randomizer)
        ens = build_ensemble(d, rand, miner, stat, args.n, args.threads)
        rand_doc = rand.to_dict()
        if rand.kind == "swap" and rand.attempts is None:
            rand_doc["attempts"] = default_swap_attempts(d)
        man = manifest(args.input, rand_doc, miner.__dict__, stat.kind, args.n, args.alpha, args.seed, started,
                       format=args.format, labels=list(labels))
    report = significant(assess(ens, methods), args.alpha)
    enc = _encode_pattern(labels)
    doc = {"manifest": man, "conventions": CONVENTIONS}
    doc.update(report.to_json(enc))
    doc["significant"] = [
        {"pattern": enc(r.pattern), "statistic": r.statistic, f"holm_{methods[0]}": getattr(r, f"holm_{methods[0]}")}
        for r in report.significant_patterns(methods[0])
    ]
    man["finished"] = now()
    Path(args.out).write_text(json.dumps(doc, indent=1) + "\n")
    counts = ", ".join(f"{m}: {doc['n_significant'][m]}" for m in methods)
    print(f"{len(report.records)} patterns tested, significant at alpha={args.alpha} ({counts})")
    return 0


def cmd_minp_check(args, parser):
    miner, stat = _specs(args, parser)
    if args.n < 2 or args.n % 2:
        parser.error("--n must be even and >= 2")
    d = load_transactions(args.input, args.format)
    methods = _methods(args.method)
    curves = minp_test_all(d, _randomizer(args, args.randomizer), miner, stat, args.n, methods=methods, threads=args.threads)
    out = Path(args.out)
    for method, curve in curves.items():
        path = out if len(curves) == 1 else out.with_name(f"{out.stem}.{method}{out.suffix or '.csv'}")
        curve_export(curve, path)
        verdict = "PASS" if curve.passes else "FAIL"
        print(f"{method}: {verdict} max_exceedance={curve.max_exceedance:.4f} "
              f"empty_outputs={curve.n_empty} -> {path}")
    return 0


def cmd_synth(args, parser):
    try:
        cfg = GaussianConfig(args.k, args.sigma, args.m0, args.alt_mean, args.runs, args.n, args.seed)
    except ValueError as exc:
        parser.error(str(exc))
    methods = _methods(args.method)
    res = run_experiment(cfg, args.alg, methods, threads=args.threads)
    header = ["alpha"]
    cols = []
    for m in methods:
        t = res.tallies[m]
        header += [f"fwer_{m}", f"tpr_{m}", f"fpr_{m}"]
        cols += [t.fwer(), t.tpr(), t.fpr()]
    with open(args.out, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for i, a in enumerate(res.alphas):
            w.writerow([repr(float(a))] + ["" if np.isnan(c[i]) else repr(float(c[i])) for c in cols])
    for m in methods:
        line = f"{m}: fwer@0.05={res.fwer(m)[np.searchsorted(res.alphas, 0.05)]:.4f}"
        if cfg.m1:
            line += f" auc={res.roc(m).auc:.4f}"
        print(line)
    return 0


def cmd_adversarial(args, parser):
    if args.runs < 1:
        parser.error("--runs must be >= 1")
    est = adversarial_simulation(args.runs, args.seed, args.threshold)
    print(f"estimate: {est:.6f}")
    if args.threshold == 0.6:
        print(f"exact: {ADVERSARIAL_EXACT} = {float(ADVERSARIAL_EXACT):.6f}")
    return 0


COMMANDS = {
    "randomize": cmd_randomize,
    "mine": cmd_mine,
    "test": cmd_test,
    "minp-check": cmd_minp_check,
    "synth": cmd_synth,
    "adversarial": cmd_adversarial,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if not hasattr(args, "seed"):
        args.seed = 0
    args.threads = resolve_threads(getattr(args, "threads", None))
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(name)s: %(message)s")
    try:
        return COMMANDS[args.command](args, parser)
    except (DataFormatError, ValueError, OSError) as exc:
        print(f"sigpat: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
