"""Command line entry point: generate, validate, stats, rules list."""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from .dataset import SPLITS, DatasetSplit, build_dataset, read_examples, read_tsv, report_stats, validate_dataset, write_dataset
from .rules import default_catalog
from .synthesis import DEFAULT_CHAIN_DISTRIBUTION, GenerationConfig, NOMINAL_TYPE_WEIGHTS
from .tasks import Example

_TYPE_ORDER = tuple(NOMINAL_TYPE_WEIGHTS)


def _floats(text: str) -> tuple[float, ...]:
    try:
        return tuple(float(x) for x in text.split(",") if x.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _type_weights(text: str) -> dict[str, float]:
    """Either five numbers in the order 1,2a,2b,3a,3b or ``type=weight`` pairs."""
    if "=" in text:
        try:
            pairs = dict(item.split("=", 1) for item in text.split(",") if item.strip())
            return {k.strip(): float(v) for k, v in pairs.items()}
        except ValueError:
            raise argparse.ArgumentTypeError(f"bad type weights {text!r}") from None
    values = _floats(text)
    if len(values) != len(_TYPE_ORDER):
        raise argparse.ArgumentTypeError(f"expected {len(_TYPE_ORDER)} weights for types {','.join(_TYPE_ORDER)}")
    return dict(zip(_TYPE_ORDER, values))


def build_parser() -> argparse.ArgumentParser:
    defaults = GenerationConfig()
    parser = argparse.ArgumentParser(prog="logic-inference", description=__doc__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("generate", help="generate a dataset split")
    gen.add_argument("--split", choices=SPLITS, default="iid")
    gen.add_argument("--answer-position", choices=("begin", "end"), default=defaults.answer_position)
    gen.add_argument("--seed", type=int, default=defaults.seed)
    gen.add_argument("--num-problems", type=int, default=defaults.num_problems)
    gen.add_argument("--num-variations", type=int, default=defaults.num_variations)
    gen.add_argument("--num-examples", type=int, default=defaults.num_examples)
    gen.add_argument("--length-threshold", type=int, default=defaults.length_threshold)
    gen.add_argument("--split-ratio", type=float, default=defaults.split_ratio)
    gen.add_argument("--contradiction-cap", type=float, default=defaults.contradiction_cap)
    gen.add_argument("--type-weights", type=_type_weights, default=None,
                     help="weights for types 1,2a,2b,3a,3b (default: calibrated)")
    gen.add_argument("--chain-dist", type=_floats, default=DEFAULT_CHAIN_DISTRIBUTION,
                     help="probabilities of 0..n backward-chaining steps")
    gen.add_argument("--format", choices=("tsv", "jsonl"), default="jsonl")
    gen.add_argument("--out", type=Path, required=True)

    val = sub.add_parser("validate", help="check every example of a JSONL file")
    val.add_argument("--in", dest="path", type=Path, required=True)
    val.add_argument("--max-failures", type=int, default=20, help="failures to print")

    st = sub.add_parser("stats", help="length and type statistics of a dataset file")
    st.add_argument("--in", dest="path", type=Path, required=True)

    rules = sub.add_parser("rules", help="inspect the rule catalog")
    rules_sub = rules.add_subparsers(dest="rules_command", required=True)
    rules_sub.add_parser("list", help="print every rule")
    return parser


def _generate(args) -> int:
    kwargs = dict(
        chain_length_distribution=args.chain_dist, num_problems=args.num_problems,
        num_variations=args.num_variations, contradiction_cap=args.contradiction_cap,
        num_examples=args.num_examples, split_ratio=args.split_ratio,
        length_threshold=args.length_threshold, answer_position=args.answer_position, seed=args.seed,
    )
    if args.type_weights is not None:
        kwargs["type_weights"] = args.type_weights
    try:
        config = GenerationConfig(**kwargs)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    split, report = build_dataset(config, args.split)
    paths = write_dataset(split, args.format, args.out)
    stats_path = args.out / f"{args.split}_stats.json"
    stats_path.write_text(json.dumps(report.to_dict(), indent=2) + "\n", encoding="utf-8")
    for w in report.warnings:
        logging.warning(w)
    for p in paths + [stats_path]:
        print(p)
    print(f"train={len(split.train)} test={len(split.test)} problems={report.problems}")
    return 0


def _validate(args) -> int:
    report = validate_dataset(args.path)
    for t, tally in report.tally.items():
        if tally["pass"] or tally["fail"]:
            print(f"type {t}: {tally['pass']} passed, {tally['fail']} failed")
    for lineno, t, reason in report.failures[:args.max_failures]:
        print(f"line {lineno} (type {t}): {reason}")
    if len(report.failures) > args.max_failures:
        print(f"... {len(report.failures) - args.max_failures} more failures")
    print("OK" if report.ok else "FAILED")
    return 0 if report.ok else 1


def _stats(args) -> int:
    if args.path.suffix == ".tsv":
        examples = [Example(i, o, "1") for i, o in read_tsv(args.path)]
        report = report_stats(DatasetSplit(args.path.stem, examples, []))
        report.type_counts = {}
    else:
        report = report_stats(DatasetSplit(args.path.stem, read_examples(args.path), []))
    print(json.dumps(report.to_dict(), indent=2))
    return 0


def _rules_list(args) -> int:
    for i, rule in enumerate(default_catalog()):
        print(f"{i:2d}  {rule.describe()}")
    return 0


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    if args.command == "generate":
        return _generate(args)
    if args.command == "validate":
        return _validate(args)
    if args.command == "stats":
        return _stats(args)
    return _rules_list(args)


if __name__ == "__main__":
    sys.exit(main())
