"""Synthetic logical-inference dataset generator."""

from .formula import ParseError, collect_symbols, negate, parse_formula, render_formula
from .semantics import Verdict, classify, classify_all_sizes, verify_chain
from .rules import InferenceRule, default_catalog
from .synthesis import GenerationConfig, InferenceProblem, enumerate_one_step, generate_problems
from .tasks import Example, answer_flip, make_example
from .dataset import build_dataset, report_stats, validate_dataset, write_dataset

__all__ = [
    "ParseError", "collect_symbols", "negate", "parse_formula", "render_formula",
    "Verdict", "classify", "classify_all_sizes", "verify_chain",
    "InferenceRule", "default_catalog",
    "GenerationConfig", "InferenceProblem", "enumerate_one_step", "generate_problems",
    "Example", "answer_flip", "make_example",
    "build_dataset", "report_stats", "validate_dataset", "write_dataset",
]
