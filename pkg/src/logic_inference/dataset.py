"""End-to-end dataset generation: examples, dedup, splits, files, validation, stats."""

from __future__ import annotations

import json
import logging
import random
import re
from collections import Counter
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .formula import ParseError, parse_formula, render_formula
from .nl import DEFAULT_LEXICON, Lexicon, PoolExhausted, canonicalize_type1
from .rules import InferenceRule, default_catalog, rule_instance_ok
from .semantics import InferenceChain, OracleLimitError, Step, Verdict, classify_all_sizes, consistent, verify_chain
from .synthesis import GenerationConfig, InferenceProblem, enumerate_one_step, generate_problems, variation_mappings
from .tasks import (
    CONTRADICTORY_ANSWER, CORNER_CONTRADICTORY, CORNER_NONE, CORNER_OBVIOUS, CORNER_UNRELATED, END_NO,
    END_YES, NO_CHAIN, OBVIOUS_ANSWER, PROBLEM_TYPES, TYPE1_PROMPT, TYPE2_NAMING, TYPE2_NOTHING, TYPE2_PROMPT,
    TYPE3_INLINE_NAMING, TYPE3_PROMPT, TYPE3_TRAILING_NAMING, TYPE3_TRAILING_QUERY, UNRELATED_ANSWER, YES_CHAIN,
    Example, closure_derivations, make_example, renamed_derivations,
)

log = logging.getLogger(__name__)

SPLITS = ("iid", "ood", "length")


@dataclass
class DatasetSplit:
    name: str
    train: list[Example] = field(default_factory=list)
    test: list[Example] = field(default_factory=list)


@dataclass
class LengthSummary:
    min: float = 0
    median: float = 0
    p90: float = 0
    max: float = 0

    @classmethod
    def of(cls, values: Sequence[int]) -> "LengthSummary":
        if not len(values):
            return cls()
        a = np.asarray(values)
        return cls(int(a.min()), float(np.median(a)), float(np.percentile(a, 90)), int(a.max()))


@dataclass
class StatsReport:
    problems: int = 0
    contradictory_problems: int = 0
    chain_length_histogram: dict[int, int] = field(default_factory=dict)
    variations: int = 0
    attempts: int = 0
    emitted: int = 0
    duplicates_removed: int = 0
    failed: int = 0
    type_counts: dict[str, int] = field(default_factory=dict)
    corner_counts: dict[str, int] = field(default_factory=dict)
    split_sizes: dict[str, int] = field(default_factory=dict)
    input_chars: LengthSummary = field(default_factory=LengthSummary)
    input_tokens: LengthSummary = field(default_factory=LengthSummary)
    output_chars: LengthSummary = field(default_factory=LengthSummary)
    output_tokens: LengthSummary = field(default_factory=LengthSummary)
    warnings: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["chain_length_histogram"] = {str(k): v for k, v in sorted(self.chain_length_histogram.items())}
        return d


# ---------------------------------------------------------------------------
# Example generation


class _ExampleSource:
    """Draws examples from a fixed problem set; variations stay as mappings."""

    def __init__(self, problems: Sequence[InferenceProblem], config: GenerationConfig,
                 rules: Sequence[InferenceRule], lexicon: Lexicon):
        self.problems = list(problems)
        self.config = config
        self.rules = rules
        self.lexicon = lexicon
        self.mappings = {p.problem_id: variation_mappings(p, config.num_variations,
                                                          random.Random(f"{config.seed}/variations/{p.problem_id}"))
                         for p in self.problems}
        self._derivations: dict[int, list] = {}
        self.types = list(PROBLEM_TYPES)
        self.weights = [config.type_weights[t] for t in self.types]

    def derivations(self, problem: InferenceProblem):
        d = self._derivations.get(problem.problem_id)
        if d is None:
            d = self._derivations[problem.problem_id] = closure_derivations(problem.premises, self.rules)
        return d

    def example(self, rng: random.Random) -> Example:
        problem = rng.choice(self.problems)
        maps = self.mappings[problem.problem_id]
        mapping = rng.choice(maps) if maps else {}
        ptype = rng.choices(self.types, weights=self.weights)[0]
        derivs = None
        if ptype in ("2a", "2b"):
            derivs = renamed_derivations(self.derivations(problem), mapping)
        variant = problem.renamed(mapping) if mapping else problem
        return make_example(variant, ptype, self.config.answer_position, rng, rules=self.rules,
                            lexicon=self.lexicon, config=self.config, derivations=derivs)

    def generate(self, n: int, stream: str, stats: StatsReport) -> list[Example]:
        out = []
        for i in range(n):
            rng = random.Random(f"{self.config.seed}/{stream}/{i}")
            try:
                out.append(self.example(rng))
            except PoolExhausted:
                stats.failed += 1
        stats.attempts += n
        return out


def _dedup(examples: Iterable[Example], seen: set, stats: StatsReport) -> list[Example]:
    out = []
    for e in examples:
        key = (e.input, e.output)
        if key in seen:
            stats.duplicates_removed += 1
            continue
        seen.add(key)
        out.append(e)
    return out


def build_dataset(config: GenerationConfig, split: str = "iid", rules: Sequence[InferenceRule] | None = None,
                  lexicon: Lexicon = DEFAULT_LEXICON) -> tuple[DatasetSplit, StatsReport]:
    """Generate problems and ``config.num_examples`` example attempts, drop
    duplicate (input, output) pairs and partition them into train/test."""
    if split not in SPLITS:
        raise ValueError(f"split must be one of {SPLITS}")
    rules = default_catalog() if rules is None else list(rules)
    problems = generate_problems(config, rules)
    stats = StatsReport()
    seen: set = set()
    n = config.num_examples
    if split == "ood":
        order = sorted(problems, key=lambda p: p.problem_id)
        random.Random(f"{config.seed}/ood-partition").shuffle(order)
        half = len(order) // 2
        train_src = _ExampleSource(order[:half], config, rules, lexicon)
        test_src = _ExampleSource(order[half:], config, rules, lexicon)
        n_train = round(config.split_ratio * n)
        train = _dedup(train_src.generate(n_train, "ood-train", stats), seen, stats)
        test = _dedup(test_src.generate(n - n_train, "ood-test", stats), seen, stats)
        stats.variations = sum(len(m) for src in (train_src, test_src) for m in src.mappings.values())
    else:
        src = _ExampleSource(problems, config, rules, lexicon)
        examples = _dedup(src.generate(n, "examples", stats), seen, stats)
        stats.variations = sum(len(m) for m in src.mappings.values())
        if split == "iid":
            random.Random(f"{config.seed}/iid-split").shuffle(examples)
            cut = round(config.split_ratio * len(examples))
            train, test = examples[:cut], examples[cut:]
        else:
            train = [e for e in examples if e.premise_count <= config.length_threshold]
            test = [e for e in examples if e.premise_count > config.length_threshold]
    result = DatasetSplit(split, train, test)
    report = report_stats(result, problems, stats)
    if report.emitted < n:
        report.warnings.append(f"emitted {report.emitted} of {n} requested examples "
                               f"({report.duplicates_removed} duplicates, {report.failed} failures)")
    return result, report


def report_stats(split: DatasetSplit, problems: Sequence[InferenceProblem] | None = None,
                 base: StatsReport | None = None) -> StatsReport:
    """Fill in counts and length summaries.  Without ``problems`` the problem
    counts are inferred from the examples' problem ids."""
    r = base or StatsReport()
    examples = split.train + split.test
    if problems is not None:
        r.problems = len(problems)
        r.contradictory_problems = sum(p.is_contradictory for p in problems)
        r.chain_length_histogram = dict(sorted(Counter(p.depth for p in problems).items()))
    else:
        r.problems = len({e.problem_id for e in examples})
        r.contradictory_problems = len({e.problem_id for e in examples if e.corner_case == CORNER_CONTRADICTORY})
    r.emitted = len(examples)
    r.type_counts = {t: 0 for t in PROBLEM_TYPES}
    r.type_counts.update(Counter(e.problem_type for e in examples))
    r.corner_counts = dict(sorted(Counter(e.corner_case for e in examples).items()))
    r.split_sizes = {"train": len(split.train), "test": len(split.test)}
    r.input_chars = LengthSummary.of([len(e.input) for e in examples])
    r.input_tokens = LengthSummary.of([len(e.input.split()) for e in examples])
    r.output_chars = LengthSummary.of([len(e.output) for e in examples])
    r.output_tokens = LengthSummary.of([len(e.output.split()) for e in examples])
    return r


# ---------------------------------------------------------------------------
# Files

_TSV_ESCAPES = {"\\": "\\\\", "\t": "\\t", "\n": "\\n"}
_TSV_UNESCAPES = {"\\\\": "\\", "\\t": "\t", "\\n": "\n"}


def tsv_escape(text: str) -> str:
    return "".join(_TSV_ESCAPES.get(ch, ch) for ch in text)


def tsv_unescape(text: str) -> str:
    return re.sub(r"\\[\\tn]", lambda m: _TSV_UNESCAPES[m.group(0)], text)


def write_examples(examples: Iterable[Example], path, fmt: str) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for e in examples:
            if fmt == "tsv":
                fh.write(f"{tsv_escape(e.input)}\t{tsv_escape(e.output)}\n")
            elif fmt == "jsonl":
                fh.write(json.dumps(e.to_dict(), ensure_ascii=False) + "\n")
            else:
                raise ValueError(f"unknown format {fmt!r}")


def write_dataset(split: DatasetSplit, fmt: str, out_dir) -> list[Path]:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    paths = []
    for part, examples in (("train", split.train), ("test", split.test)):
        path = out / f"{split.name}_{part}.{fmt}"
        write_examples(examples, path, fmt)
        paths.append(path)
    return paths


def read_examples(path) -> list[Example]:
    """Read a JSONL file written by ``write_dataset``."""
    with open(path, encoding="utf-8") as fh:
        return [Example.from_dict(json.loads(line)) for line in fh if line.strip()]


def read_tsv(path) -> list[tuple[str, str]]:
    with open(path, encoding="utf-8") as fh:
        return [tuple(tsv_unescape(c) for c in line.rstrip("\n").split("\t")) for line in fh if line.strip()]


# ---------------------------------------------------------------------------
# Validation


class RecordError(ValueError):
    pass


@dataclass
class ValidationReport:
    tally: dict[str, dict[str, int]] = field(default_factory=lambda: {t: {"pass": 0, "fail": 0} for t in PROBLEM_TYPES})
    failures: list[tuple[int, str, str]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    @property
    def checked(self) -> int:
        return sum(v["pass"] + v["fail"] for v in self.tally.values())


def _sentences(text: str) -> list[str]:
    text = text.strip()
    if not text.endswith("."):
        raise RecordError(f"expected a final period in {text!r}")
    return text[:-1].split(". ")


def _parse(text: str):
    try:
        return parse_formula(text)
    except ParseError as exc:
        raise RecordError(f"cannot parse {text!r}: {exc}") from None


def _after(text: str, prefix: str) -> str:
    if not text.startswith(prefix):
        raise RecordError(f"expected {prefix[:40]!r}...")
    return text[len(prefix):]


_STEP = re.compile(r"(?:Finally, from|From) (?P<premises>.+?) we can infer (?P<conclusion>.+?)"
                   r"(?: via (?P<rule>[A-Za-z ]+?))?(?:, which contradicts (?P<target>.+?))?\.(?= From | Finally, from |$)")


def parse_chain_text(text: str) -> tuple[list[Step], str | None]:
    """Steps of a rendered chain (rule "" when names are not given) and the
    contradicted target, if any."""
    steps = []
    target = None
    pos = 0
    for m in _STEP.finditer(text):
        if m.start() != pos:
            raise RecordError(f"unparseable chain text at offset {pos}")
        premises = tuple(_parse(p) for p in m.group("premises").split(", "))
        steps.append(Step(premises, _parse(m.group("conclusion")), m.group("rule") or ""))
        if m.group("target"):
            target = m.group("target")
        pos = m.end() + 1
    if not steps or pos < len(text):
        raise RecordError("unparseable chain text")
    return steps, target


def _name_steps(steps: list[Step], rules: Sequence[InferenceRule]) -> list[Step]:
    out = []
    for s in steps:
        if s.rule:
            out.append(s)
            continue
        rule = next((r for r in rules if rule_instance_ok(r, s.premises, s.conclusion)), None)
        if rule is None:
            raise RecordError(f"step to {render_formula(s.conclusion)!r} matches no rule")
        out.append(Step(s.premises, s.conclusion, rule.name))
    return out


def _check_type1(e: Example) -> None:
    body = e.output
    if " Therefore " not in " " + body:
        raise RecordError("type 1 output lacks 'Therefore'")
    head, concl = (" " + body).rsplit(" Therefore ", 1)
    premises = [_parse(s) for s in _sentences(head.strip())] if head.strip() else []
    conclusion = _parse(_sentences(concl)[0])
    formulas = premises + [conclusion]
    if canonicalize_type1(formulas) != formulas:
        raise RecordError("type 1 output is not canonically named")
    if len(premises) != e.premise_count:
        raise RecordError("premise count mismatch")
    verdicts = set(classify_all_sizes(premises, conclusion).values())
    if not verdicts <= {Verdict.ENTAILED, Verdict.PREMISES_INCONSISTENT}:
        raise RecordError("type 1 conclusion is not entailed")
    if not e.input.startswith(TYPE1_PROMPT):
        raise RecordError("type 1 prompt mismatch")


def _check_closure(premises, conclusions, rules) -> None:
    expected = [(render_formula(c), r) for c, r in enumerate_one_step(premises, rules)]
    if expected != conclusions:
        raise RecordError("conclusions differ from the one-step closure")


def _check_type2a(e: Example, rules) -> None:
    rest = _after(e.input, TYPE2_PROMPT + " ")
    named = rest.startswith(TYPE2_NAMING + " ")
    if named:
        rest = rest[len(TYPE2_NAMING) + 1:]
    premises = [_parse(s) for s in _sentences(rest)]
    if e.output == TYPE2_NOTHING:
        conclusions = []
    elif named:
        conclusions = []
        for s in _sentences(e.output):
            m = re.fullmatch(r"(.+) can be inferred via the (.+) rule", s)
            if not m:
                raise RecordError(f"unexpected conclusion sentence {s!r}")
            conclusions.append((render_formula(_parse(m.group(1))), m.group(2)))
    else:
        conclusions = [render_formula(_parse(s)) for s in _sentences(e.output)]
        expected = [render_formula(c) for c, _ in enumerate_one_step(premises, rules)]
        if conclusions != expected:
            raise RecordError("conclusions differ from the one-step closure")
        return
    _check_closure(premises, conclusions, rules)


def _logic(e: Example) -> dict:
    if not e.logic:
        raise RecordError("natural-language record lacks its logic view")
    return e.logic


def _check_type2b(e: Example, rules) -> None:
    logic = _logic(e)
    premises = [_parse(p) for p in logic["premises"]]
    conclusions = [(render_formula(_parse(c)), r) for c, r in logic["conclusions"]]
    _check_closure(premises, conclusions, rules)
    if not conclusions and e.output != TYPE2_NOTHING:
        raise RecordError("empty closure rendered as non-empty output")
    if e.premise_count != len(premises):
        raise RecordError("premise count mismatch")


def _check_answer(premises, query, answer: str, corner: str, steps, disproof: bool, rules) -> None:
    if corner == CORNER_CONTRADICTORY:
        if any(consistent(premises, d) for d in (1, 2, 3)):
            raise RecordError("premises claimed contradictory are consistent")
        return
    verdicts = set(classify_all_sizes(premises, query).values())
    if corner == CORNER_OBVIOUS:
        if query not in premises:
            raise RecordError("obvious query is not a premise")
        return
    if corner == CORNER_UNRELATED:
        if verdicts != {Verdict.INDEPENDENT}:
            raise RecordError(f"unrelated query has verdicts {sorted(v.value for v in verdicts)}")
        return
    expected = Verdict.CONTRADICTED if answer == "no" else Verdict.ENTAILED
    if verdicts != {expected}:
        raise RecordError(f"answer {answer!r} disagrees with oracle verdicts {sorted(v.value for v in verdicts)}")
    chain = InferenceChain(query, tuple(_name_steps(steps, rules)), disproof)
    check = verify_chain(premises, chain, rules)
    if not check:
        raise RecordError(f"chain step {check.index}: {check.reason}")


def _split_type3_input(text: str):
    rest = _after(text, TYPE3_PROMPT + " ")
    trailing = " " + TYPE3_TRAILING_QUERY + " "
    if trailing in rest:
        head, q = rest.split(trailing, 1)
        if q.startswith(TYPE3_TRAILING_NAMING + " "):
            q = q[len(TYPE3_TRAILING_NAMING) + 1:]
        query_text = _sentences(q)[0]
    else:
        m = re.search(r" Can we infer (.+?) from them\?(?: " + re.escape(TYPE3_INLINE_NAMING) + ")?$", rest)
        if not m:
            raise RecordError("type 3 query not found")
        head, query_text = rest[:m.start()], m.group(1)
    return head, query_text


def _corner_of(output: str) -> tuple[str, str]:
    return {OBVIOUS_ANSWER: (CORNER_OBVIOUS, "yes"), UNRELATED_ANSWER: (CORNER_UNRELATED, "no"),
            CONTRADICTORY_ANSWER: (CORNER_CONTRADICTORY, "yes")}.get(output, (CORNER_NONE, ""))


def _strip_answer(e: Example) -> tuple[str, str]:
    out = e.output
    for head, tail, answer in ((YES_CHAIN, END_YES, "yes"), (NO_CHAIN, END_NO, "no")):
        if e.answer_position == "begin" and out.startswith(head + " "):
            return out[len(head) + 1:], answer
        if e.answer_position == "end" and out.endswith(" " + tail):
            return out[:-len(tail) - 1], answer
    raise RecordError("type 3 output lacks the yes/no phrasing for its answer position")


def _check_type3a(e: Example, rules) -> None:
    head, query_text = _split_type3_input(e.input)
    premises = [_parse(s) for s in _sentences(head)]
    query = _parse(query_text)
    corner, answer = _corner_of(e.output)
    if corner != e.corner_case:
        raise RecordError("corner_case field disagrees with the output")
    steps, disproof = [], False
    if corner == CORNER_NONE:
        chain_text, answer = _strip_answer(e)
        steps, target = parse_chain_text(chain_text)
        disproof = target is not None
        if disproof != (answer == "no") or (disproof and _parse(target) != query):
            raise RecordError("refutation target does not match the query")
    _check_answer(premises, query, answer, corner, steps, disproof, rules)


def _check_type3b(e: Example, rules) -> None:
    logic = _logic(e)
    premises = [_parse(p) for p in logic["premises"]]
    query = _parse(logic["query"])
    corner, answer = _corner_of(e.output)
    if corner != e.corner_case:
        raise RecordError("corner_case field disagrees with the output")
    steps = []
    if corner == CORNER_NONE:
        _, answer = _strip_answer(e)
        steps = [Step(tuple(_parse(p) for p in s["premises"]), _parse(s["conclusion"]), s["rule"])
                 for s in logic["chain"]]
    if answer != logic["answer"]:
        raise RecordError("stated answer disagrees with the logic view")
    _check_answer(premises, query, answer, corner, steps, logic["disproof"], rules)


_CHECKS = {"1": lambda e, rules: _check_type1(e), "2a": _check_type2a, "2b": _check_type2b,
           "3a": _check_type3a, "3b": _check_type3b}


def validate_example(e: Example, rules: Sequence[InferenceRule] | None = None) -> None:
    """Raise ``RecordError`` if the example is not faithful."""
    rules = default_catalog() if rules is None else rules
    try:
        _CHECKS[e.problem_type](e, rules)
    except OracleLimitError as exc:
        raise RecordError(str(exc)) from None


def validate_dataset(path, rules: Sequence[InferenceRule] | None = None) -> ValidationReport:
    rules = default_catalog() if rules is None else list(rules)
    report = ValidationReport()
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            if not line.strip():
                continue
            try:
                e = Example.from_dict(json.loads(line))
            except (ValueError, KeyError, TypeError) as exc:
                report.failures.append((lineno, "?", f"unreadable record: {exc}"))
                continue
            try:
                validate_example(e, rules)
            except RecordError as exc:
                report.tally[e.problem_type]["fail"] += 1
                report.failures.append((lineno, e.problem_type, str(exc)))
            else:
                report.tally[e.problem_type]["pass"] += 1
    return report
