"""Training examples of the five problem types.

1   natural language premises and conclusion -> canonical logic notation
2a  one-step closure, logic notation
2b  one-step closure, natural language
3a  "can we infer ..." with an inference chain, logic notation
3b  the same in natural language
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field, replace
from typing import Callable, Sequence

from .formula import Formula, collect_symbols, render_formula, rename_many
from .nl import DEFAULT_LEXICON, LexAssignment, Lexicon, assign_lexicon, canonicalize_type1, render_clause, sentence
from .rules import Derivation, InferenceRule, default_catalog, one_step_derivations
from .semantics import InferenceChain
from .synthesis import GenerationConfig, InferenceProblem, closure_from_derivations

PROBLEM_TYPES = ("1", "2a", "2b", "3a", "3b")
NL_TYPES = ("1", "2b", "3b")

CORNER_NONE = "none"
CORNER_UNRELATED = "unrelated"
CORNER_OBVIOUS = "obvious"
CORNER_CONTRADICTORY = "contradictory_premises"

# Templates.  Documented verbatim in README.md.
TYPE1_PROMPT = "Translate the following inference to logic notation:"
TYPE1_THEREFORE = "Therefore"
TYPE2_PROMPT = ("What can be inferred from the following premises in a single inference step "
                "(ignoring inferences that add new predicates or constants)?")
TYPE2_NAMING = "Name the inference rule being used:"
TYPE2_NAMED = "{conclusion} can be inferred via the {rule} rule."
TYPE2_NOTHING = "Nothing can be inferred from these premises."
TYPE3_PROMPT = "Consider the following premises."
TYPE3_INLINE_QUERY = "Can we infer {query} from them?"
TYPE3_INLINE_NAMING = "If possible, name the inference rules being used at each step."
TYPE3_TRAILING_QUERY = "Can we infer the following from them?"
TYPE3_TRAILING_NAMING = "If we can, name the inference rule being used:"
YES_CHAIN = "Yes, via the following inference chain."
NO_CHAIN = "No, we can see why via the following inference chain."
END_YES = "Therefore, the answer is yes."
END_NO = "Therefore, the answer is no."
OBVIOUS_ANSWER = "Yes, that is one of the premises."
UNRELATED_ANSWER = "No, we cannot infer that from the premises."
CONTRADICTORY_ANSWER = "Yes, the premises are contradictory, so we can infer anything from them."

INLINE = "inline"
TRAILING = "trailing"

PROOF = "proof"
DISPROOF = "disproof"


@dataclass(frozen=True)
class Example:
    input: str
    output: str
    problem_type: str
    answer_position: str = "begin"
    problem_id: int = 0
    premise_count: int = 0
    corner_case: str = CORNER_NONE
    # logic-notation view of natural-language examples, used by the validator
    logic: dict | None = field(default=None, compare=False)

    def __post_init__(self):
        if self.problem_type not in PROBLEM_TYPES:
            raise ValueError(f"unknown problem type {self.problem_type!r}")
        if not self.input or not self.output:
            raise ValueError("example input and output must be non-empty")

    def to_dict(self) -> dict:
        d = {"input": self.input, "output": self.output, "type": self.problem_type,
             "answer_position": self.answer_position, "problem_id": self.problem_id,
             "premise_count": self.premise_count, "corner_case": self.corner_case}
        if self.logic is not None:
            d["logic"] = self.logic
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "Example":
        return cls(d["input"], d["output"], d["type"], d["answer_position"], d["problem_id"],
                   d["premise_count"], d["corner_case"], d.get("logic"))


@dataclass(frozen=True)
class Query:
    formula: Formula
    kind: str  # proof, disproof, obvious or unrelated
    chain: InferenceChain | None = None


# ---------------------------------------------------------------------------
# Query selection


def _proof_pool(problem: InferenceProblem) -> list[Query]:
    pool = [Query(c.conclusion, PROOF, c) for c in problem.inferences if c.steps]
    pool += [Query(c.conclusion, DISPROOF, c) for c in problem.contradictions if c.steps]
    return pool


def select_query(problem: InferenceProblem, rng: random.Random,
                 obvious: float = 0.05, unrelated: float = 0.10) -> Query:
    u = rng.random()
    pool = _proof_pool(problem)
    if u < obvious or (not pool and not problem.unrelated):
        return Query(rng.choice(problem.premises), CORNER_OBVIOUS)
    if (u < obvious + unrelated and problem.unrelated) or not pool:
        return Query(rng.choice(problem.unrelated), CORNER_UNRELATED)
    return rng.choice(pool)


def query_for(problem: InferenceProblem, formula: Formula) -> Query:
    """Classify a hand-picked query against the problem's targets."""
    if formula in problem.premises:
        return Query(formula, CORNER_OBVIOUS)
    for c in problem.inferences:
        if c.conclusion == formula:
            return Query(formula, PROOF, c) if c.steps else Query(formula, CORNER_OBVIOUS)
    for c in problem.contradictions:
        if c.conclusion == formula and c.steps:
            return Query(formula, DISPROOF, c)
    if formula in problem.unrelated:
        return Query(formula, CORNER_UNRELATED)
    raise ValueError(f"{render_formula(formula)!r} is not a target of this problem")


# ---------------------------------------------------------------------------
# One-step closure in presentation order


def closure_derivations(premises: Sequence[Formula], rules: Sequence[InferenceRule]) -> list[Derivation]:
    """Derivations whose conclusions are new and use only premise symbols."""
    present = set(premises)
    names = collect_symbols(*premises).all_names()
    return [d for d in one_step_derivations(premises, rules)
            if d.conclusion not in present and collect_symbols(d.conclusion).all_names() <= names]


def ordered_closure(presented: Sequence[Formula], derivations: Sequence[Derivation],
                    order: Sequence[int]) -> list[tuple[Formula, str]]:
    """Closure of ``presented`` given derivations computed on the unshuffled
    premises, where ``presented[k]`` is original premise ``order[k]``.  Equal to
    ``enumerate_one_step(presented)``."""
    pos = {orig: k for k, orig in enumerate(order)}

    def key(d: Derivation):
        return d.rule_index, tuple(pos[j] for j in d.premise_indices), d.inference_index

    return closure_from_derivations(presented, sorted(derivations, key=key))


# ---------------------------------------------------------------------------
# Rendering helpers


def _chain_steps(chain: InferenceChain, render: Callable[[Formula], str], name_rules: bool) -> str:
    parts = []
    n = len(chain.steps)
    for i, step in enumerate(chain.steps):
        last = i == n - 1
        lead = "Finally, from" if last and n > 1 else "From"
        text = f"{lead} {', '.join(render(p) for p in step.premises)} we can infer {render(step.conclusion)}"
        if name_rules:
            text += f" via {step.rule}"
        if last and chain.disproof:
            text += f", which contradicts {render(chain.conclusion)}"
        parts.append(text + ".")
    return " ".join(parts)


def chain_answer(chain: InferenceChain, render: Callable[[Formula], str], name_rules: bool,
                 answer_position: str) -> str:
    steps = _chain_steps(chain, render, name_rules)
    if answer_position == "begin":
        return f"{NO_CHAIN if chain.disproof else YES_CHAIN} {steps}"
    return f"{steps} {END_NO if chain.disproof else END_YES}"


def _logic_chain(chain: InferenceChain | None) -> list[dict]:
    if chain is None:
        return []
    return [{"premises": [render_formula(p) for p in s.premises],
             "conclusion": render_formula(s.conclusion), "rule": s.rule} for s in chain.steps]


# ---------------------------------------------------------------------------
# Example construction


def make_example(problem: InferenceProblem, problem_type: str, answer_position: str = "begin",
                 rng: random.Random | None = None, *,
                 rules: Sequence[InferenceRule] | None = None,
                 lexicon: Lexicon = DEFAULT_LEXICON,
                 config: GenerationConfig | None = None,
                 derivations: Sequence[Derivation] | None = None,
                 shuffle: bool = True,
                 name_rules: bool | None = None,
                 query: Formula | None = None,
                 prompt_shape: str | None = None,
                 assignment: LexAssignment | None = None) -> Example:
    """Build one example.  Keyword overrides pin the otherwise random choices.

    ``derivations`` may carry ``closure_derivations(problem.premises)`` to avoid
    recomputing the one-step closure for every shuffle of the same problem.
    """
    if problem_type not in PROBLEM_TYPES:
        raise ValueError(f"unknown problem type {problem_type!r}")
    if answer_position not in ("begin", "end"):
        raise ValueError("answer_position is 'begin' or 'end'")
    if not problem.premises:
        raise ValueError("problem has no premises")
    rng = rng or random.Random(0)
    config = config or GenerationConfig()

    order = list(range(len(problem.premises)))
    if shuffle:
        rng.shuffle(order)
    premises = [problem.premises[i] for i in order]
    if name_rules is None:
        name_rules = rng.random() < config.name_rules_probability
    nl = problem_type in NL_TYPES
    common = dict(problem_type=problem_type, answer_position=answer_position,
                  problem_id=problem.problem_id, premise_count=len(premises))

    if problem_type == "1":
        if query is None:
            pool = [c.conclusion for c in problem.inferences] + [c.goal for c in problem.contradictions]
            query = rng.choice(pool)
        a = assignment or assign_lexicon(collect_symbols(*premises, query), rng, lexicon)
        text = " ".join(sentence(render_clause(p, a)) for p in premises)
        inp = f"{TYPE1_PROMPT} {text} {TYPE1_THEREFORE} {render_clause(query, a)}."
        canon = canonicalize_type1(premises + [query])
        out = " ".join(f"{render_formula(f)}." for f in canon[:-1]) + f" {TYPE1_THEREFORE} {render_formula(canon[-1])}."
        return Example(inp, out, **common)

    if problem_type in ("2a", "2b"):
        if derivations is None:
            derivations = closure_derivations(problem.premises, rules or default_catalog())
        closure = ordered_closure(premises, derivations, order)
        if nl:
            a = assignment or assign_lexicon(collect_symbols(*premises), rng, lexicon)
            render = lambda f: render_clause(f, a)  # noqa: E731
        else:
            render = render_formula
        prompt = f"{TYPE2_PROMPT} {TYPE2_NAMING}" if name_rules else TYPE2_PROMPT
        inp = prompt + " " + " ".join(sentence(render(p)) if nl else f"{render(p)}." for p in premises)
        if not closure:
            out = TYPE2_NOTHING
        elif name_rules:
            out = " ".join(TYPE2_NAMED.format(conclusion=_cap(render(c), nl), rule=r) for c, r in closure)
        else:
            out = " ".join(sentence(render(c)) if nl else f"{render(c)}." for c, _ in closure)
        logic = None
        if nl:
            logic = {"premises": [render_formula(p) for p in premises],
                     "conclusions": [[render_formula(c), r] for c, r in closure],
                     "name_rules": name_rules}
        return Example(inp, out, logic=logic, **common)

    # type 3
    if prompt_shape is None:
        prompt_shape = rng.choice((INLINE, TRAILING))
    q = select_query(problem, rng, config.obvious_probability, config.unrelated_probability) \
        if query is None else query_for(problem, query)
    mentioned = list(premises) + [q.formula]
    if q.chain is not None:
        for s in q.chain.steps:
            mentioned += list(s.premises) + [s.conclusion]
    if nl:
        a = assignment or assign_lexicon(collect_symbols(*mentioned), rng, lexicon)
        render = lambda f: render_clause(f, a)  # noqa: E731
    else:
        render = render_formula
    text = " ".join(sentence(render(p)) if nl else f"{render(p)}." for p in premises)
    if prompt_shape == INLINE:
        ask = TYPE3_INLINE_QUERY.format(query=render(q.formula))
        if name_rules:
            ask += " " + TYPE3_INLINE_NAMING
    else:
        rendered = sentence(render(q.formula)) if nl else f"{render(q.formula)}."
        ask = f"{TYPE3_TRAILING_QUERY} {TYPE3_TRAILING_NAMING} {rendered}" if name_rules \
            else f"{TYPE3_TRAILING_QUERY} {rendered}"
    inp = f"{TYPE3_PROMPT} {text} {ask}"

    if problem.is_contradictory:
        corner, out, answer = CORNER_CONTRADICTORY, CONTRADICTORY_ANSWER, "yes"
    elif q.kind == CORNER_OBVIOUS:
        corner, out, answer = CORNER_OBVIOUS, OBVIOUS_ANSWER, "yes"
    elif q.kind == CORNER_UNRELATED:
        corner, out, answer = CORNER_UNRELATED, UNRELATED_ANSWER, "no"
    else:
        corner = CORNER_NONE
        out = chain_answer(q.chain, render, name_rules, answer_position)
        answer = "no" if q.chain.disproof else "yes"
    logic = None
    if nl:
        logic = {"premises": [render_formula(p) for p in premises], "query": render_formula(q.formula),
                 "answer": answer, "disproof": q.kind == DISPROOF,
                 "chain": _logic_chain(q.chain) if corner == CORNER_NONE else [],
                 "name_rules": name_rules}
    return Example(inp, out, corner_case=corner, logic=logic, **common)


def _cap(text: str, nl: bool) -> str:
    return text[:1].upper() + text[1:] if nl else text


def answer_flip(example: Example) -> Example:
    """Switch a type 3 example between answer-first and answer-last form."""
    if example.problem_type not in ("3a", "3b"):
        raise ValueError("only type 3 examples carry a yes/no answer")
    target = "end" if example.answer_position == "begin" else "begin"
    if example.corner_case != CORNER_NONE:
        return replace(example, answer_position=target)
    out = example.output
    if example.answer_position == "begin":
        for head, tail in ((YES_CHAIN, END_YES), (NO_CHAIN, END_NO)):
            if out.startswith(head + " "):
                return replace(example, output=f"{out[len(head) + 1:]} {tail}", answer_position=target)
    else:
        for head, tail in ((YES_CHAIN, END_YES), (NO_CHAIN, END_NO)):
            if out.endswith(" " + tail):
                return replace(example, output=f"{head} {out[:-len(tail) - 1]}", answer_position=target)
    raise ValueError("output does not have the expected answer phrasing")


def renamed_derivations(derivations: Sequence[Derivation], mapping) -> list[Derivation]:
    """Carry base-problem derivations over to a renamed variation."""
    conclusions = rename_many([d.conclusion for d in derivations], mapping) if derivations else []
    return [d._replace(conclusion=c) for d, c in zip(derivations, conclusions)]


__all__ = [
    "Example", "Query", "make_example", "answer_flip", "select_query", "query_for",
    "closure_derivations", "ordered_closure", "renamed_derivations", "chain_answer",
]
