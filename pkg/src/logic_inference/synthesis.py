"""Inference problem synthesis by backward chaining.

A problem starts as one randomly chosen rule (premises, one-step chains for
each inference and contradiction, the rule's unrelated clauses).  Each growth
step replaces one premise by the premises of a rule that concludes it and
prepends that step to every chain.  Chains are then simplified and the problem
is checked for contradictory premises with the semantic oracle.
"""

from __future__ import annotations

import json
import logging
import math
import random
import re
from dataclasses import dataclass, field, replace
from typing import Iterable, Iterator, Mapping, Sequence

from .formula import (
    Exists, ForAll, Formula, SymbolInventory, collect_symbols, negate, parse_formula,
    render_formula, rename_many,
)
from .rules import (
    FreshNamer, InferenceRule, default_catalog, instantiate, match_backward, one_step_derivations,
)
from .semantics import (
    MAX_ATOMS, InferenceChain, Step, consistent, ground_atom_count, is_quantified,
)

log = logging.getLogger(__name__)

DEFAULT_CHAIN_DISTRIBUTION = (0.425, 0.3, 0.2, 0.05, 0.025)
NOMINAL_TYPE_WEIGHTS = {"1": 0.15, "2a": 0.2125, "2b": 0.2125, "3a": 0.2125, "3b": 0.2125}
# Reference type counts for a default-configuration build; the weights below are
# those shares divided by each type's measured survival rate under dedup.
REFERENCE_TYPE_COUNTS = {"1": 24019, "2a": 48422, "2b": 37794, "3a": 49713, "3b": 37323}
DEFAULT_TYPE_WEIGHTS = {"1": 0.1217, "2a": 0.2518, "2b": 0.1905, "3a": 0.2496, "3b": 0.1864}


class GenerationExhausted(RuntimeError):
    pass


@dataclass(frozen=True)
class GenerationConfig:
    chain_length_distribution: tuple[float, ...] = DEFAULT_CHAIN_DISTRIBUTION
    num_problems: int = 5000
    num_variations: int = 25
    contradiction_cap: float = 0.1
    num_examples: int = 200000
    split_ratio: float = 0.9
    length_threshold: int = 4
    answer_position: str = "begin"
    seed: int = 0
    type_weights: Mapping[str, float] = field(default_factory=lambda: dict(DEFAULT_TYPE_WEIGHTS))
    obvious_probability: float = 0.05
    unrelated_probability: float = 0.10
    name_rules_probability: float = 0.5
    max_retries: int = 20
    domain_sizes: tuple[int, ...] = (1, 2, 3)

    def __post_init__(self):
        dist = tuple(float(x) for x in self.chain_length_distribution)
        object.__setattr__(self, "chain_length_distribution", dist)
        object.__setattr__(self, "domain_sizes", tuple(self.domain_sizes))
        if any(x < 0 for x in dist) or not math.isclose(sum(dist), 1.0, abs_tol=1e-6):
            raise ValueError("chain_length_distribution must be a probability vector")
        weights = dict(self.type_weights)
        object.__setattr__(self, "type_weights", weights)
        if set(weights) != set(NOMINAL_TYPE_WEIGHTS) or not math.isclose(sum(weights.values()), 1.0, abs_tol=1e-6):
            raise ValueError("type_weights must give a probability for each of 1, 2a, 2b, 3a, 3b")
        if not 0.0 <= self.contradiction_cap <= 1.0:
            raise ValueError("contradiction_cap must lie in [0, 1]")
        if not 0.0 < self.split_ratio < 1.0:
            raise ValueError("split_ratio must lie in (0, 1)")
        if self.answer_position not in ("begin", "end"):
            raise ValueError("answer_position is 'begin' or 'end'")
        if self.obvious_probability + self.unrelated_probability > 1.0:
            raise ValueError("corner-case probabilities exceed 1")


@dataclass(frozen=True)
class InferenceProblem:
    premises: tuple[Formula, ...]
    inferences: tuple[InferenceChain, ...]
    contradictions: tuple[InferenceChain, ...]
    unrelated: tuple[Formula, ...]
    is_contradictory: bool = False
    problem_id: int = 0
    depth: int = 0

    def formulas(self) -> Iterator[Formula]:
        """Every formula of the problem, premises first."""
        yield from self.premises
        for chain in self.inferences + self.contradictions:
            yield chain.conclusion
            for step in chain.steps:
                yield from step.premises
                yield step.conclusion
        yield from self.unrelated

    def symbols(self) -> SymbolInventory:
        return collect_symbols(*self.formulas())

    def renamed(self, mapping: Mapping[str, str]) -> "InferenceProblem":
        items = list(self.formulas())
        renamed = iter(rename_many(items, mapping))
        premises = tuple(next(renamed) for _ in self.premises)

        def chains(group):
            out = []
            for chain in group:
                conclusion = next(renamed)
                steps = []
                for step in chain.steps:
                    ps = tuple(next(renamed) for _ in step.premises)
                    steps.append(Step(ps, next(renamed), step.rule))
                out.append(InferenceChain(conclusion, tuple(steps), chain.disproof))
            return tuple(out)

        inferences = chains(self.inferences)
        contradictions = chains(self.contradictions)
        unrelated = tuple(renamed)
        return replace(self, premises=premises, inferences=inferences,
                       contradictions=contradictions, unrelated=unrelated)

    def key(self) -> str:
        """Canonical string; equal keys mean the same problem up to premise order."""
        return _problem_key([render_formula(f) for f in self.premises],
                            [render_formula(c.conclusion) for c in self.inferences],
                            [render_formula(c.conclusion) for c in self.contradictions],
                            [render_formula(f) for f in self.unrelated])


def _problem_key(premises, inferences, contradictions, unrelated) -> str:
    return " | ".join(". ".join(sorted(part)) for part in (premises, inferences, contradictions, unrelated))


# ---------------------------------------------------------------------------
# Chain simplification


def simplify_chain(premises: Iterable[Formula], chain: InferenceChain) -> InferenceChain:
    """Drop steps that re-derive known formulas, cut at the first step that
    reaches the goal, and drop steps the goal does not depend on."""
    known = set(premises)
    goal = chain.goal
    if goal in known:
        return replace(chain, steps=())
    kept = []
    for step in chain.steps:
        if step.conclusion in known:
            continue
        kept.append(step)
        known.add(step.conclusion)
        if step.conclusion == goal:
            break
    needed = {goal}
    out = []
    for step in reversed(kept):
        if step.conclusion in needed:
            out.append(step)
            needed.update(step.premises)
    out.reverse()
    return replace(chain, steps=tuple(out))


# ---------------------------------------------------------------------------
# Problem generation


def sample_depth(distribution: Sequence[float], rng: random.Random) -> int:
    return rng.choices(range(len(distribution)), weights=distribution)[0]


def _seed_problem(rule: InferenceRule):
    namer = FreshNamer(step=1)
    binding: dict = {}
    premises = [instantiate(p, binding, namer) for p in rule.premises]
    inferences = [instantiate(i, binding, namer) for i in rule.inferences]
    contradictions = [instantiate(c, binding, namer) for c in rule.contradictions]
    unrelated = [instantiate(u, binding, namer) for u in rule.unrelated]
    # contradictions are negated inferences, so each is refuted by one of them
    step_premises = tuple(premises)
    i_chains = [InferenceChain(t, (Step(step_premises, t, rule.name),)) for t in inferences]
    c_chains = [InferenceChain(c, (Step(step_premises, negate(c), rule.name),), disproof=True)
                for c in contradictions]
    return premises, i_chains, c_chains, unrelated, namer.variable


def _grow(rules, premises, chains, problem_names, variable, step, rng, max_retries):
    order = rng.sample(range(len(premises)), len(premises))
    for idx in order[:max_retries]:
        target = premises[idx]
        m = match_backward(rules, target, rng, avoid=premises, step=step,
                           existing=problem_names, variable=variable)
        if m is None:
            continue
        new_premises = premises[:idx] + list(m.new_premises) + premises[idx + 1:]
        new_step = Step(m.new_premises, target, m.rule.name)
        new_chains = [replace(c, steps=(new_step,) + c.steps) for c in chains]
        var = variable
        if var is None:
            quantified = [f for f in m.new_premises if isinstance(f, (ForAll, Exists))]
            var = quantified[0].var if quantified else None
        return new_premises, new_chains, var
    return None


def _try_build(rules, depth: int, rng: random.Random, max_retries: int, domain_sizes, problem_id: int):
    rule = rng.choice(rules)
    premises, i_chains, c_chains, unrelated, variable = _seed_problem(rule)
    chains = i_chains + c_chains
    for k in range(depth):
        names = collect_symbols(*premises, *(c.conclusion for c in chains), *unrelated).all_names()
        grown = _grow(rules, premises, chains, names, variable, k + 2, rng, max_retries)
        if grown is None:
            return None
        premises, chains, variable = grown
    chains = [simplify_chain(premises, c) for c in chains]
    everything = premises + [c.conclusion for c in chains] + unrelated
    if ground_atom_count(everything, max(domain_sizes)) > MAX_ATOMS:
        return None
    if is_quantified(premises):
        verdicts = {consistent(premises, d) for d in domain_sizes}
        if len(verdicts) > 1:
            return None
        ok = verdicts.pop()
    else:
        ok = consistent(premises)
    n_inf = len(i_chains)
    return InferenceProblem(
        premises=tuple(premises),
        inferences=tuple(chains[:n_inf]),
        contradictions=tuple(chains[n_inf:]),
        unrelated=tuple(unrelated),
        is_contradictory=not ok,
        problem_id=problem_id,
        depth=depth,
    )


def generate_problem(rules: Sequence[InferenceRule], config: GenerationConfig, rng: random.Random,
                     problem_id: int = 0, depth: int | None = None) -> InferenceProblem:
    """One problem with ``depth`` growth steps (sampled from the configured
    distribution when omitted).  Restarts from a fresh seed rule when growth
    stalls; gives up after ``config.max_retries`` restarts."""
    if depth is None:
        depth = sample_depth(config.chain_length_distribution, rng)
    for _ in range(config.max_retries):
        problem = _try_build(rules, depth, rng, config.max_retries, config.domain_sizes, problem_id)
        if problem is not None:
            return problem
    raise GenerationExhausted(f"no problem of depth {depth} after {config.max_retries} attempts")


def problem_rng(seed: int, problem_id: int) -> random.Random:
    return random.Random(f"{seed}/problem/{problem_id}")


def generate_problems(config: GenerationConfig, rules: Sequence[InferenceRule] | None = None) -> list[InferenceProblem]:
    """Try ``config.num_problems`` problems; contradictory ones are buffered and
    re-admitted only up to ``config.contradiction_cap`` of the final set."""
    rules = default_catalog() if rules is None else list(rules)
    clean: list[InferenceProblem] = []
    buffered: list[InferenceProblem] = []
    failures = 0
    for i in range(config.num_problems):
        try:
            p = generate_problem(rules, config, problem_rng(config.seed, i), problem_id=i)
        except GenerationExhausted:
            failures += 1
            continue
        (buffered if p.is_contradictory else clean).append(p)
    if failures:
        log.warning("%d of %d problems could not be generated", failures, config.num_problems)
    cap = config.contradiction_cap
    allowed = len(buffered) if cap >= 1.0 else int(math.floor(cap * len(clean) / (1.0 - cap) + 1e-9))
    admitted = buffered[:allowed]
    return sorted(clean + admitted, key=lambda p: p.problem_id)


# ---------------------------------------------------------------------------
# One-step closure


def enumerate_one_step(premises: Sequence[Formula], rules: Sequence[InferenceRule] | None = None) -> list[tuple[Formula, str]]:
    """Distinct single-step conclusions that add no new symbols and are not
    already premises, in (rule, premise tuple) order."""
    rules = default_catalog() if rules is None else rules
    return closure_from_derivations(premises, one_step_derivations(premises, rules))


def closure_from_derivations(premises, derivations) -> list[tuple[Formula, str]]:
    present = set(premises)
    names = collect_symbols(*premises).all_names() if premises else set()
    seen: set[Formula] = set()
    out = []
    for d in derivations:
        c = d.conclusion
        if c in present or c in seen:
            continue
        if not collect_symbols(c).all_names() <= names:
            continue
        seen.add(c)
        out.append((c, d.rule_name))
    return out


# ---------------------------------------------------------------------------
# Renaming variations

_PROP_LETTERS = "pqrstuvw"
_PRED_LETTERS = "PQRSTUVW"
_CONST_LETTERS = "abcdefgh"
_SUFFIXES = ("",) + tuple(f"_{i}" for i in range(1, 5))


def _pool(letters: str, needed: int) -> list[str]:
    suffixes = list(_SUFFIXES)
    while len(letters) * len(suffixes) < needed:
        suffixes.append(f"_{len(suffixes)}")
    return [f"{c}{s}" for s in suffixes for c in letters]


def random_renaming(inv: SymbolInventory, rng: random.Random) -> dict[str, str]:
    mapping: dict[str, str] = {}
    for names, pool in ((inv.propositions, _pool(_PROP_LETTERS, len(inv.propositions))),
                        (inv.predicates, _pool(_PRED_LETTERS, len(inv.predicates))),
                        (inv.constants, _pool(_CONST_LETTERS, len(inv.constants))),
                        (inv.variables, ["x"] + [f"x_{i}" for i in range(1, 10 + len(inv.variables))])):
        mapping.update(zip(names, rng.sample(pool, len(names))))
    return mapping


_IDENT = re.compile(r"[A-Za-z][A-Za-z0-9]*(?:_[0-9]+)?")


def _rename_text(text: str, mapping: Mapping[str, str]) -> str:
    return _IDENT.sub(lambda m: mapping.get(m.group(0), m.group(0)), text)


def variation_mappings(problem: InferenceProblem, n: int, rng: random.Random,
                       max_retries: int = 20) -> list[dict[str, str]]:
    """Up to ``n`` renamings giving pairwise distinct, non-identical copies."""
    inv = problem.symbols()
    rendered = ([render_formula(f) for f in problem.premises],
                [render_formula(c.conclusion) for c in problem.inferences],
                [render_formula(c.conclusion) for c in problem.contradictions],
                [render_formula(f) for f in problem.unrelated])
    seen = {_problem_key(*rendered)}
    out = []
    misses = 0
    while len(out) < n and misses < max_retries:
        mapping = random_renaming(inv, rng)
        key = _problem_key(*([_rename_text(t, mapping) for t in part] for part in rendered))
        if key in seen:
            misses += 1
            continue
        seen.add(key)
        out.append(mapping)
    return out


def make_variations(problem: InferenceProblem, n: int, rng: random.Random) -> list[InferenceProblem]:
    return [problem.renamed(m) for m in variation_mappings(problem, n, rng)]


# ---------------------------------------------------------------------------
# Serialization (one JSON object per line)


def _chain_to_dict(chain: InferenceChain) -> dict:
    return {
        "target": render_formula(chain.conclusion),
        "steps": [{"premises": [render_formula(p) for p in s.premises],
                   "conclusion": render_formula(s.conclusion), "rule": s.rule} for s in chain.steps],
    }


def _chain_from_dict(d: dict, disproof: bool) -> InferenceChain:
    steps = tuple(Step(tuple(parse_formula(p) for p in s["premises"]), parse_formula(s["conclusion"]), s["rule"])
                  for s in d["steps"])
    return InferenceChain(parse_formula(d["target"]), steps, disproof)


def problem_to_dict(p: InferenceProblem) -> dict:
    return {
        "problem_id": p.problem_id,
        "depth": p.depth,
        "is_contradictory": p.is_contradictory,
        "premises": [render_formula(f) for f in p.premises],
        "inferences": [_chain_to_dict(c) for c in p.inferences],
        "contradictions": [_chain_to_dict(c) for c in p.contradictions],
        "unrelated": [render_formula(f) for f in p.unrelated],
    }


def problem_from_dict(d: dict) -> InferenceProblem:
    return InferenceProblem(
        premises=tuple(parse_formula(f) for f in d["premises"]),
        inferences=tuple(_chain_from_dict(c, False) for c in d["inferences"]),
        contradictions=tuple(_chain_from_dict(c, True) for c in d["contradictions"]),
        unrelated=tuple(parse_formula(f) for f in d["unrelated"]),
        is_contradictory=d["is_contradictory"],
        problem_id=d["problem_id"],
        depth=d["depth"],
    )


def write_problems(problems: Iterable[InferenceProblem], path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for p in problems:
            fh.write(json.dumps(problem_to_dict(p)) + "\n")


def read_problems(path) -> list[InferenceProblem]:
    with open(path, encoding="utf-8") as fh:
        return [problem_from_dict(json.loads(line)) for line in fh if line.strip()]
