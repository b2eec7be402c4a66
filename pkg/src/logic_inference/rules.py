"""Inference rule catalog and schematic matching.

A rule is a 5-tuple ``(premises, inferences, contradictions, unrelated, name)``
of formula *patterns* plus the list of placeholders it uses.  Every symbol in a
pattern is a placeholder:

* a proposition ``p`` binds to a ground literal (``q_1``, ``~q_1``, ``P(a)``),
* a predicate ``P`` in ``P(x)`` binds to a signed predicate (``Q_2`` or ``~Q_2``),
* the variable ``x`` and the constant ``a`` bind to a variable / constant name.

Negation is resolved through :func:`~logic_inference.formula.negate`, so the
pattern ``~q`` with ``q`` bound to ``~r`` instantiates to ``r``.  Bindings are
injective: two placeholders never bind literals over the same atom.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Iterable, NamedTuple, Sequence

from .formula import (
    And, Atom, Const, Exists, ForAll, Formula, Iff, Implies, Not, Or, PredApp, Var,
    collect_symbols, is_ground_literal, negate, parse_formula, render_formula,
)

_BINARY = (And, Or, Implies, Iff)
_QUANT = (ForAll, Exists)


class RuleValidationError(ValueError):
    pass


class Unbound(KeyError):
    """Instantiation needs a placeholder the substitution does not bind."""


@dataclass(frozen=True)
class PredLit:
    """Binding of a predicate placeholder: a predicate, possibly negated."""

    name: str
    negated: bool = False


Substitution = dict  # placeholder name -> Formula | PredLit | Var | Const


@dataclass(frozen=True)
class InferenceRule:
    premises: tuple[Formula, ...]
    inferences: tuple[Formula, ...]
    contradictions: tuple[Formula, ...]
    unrelated: tuple[Formula, ...]
    symbols: tuple[str, ...]
    name: str

    def describe(self) -> str:
        def fmt(fs):
            return "{" + ", ".join(render_formula(f) for f in fs) + "}"

        return (f"{self.name}: P={fmt(self.premises)} I={fmt(self.inferences)} "
                f"C={fmt(self.contradictions)} U={fmt(self.unrelated)}")


# ---------------------------------------------------------------------------
# Matching


def _identity(value) -> tuple | None:
    if isinstance(value, PredLit):
        return ("pred", value.name)
    if isinstance(value, Const):
        return ("const", value.name)
    if isinstance(value, Var):
        return None
    return ("atom", value.f if isinstance(value, Not) else value)


def _bind(s: Substitution, key: str, value) -> Substitution | None:
    current = s.get(key)
    if current is not None:
        return s if current == value else None
    ident = _identity(value)
    if ident is not None and any(_identity(v) == ident for v in s.values()):
        return None
    out = dict(s)
    out[key] = value
    return out


def match(pattern: Formula, f: Formula, s: Substitution | None = None) -> Substitution | None:
    """Extend ``s`` so that ``pattern`` instantiates to ``f``, or return None."""
    if s is None:
        s = {}
    if isinstance(pattern, Atom):
        if not is_ground_literal(f):
            return None
        return _bind(s, pattern.name, f)
    if isinstance(pattern, Not):
        if isinstance(pattern.f, (Atom, PredApp)):
            return match(pattern.f, negate(f), s)
        if not isinstance(f, Not):
            return None
        return match(pattern.f, f.f, s)
    if isinstance(pattern, PredApp):
        negated = isinstance(f, Not)
        g = f.f if negated else f
        if not isinstance(g, PredApp) or type(g.arg) is not type(pattern.arg):
            return None
        s = _bind(s, pattern.pred, PredLit(g.pred, negated))
        if s is None:
            return None
        return _bind(s, pattern.arg.name, g.arg)
    if isinstance(pattern, _BINARY):
        if type(f) is not type(pattern):
            return None
        s = match(pattern.l, f.l, s)
        return None if s is None else match(pattern.r, f.r, s)
    if isinstance(pattern, _QUANT):
        if type(f) is not type(pattern):
            return None
        s = _bind(s, pattern.var, Var(f.var))
        return None if s is None else match(pattern.body, f.body, s)
    raise TypeError(f"not a pattern: {pattern!r}")


def match_all(patterns: Sequence[Formula], formulas: Sequence[Formula],
              s: Substitution | None = None) -> Substitution | None:
    if len(patterns) != len(formulas):
        return None
    s = {} if s is None else s
    for pat, f in zip(patterns, formulas):
        s = match(pat, f, s)
        if s is None:
            return None
    return s


FreshFn = Callable[[str, str], object]  # (kind, placeholder) -> binding


def instantiate(pattern: Formula, s: Substitution, fresh: FreshFn | None = None) -> Formula:
    """Apply ``s`` to ``pattern``.  Unbound placeholders are drawn from ``fresh``
    (and recorded in ``s``) or raise :class:`Unbound` when ``fresh`` is None."""

    def lookup(kind: str, key: str):
        if key in s:
            return s[key]
        if fresh is None:
            raise Unbound(key)
        value = fresh(kind, key)
        s[key] = value
        return value

    def go(p: Formula) -> Formula:
        if isinstance(p, Atom):
            return lookup("prop", p.name)
        if isinstance(p, Not):
            inner = go(p.f)
            return negate(inner) if isinstance(p.f, (Atom, PredApp)) else Not(inner)
        if isinstance(p, PredApp):
            lit = lookup("pred", p.pred)
            arg = lookup("var" if isinstance(p.arg, Var) else "const", p.arg.name)
            g = PredApp(lit.name, arg)
            return Not(g) if lit.negated else g
        if isinstance(p, _BINARY):
            return type(p)(go(p.l), go(p.r))
        if isinstance(p, _QUANT):
            return type(p)(lookup("var", p.var).name, go(p.body))
        raise TypeError(f"not a pattern: {p!r}")

    return go(pattern)


# ---------------------------------------------------------------------------
# Catalog construction

# (name, premises, inferences); contradictions are the negated inferences and
# the unrelated pair uses one placeholder the rule does not mention.
_PROPOSITIONAL = [
    ("modus ponens", ["p -> q", "p"], ["q"]),
    ("modus tollens", ["p -> q", "~q"], ["~p"]),
    ("hypothetical syllogism", ["p -> q", "q -> r"], ["p -> r"]),
    ("disjunctive syllogism", ["p or q", "~p"], ["q"]),
    ("disjunctive syllogism", ["p or q", "~q"], ["p"]),
    ("conjunction", ["p", "q"], ["p and q", "q and p"]),
    ("simplification", ["p and q"], ["p", "q"]),
    ("addition", ["p"], ["p or q", "q or p"]),
    ("resolution", ["p or q", "~p or r"], ["q or r"]),
    ("biconditional introduction", ["p -> q", "q -> p"], ["p <-> q"]),
    ("biconditional elimination", ["p <-> q"], ["p -> q", "q -> p"]),
    ("biconditional elimination", ["p <-> q", "~p"], ["~q"]),
    ("biconditional elimination", ["p <-> q", "~q"], ["~p"]),
    ("biconditional elimination", ["p <-> q", "p"], ["q"]),
    ("De Morgan", ["~(p or q)"], ["~p and ~q"]),
    ("De Morgan", ["~(p and q)"], ["~p or ~q"]),
    ("constructive dilemma", ["p -> r", "q -> r", "p or q"], ["r"]),
]

_BASE_QUANTIFIED = [
    InferenceRule(
        premises=(parse_formula("forall x: P(x)"),),
        inferences=(parse_formula("P(a)"),),
        contradictions=(parse_formula("~P(a)"),),
        unrelated=(parse_formula("Q(a)"), parse_formula("~Q(a)")),
        symbols=("P", "x", "a", "Q"),
        name="universal instantiation",
    ),
    InferenceRule(
        premises=(parse_formula("P(a)"),),
        inferences=(parse_formula("exists x: P(x)"),),
        contradictions=(parse_formula("forall x: ~P(x)"),),
        unrelated=(parse_formula("exists x: Q(x)"), parse_formula("exists x: ~Q(x)")),
        symbols=("P", "a", "x", "Q"),
        name="existential generalization",
    ),
]

_SPARE_PROPS = ("r", "s", "t", "u")


def _placeholders(formulas: Iterable[Formula]) -> tuple[str, ...]:
    inv = collect_symbols(*formulas)
    return inv.propositions + inv.predicates + inv.variables + inv.constants


def _make_propositional(name: str, premises: list[str], inferences: list[str]) -> InferenceRule:
    ps = tuple(parse_formula(t) for t in premises)
    inf = tuple(parse_formula(t) for t in inferences)
    used = set(collect_symbols(*ps, *inf).propositions)
    spare = next(p for p in _SPARE_PROPS if p not in used)
    unrelated = (Atom(spare), Not(Atom(spare)))
    return InferenceRule(
        premises=ps,
        inferences=inf,
        contradictions=tuple(negate(i) for i in inf),
        unrelated=unrelated,
        symbols=_placeholders(ps + inf + unrelated),
        name=name,
    )


def builtin_rules() -> list[InferenceRule]:
    """The 17 propositional rules followed by the 2 base quantified rules."""
    return [_make_propositional(*entry) for entry in _PROPOSITIONAL] + list(_BASE_QUANTIFIED)


def _lift(f: Formula) -> Formula:
    """``p`` -> ``P(x)`` throughout a propositional pattern."""
    if isinstance(f, Atom):
        return PredApp(f.name.upper(), Var("x"))
    if isinstance(f, Not):
        return Not(_lift(f.f))
    if isinstance(f, _BINARY):
        return type(f)(_lift(f.l), _lift(f.r))
    raise TypeError(f"unexpected pattern node {f!r}")


def _quantified_variant(rule: InferenceRule, existential_premise: int | None) -> InferenceRule:
    if existential_premise is None:
        premises = tuple(ForAll("x", _lift(p)) for p in rule.premises)
        conclude = ForAll
        name = f"universal {rule.name}"
    else:
        premises = tuple(
            (Exists if i == existential_premise else ForAll)("x", _lift(p))
            for i, p in enumerate(rule.premises)
        )
        conclude = Exists
        name = f"existential {rule.name}"
    inferences = tuple(conclude("x", _lift(i)) for i in rule.inferences)
    spare = rule.unrelated[0]
    unrelated = (conclude("x", _lift(spare)), conclude("x", _lift(negate(spare))))
    return InferenceRule(
        premises=premises,
        inferences=inferences,
        contradictions=tuple(negate(i) for i in inferences),
        unrelated=unrelated,
        symbols=_placeholders(premises + inferences + unrelated),
        name=name,
    )


def derive_quantified_rules(prop_rules: Sequence[InferenceRule], validate: bool = True) -> list[InferenceRule]:
    """One universal variant per rule, then one existential variant per choice
    of the premise that is existentially quantified (the rest stay universal).

    Variants are grouped by source rule, universal first.
    """
    derived = []
    for rule in prop_rules:
        derived.append(_quantified_variant(rule, None))
        for i in range(len(rule.premises)):
            derived.append(_quantified_variant(rule, i))
    if validate:
        for rule in derived:
            problems = validate_rule(rule)
            if problems:
                raise RuleValidationError(f"{rule.name}: {problems[0]}")
    return derived


def validate_rule(rule: InferenceRule, domain_sizes: Iterable[int] = (1, 2, 3)) -> list[str]:
    """Oracle-check the generic instance of ``rule``; returns failure messages."""
    from .semantics import Verdict, classify

    failures = []
    for d in domain_sizes:
        for group, expected in ((rule.inferences, Verdict.ENTAILED),
                                (rule.contradictions, Verdict.CONTRADICTED),
                                (rule.unrelated, Verdict.INDEPENDENT)):
            for f in group:
                got = classify(rule.premises, f, d)
                if got != expected:
                    failures.append(f"{render_formula(f)} is {got.value}, expected {expected.value} (d={d})")
    return failures


@lru_cache(maxsize=1)
def _catalog() -> tuple[InferenceRule, ...]:
    base = builtin_rules()
    return tuple(base + derive_quantified_rules(base[:17]))


def default_catalog() -> list[InferenceRule]:
    """All 66 rules: 17 propositional, 2 base quantified, 47 derived."""
    return list(_catalog())


def rules_named(name: str, rules: Sequence[InferenceRule] | None = None) -> list[InferenceRule]:
    return [r for r in (rules if rules is not None else _catalog()) if r.name == name]


# ---------------------------------------------------------------------------
# Using rules


def rule_instance_ok(rule: InferenceRule, premises: Sequence[Formula], conclusion: Formula) -> bool:
    """Is ``premises |- conclusion`` an instance of ``rule`` (premises in any order)?"""
    if len(premises) != len(rule.premises):
        return False
    for perm in itertools.permutations(premises):
        s = match_all(rule.premises, perm)
        if s is None:
            continue
        if any(match(i, conclusion, s) is not None for i in rule.inferences):
            return True
    return False


def apply_forward(rule: InferenceRule, candidates: Sequence[Formula],
                  fresh: FreshFn | None = None) -> list[tuple[Formula, Substitution]]:
    """Conclusions of ``rule`` applied to ``candidates`` in the given order.

    Inferences needing a placeholder the premises do not bind are dropped
    unless ``fresh`` supplies new symbols.
    """
    s = match_all(rule.premises, candidates)
    if s is None:
        return []
    out = []
    for pattern in rule.inferences:
        binding = dict(s)
        try:
            out.append((instantiate(pattern, binding, fresh), binding))
        except Unbound:
            continue
    return out


class Derivation(NamedTuple):
    conclusion: Formula
    rule_index: int
    premise_indices: tuple[int, ...]
    inference_index: int
    rule_name: str


def one_step_derivations(premises: Sequence[Formula], rules: Sequence[InferenceRule]) -> list[Derivation]:
    """Every single-rule application over distinct premises, in
    (rule, premise-index tuple, inference) order.  No fresh symbols."""
    out = []
    n = len(premises)
    for ri, rule in enumerate(rules):
        k = len(rule.premises)
        if k > n:
            continue

        def extend(pos: int, used: tuple[int, ...], s: Substitution):
            if pos == k:
                for ii, pattern in enumerate(rule.inferences):
                    try:
                        c = instantiate(pattern, dict(s))
                    except Unbound:
                        continue
                    out.append(Derivation(c, ri, used, ii, rule.name))
                return
            for j in range(n):
                if j in used:
                    continue
                s2 = match(rule.premises[pos], premises[j], s)
                if s2 is not None:
                    extend(pos + 1, used + (j,), s2)

        extend(0, (), {})
    return out


class BackwardMatch(NamedTuple):
    rule: InferenceRule
    substitution: Substitution
    new_premises: tuple[Formula, ...]


class FreshNamer:
    """Names fresh symbols ``<placeholder>_<step>`` avoiding ``existing``.

    Variable placeholders reuse ``variable`` when the problem already has one.
    """

    def __init__(self, step: int, existing: Iterable[str] = (), variable: str | None = None):
        self.step = step
        self.existing = set(existing)
        self.variable = variable

    def _name(self, base: str) -> str:
        name = f"{base}_{self.step}"
        extra = 1
        while name in self.existing:
            name = f"{base}_{self.step}{extra}"
            extra += 1
        self.existing.add(name)
        return name

    def __call__(self, kind: str, placeholder: str):
        if kind == "prop":
            return Atom(self._name(placeholder))
        if kind == "pred":
            return PredLit(self._name(placeholder))
        if kind == "const":
            return Const(self._name(placeholder))
        if kind == "var":
            if self.variable is None:
                self.variable = self._name("x")
            return Var(self.variable)
        raise ValueError(kind)


def backward_candidates(rules: Sequence[InferenceRule], target: Formula, *,
                        avoid: Iterable[Formula] = (), step: int = 1,
                        existing: Iterable[str] = (), variable: str | None = None) -> list[BackwardMatch]:
    """All ways some rule could have produced ``target``.

    Placeholders the match leaves open get fresh names.  Matches whose new
    premises repeat each other, ``target``, or anything in ``avoid`` are skipped.
    """
    avoid = set(avoid)
    existing = set(existing)
    out = []
    for rule in rules:
        for pattern in rule.inferences:
            s = match(pattern, target)
            if s is None:
                continue
            namer = FreshNamer(step, existing, variable)
            binding = dict(s)
            new = tuple(instantiate(p, binding, namer) for p in rule.premises)
            if len(set(new)) != len(new) or target in new or any(p in avoid for p in new):
                continue
            out.append(BackwardMatch(rule, binding, new))
    return out


def match_backward(rules: Sequence[InferenceRule], target: Formula, rng: random.Random, *,
                   avoid: Iterable[Formula] = (), step: int = 1,
                   existing: Iterable[str] = (), variable: str | None = None) -> BackwardMatch | None:
    """Uniformly random rule application that concludes ``target``, or None."""
    candidates = backward_candidates(rules, target, avoid=avoid, step=step,
                                     existing=existing, variable=variable)
    if not candidates:
        return None
    return rng.choice(candidates)
