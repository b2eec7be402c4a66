"""Templated natural-language rendering of formulas.

Propositions become "<subject> <predicate>", "<subject> <action>" or an
impersonal clause ("it is raining"); predicates become predicate/action
phrases whose subject is a constant's name or the bare variable.  Every
lexicon entry carries explicit surface forms for the four modes it is used in,
so output is bit-stable without any morphology.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .formula import (
    And, Atom, Exists, ForAll, Formula, Iff, Implies, Not, Or, PredApp, Var,
    SymbolInventory, collect_symbols, rename_many,
)


class PoolExhausted(ValueError):
    pass


class UnmappedSymbol(KeyError):
    pass


@dataclass(frozen=True)
class LexEntry:
    present: str
    conditional: str
    negated: str
    negated_conditional: str
    plural: str = ""
    noun: bool = False

    def form(self, negated: bool, conditional: bool) -> str:
        if negated:
            return self.negated_conditional if conditional else self.negated
        return self.conditional if conditional else self.present


def adjective(word: str) -> LexEntry:
    return LexEntry(f"is {word}", f"were {word}", f"is not {word}", f"were not {word}", word)


def noun(phrase: str, plural: str) -> LexEntry:
    return LexEntry(f"is {phrase}", f"were {phrase}", f"is not {phrase}", f"were not {phrase}",
                    plural, noun=True)


def action(progressive: str, third_person: str, base: str) -> LexEntry:
    return LexEntry(f"is {progressive}", third_person, f"is not {progressive}",
                    f"does not {base}", progressive)


def weather(present: str, conditional: str, negated: str, negated_conditional: str) -> LexEntry:
    return LexEntry(present, conditional, negated, negated_conditional)


_SUBJECTS = (
    "James", "Robert", "John", "Michael", "William", "David", "Richard", "Joseph", "Thomas", "Charles",
    "Mary", "Patricia", "Jennifer", "Linda", "Elisabeth", "Barbara", "Susan", "Jessica", "Sarah", "Karen",
)

_PREDICATES = tuple(adjective(w) for w in (
    "rich", "happy", "sad", "poor", "tired", "excited", "bored", "busy", "curious", "fast",
    "hungry", "sick", "angry", "famous",
)) + tuple(noun(p, pl) for p, pl in (
    ("an astronaut", "astronauts"), ("an electrician", "electricians"), ("a lawyer", "lawyers"),
    ("a doctor", "doctors"), ("a nurse", "nurses"), ("a musician", "musicians"),
    ("a writer", "writers"), ("a poet", "poets"), ("a carpenter", "carpenters"),
    ("a mechanic", "mechanics"), ("a police officer", "police officers"),
    ("a scientist", "scientists"), ("a bartender", "bartenders"), ("a server", "servers"),
    ("a cashier", "cashiers"), ("a sailor", "sailors"),
))

_ACTIONS = tuple(action(*forms) for forms in (
    ("playing squash", "plays squash", "play squash"),
    ("working", "works", "work"),
    ("climbing a mountain", "climbs a mountain", "climb a mountain"),
    ("making tea", "makes tea", "make tea"),
    ("playing tennis", "plays tennis", "play tennis"),
    ("reading a book", "reads a book", "read a book"),
    ("cooking", "cooks", "cook"),
    ("writing a letter", "writes a letter", "write a letter"),
    ("sleeping", "sleeps", "sleep"),
    ("drinking water", "drinks water", "drink water"),
    ("listening to a song", "listens to a song", "listen to a song"),
    ("taking a plane", "takes a plane", "take a plane"),
    ("driving a car", "drives a car", "drive a car"),
    ("running", "runs", "run"),
    ("playing a game", "plays a game", "play a game"),
))

_IMPERSONAL = (
    weather("is raining", "rains", "is not raining", "does not rain"),
    weather("is snowing", "snows", "is not snowing", "does not snow"),
    weather("is cloudy", "is cloudy", "is not cloudy", "is not cloudy"),
    weather("is sunny", "is sunny", "is not sunny", "is not sunny"),
    weather("is windy", "is windy", "is not windy", "is not windy"),
    weather("is overcast", "is overcast", "is not overcast", "is not overcast"),
    weather("is cold", "is cold", "is not cold", "is not cold"),
    weather("is late", "is late", "is not late", "is not late"),
)


@dataclass(frozen=True)
class Lexicon:
    subjects: tuple[str, ...] = _SUBJECTS
    predicates: tuple[LexEntry, ...] = _PREDICATES
    actions: tuple[LexEntry, ...] = _ACTIONS
    impersonal: tuple[LexEntry, ...] = _IMPERSONAL

    def __post_init__(self):
        for name, pool in (("subjects", self.subjects), ("predicates", self.predicates),
                           ("actions", self.actions), ("impersonal", self.impersonal)):
            if len(set(pool)) != len(pool):
                raise ValueError(f"duplicate {name} in lexicon")

    @classmethod
    def from_dict(cls, d: Mapping) -> "Lexicon":
        return cls(
            subjects=tuple(d["subjects"]),
            predicates=tuple(LexEntry(**e) for e in d["predicates"]),
            actions=tuple(LexEntry(**e) for e in d["actions"]),
            impersonal=tuple(LexEntry(**e) for e in d["impersonal"]),
        )

    @classmethod
    def load(cls, path) -> "Lexicon":
        with open(path, encoding="utf-8") as fh:
            return cls.from_dict(json.load(fh))

    def to_dict(self) -> dict:
        def entries(pool):
            return [e.__dict__.copy() for e in pool]

        return {"subjects": list(self.subjects), "predicates": entries(self.predicates),
                "actions": entries(self.actions), "impersonal": entries(self.impersonal)}


DEFAULT_LEXICON = Lexicon()


# ---------------------------------------------------------------------------
# Assignment

SUBJECT_PREDICATE = "subject predicate"
SUBJECT_ACTION = "subject verb-action"
IMPERSONAL = "impersonal-action"


@dataclass(frozen=True)
class Phrase:
    kind: str
    entry: LexEntry
    subject: str | None = None


@dataclass
class LexAssignment:
    propositions: dict[str, Phrase] = field(default_factory=dict)
    predicates: dict[str, Phrase] = field(default_factory=dict)
    constants: dict[str, str] = field(default_factory=dict)


def assign_lexicon(inv: SymbolInventory, rng: random.Random, lexicon: Lexicon = DEFAULT_LEXICON) -> LexAssignment:
    """Sample phrases for every symbol, without replacement within the example."""
    subjects = list(lexicon.subjects)
    entries = [(SUBJECT_PREDICATE, e) for e in lexicon.predicates] + [(SUBJECT_ACTION, e) for e in lexicon.actions]
    impersonal = list(lexicon.impersonal)
    rng.shuffle(subjects)
    rng.shuffle(entries)
    rng.shuffle(impersonal)

    def pop(pool, what):
        if not pool:
            raise PoolExhausted(f"lexicon has too few {what} for this example")
        return pool.pop()

    out = LexAssignment()
    for c in inv.constants:
        out.constants[c] = pop(subjects, "subjects")
    for p in inv.predicates:
        kind, entry = pop(entries, "predicates/actions")
        out.predicates[p] = Phrase(kind, entry)
    for a in inv.propositions:
        kinds = []
        if subjects and any(k == SUBJECT_PREDICATE for k, _ in entries):
            kinds.append(SUBJECT_PREDICATE)
        if subjects and any(k == SUBJECT_ACTION for k, _ in entries):
            kinds.append(SUBJECT_ACTION)
        if impersonal:
            kinds.append(IMPERSONAL)
        if not kinds:
            raise PoolExhausted("lexicon has too few entries for this example")
        kind = rng.choice(kinds)
        if kind == IMPERSONAL:
            out.propositions[a] = Phrase(kind, impersonal.pop())
        else:
            i = max(i for i, (k, _) in enumerate(entries) if k == kind)
            out.propositions[a] = Phrase(kind, entries.pop(i)[1], subjects.pop())
    return out


# ---------------------------------------------------------------------------
# Rendering


def _literal(f: Formula, a: LexAssignment, conditional: bool) -> str:
    negated = isinstance(f, Not)
    g = f.f if negated else f
    if isinstance(g, Atom):
        phrase = a.propositions.get(g.name)
        if phrase is None:
            raise UnmappedSymbol(g.name)
        subject = "it" if phrase.kind == IMPERSONAL else phrase.subject
        return f"{subject} {phrase.entry.form(negated, conditional)}"
    phrase = a.predicates.get(g.pred)
    if phrase is None:
        raise UnmappedSymbol(g.pred)
    if isinstance(g.arg, Var):
        subject = g.arg.name
    else:
        subject = a.constants.get(g.arg.name)
        if subject is None:
            raise UnmappedSymbol(g.arg.name)
    return f"{subject} {phrase.entry.form(negated, conditional)}"


def _some_are(f: Exists, a: LexAssignment) -> str | None:
    body = f.body
    if not (isinstance(body, And) and isinstance(body.l, PredApp) and isinstance(body.r, PredApp)):
        return None
    left = a.predicates.get(body.l.pred)
    right = a.predicates.get(body.r.pred)
    if left is None or right is None or not left.entry.noun:
        return None
    return f"some {left.entry.plural} are {right.entry.plural}"


def render_clause(f: Formula, a: LexAssignment, conditional: bool = False) -> str:
    """Lower-case clause for ``f`` (names keep their capital)."""
    if isinstance(f, (Atom, PredApp)) or (isinstance(f, Not) and isinstance(f.f, (Atom, PredApp))):
        return _literal(f, a, conditional)
    if isinstance(f, Not):
        return f"it is not the case that {render_clause(f.f, a)}"
    if isinstance(f, And):
        return f"{render_clause(f.l, a, conditional)} and {render_clause(f.r, a, conditional)}"
    if isinstance(f, Or):
        return f"{render_clause(f.l, a, conditional)} or {render_clause(f.r, a, conditional)}"
    if isinstance(f, Implies):
        return f"if {render_clause(f.l, a, True)}, then {render_clause(f.r, a)}"
    if isinstance(f, Iff):
        return f"{render_clause(f.l, a)} if and only if {render_clause(f.r, a)}"
    if isinstance(f, ForAll):
        return f"for all {f.var}, {render_clause(f.body, a)}"
    if isinstance(f, Exists):
        special = _some_are(f, a)
        if special is not None:
            return special
        return f"there is at least one {f.var} for which {render_clause(f.body, a)}"
    raise TypeError(f"not a formula: {f!r}")


def sentence(text: str) -> str:
    return text[:1].upper() + text[1:] + "."


def render_nl(f: Formula, a: LexAssignment, as_sentence: bool = True) -> str:
    clause = render_clause(f, a)
    return sentence(clause) if as_sentence else clause


# ---------------------------------------------------------------------------
# Canonical naming

_CANON_PROPS = "pqrstuvw"
_CANON_PREDS = "PQRSTUVW"
_CANON_CONSTS = "abcdefgh"


def _canonical(letters: str, i: int) -> str:
    letter = letters[i % len(letters)]
    round_ = i // len(letters)
    return letter if round_ == 0 else f"{letter}_{round_}"


def canonical_mapping(formulas: Sequence[Formula]) -> dict[str, str]:
    inv = collect_symbols(*formulas)
    mapping = {}
    for names, letters in ((inv.propositions, _CANON_PROPS), (inv.predicates, _CANON_PREDS),
                           (inv.constants, _CANON_CONSTS)):
        mapping.update({n: _canonical(letters, i) for i, n in enumerate(names)})
    return mapping


def canonicalize_type1(formulas: Sequence[Formula]) -> list[Formula]:
    """Rename by first appearance: propositions p, q, r, ...; predicates P, Q, R,
    ...; constants a, b, c, ....  Variables keep their names."""
    return rename_many(list(formulas), canonical_mapping(formulas))
