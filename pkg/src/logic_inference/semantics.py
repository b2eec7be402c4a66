"""Semantic oracle: truth-table entailment and chain verification.

Quantified formulas are grounded over a finite domain made of the constants
already mentioned plus ``domain_size`` anonymous elements, after which the
propositional procedure applies.  Truth tables are evaluated bit-parallel: each
ground atom is a packed column of ``2**n`` bits held in a numpy ``uint64`` array.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from .formula import (
    And, Atom, Const, Exists, ForAll, Formula, Iff, Implies, Not, Or, PredApp,
    collect_symbols, iter_subformulas, negate, render_formula, substitute_var,
)

MAX_ATOMS = 24


class OracleLimitError(ValueError):
    """Grounded problem has more atoms than the truth table allows."""


class Verdict(str, enum.Enum):
    ENTAILED = "entailed"
    CONTRADICTED = "contradicted"
    INDEPENDENT = "independent"
    PREMISES_INCONSISTENT = "premises_inconsistent"


# ---------------------------------------------------------------------------
# Grounding


def _fresh_elements(existing: set[str], n: int) -> list[str]:
    out = []
    i = 1
    while len(out) < n:
        name = f"d{i}"
        if name not in existing:
            out.append(name)
        i += 1
    return out


def domain_for(formulas: Iterable[Formula], domain_size: int) -> list[str]:
    consts = list(collect_symbols(*formulas).constants)
    return consts + _fresh_elements(set(consts), domain_size)


def ground(f: Formula, domain: Sequence[str]) -> Formula:
    """Replace quantifiers by finite conjunctions / disjunctions over ``domain``."""
    if isinstance(f, (ForAll, Exists)):
        parts = [ground(substitute_var(f.body, f.var, c), domain) for c in domain]
        op = And if isinstance(f, ForAll) else Or
        out = parts[0]
        for p in parts[1:]:
            out = op(out, p)
        return out
    if isinstance(f, Not):
        return Not(ground(f.f, domain))
    if isinstance(f, (And, Or, Implies, Iff)):
        return type(f)(ground(f.l, domain), ground(f.r, domain))
    return f


# ---------------------------------------------------------------------------
# Packed truth tables


@lru_cache(maxsize=None)
def _columns(n: int) -> tuple[np.ndarray, np.ndarray]:
    """Bit columns for ``n`` atoms, plus the mask of valid rows."""
    words = max(1, (1 << n) // 64)
    cols = np.zeros((max(n, 1), words), dtype=np.uint64)
    word_idx = np.arange(words, dtype=np.uint64)
    for i in range(n):
        if i < 6:
            pattern = 0
            for bit in range(64):
                if (bit >> i) & 1:
                    pattern |= 1 << bit
            cols[i, :] = np.uint64(pattern)
        else:
            on = ((word_idx >> np.uint64(i - 6)) & np.uint64(1)).astype(bool)
            cols[i, on] = np.uint64(0xFFFFFFFFFFFFFFFF)
    mask = np.full(words, np.uint64(0xFFFFFFFFFFFFFFFF), dtype=np.uint64)
    if n < 6:
        mask[0] = np.uint64((1 << (1 << n)) - 1)
    cols.setflags(write=False)
    mask.setflags(write=False)
    return cols, mask


class TruthTable:
    """Evaluates ground formulas over all assignments to a fixed atom list."""

    def __init__(self, atoms: Sequence[object]):
        if len(atoms) > MAX_ATOMS:
            raise OracleLimitError(f"{len(atoms)} ground atoms exceed the limit of {MAX_ATOMS}")
        self.index = {a: i for i, a in enumerate(atoms)}
        self.cols, self.mask = _columns(len(atoms))

    def eval(self, f: Formula) -> np.ndarray:
        if isinstance(f, (Atom, PredApp)):
            return self.cols[self.index[_atom_key(f)]]
        if isinstance(f, Not):
            return ~self.eval(f.f)
        a = self.eval(f.l)
        b = self.eval(f.r)
        if isinstance(f, And):
            return a & b
        if isinstance(f, Or):
            return a | b
        if isinstance(f, Implies):
            return ~a | b
        if isinstance(f, Iff):
            return ~(a ^ b)
        raise TypeError(f"cannot evaluate {f!r}")

    def conj(self, formulas: Iterable[Formula]) -> np.ndarray:
        out = self.mask.copy()
        for f in formulas:
            out &= self.eval(f)
        return out

    def any(self, bits: np.ndarray) -> bool:
        return bool(np.any(bits & self.mask))


def _atom_key(f: Formula) -> object:
    if isinstance(f, Atom):
        return ("prop", f.name)
    if isinstance(f, PredApp):
        if not isinstance(f.arg, Const):
            raise ValueError(f"free variable in {render_formula(f)!r}")
        return (f.pred, f.arg.name)
    raise TypeError(f)


def _ground_atoms(formulas: Iterable[Formula]) -> list[object]:
    seen: dict[object, None] = {}
    for f in formulas:
        for sub in iter_subformulas(f):
            if isinstance(sub, (Atom, PredApp)):
                seen.setdefault(_atom_key(sub))
    return list(seen)


def _table(formulas: Sequence[Formula], domain_size: int) -> tuple[TruthTable, list[Formula]]:
    if domain_size < 1:
        raise ValueError("domain_size must be >= 1")
    domain = domain_for(formulas, domain_size)
    grounded = [ground(f, domain) for f in formulas]
    return TruthTable(_ground_atoms(grounded)), grounded


def is_quantified(formulas: Iterable[Formula]) -> bool:
    return any(isinstance(sub, (ForAll, Exists, PredApp))
               for f in formulas for sub in iter_subformulas(f))


def ground_atom_count(formulas: Sequence[Formula], domain_size: int = 3) -> int:
    domain = domain_for(formulas, domain_size)
    return len(_ground_atoms(ground(f, domain) for f in formulas))


def consistent(premises: Sequence[Formula], domain_size: int = 1) -> bool:
    table, grounded = _table(list(premises), domain_size)
    return table.any(table.conj(grounded))


def classify(premises: Sequence[Formula], query: Formula, domain_size: int = 1) -> Verdict:
    premises = list(premises)
    table, grounded = _table(premises + [query], domain_size)
    models = table.conj(grounded[:-1])
    if not table.any(models):
        return Verdict.PREMISES_INCONSISTENT
    q = table.eval(grounded[-1])
    if not table.any(models & ~q):
        return Verdict.ENTAILED
    if not table.any(models & q):
        return Verdict.CONTRADICTED
    return Verdict.INDEPENDENT


def classify_all_sizes(premises: Sequence[Formula], query: Formula,
                       sizes: Iterable[int] = (1, 2, 3)) -> dict[int, Verdict]:
    """Verdict per domain size; propositional inputs are evaluated once."""
    sizes = list(sizes)
    if not is_quantified(list(premises) + [query]):
        v = classify(premises, query, 1)
        return {d: v for d in sizes}
    return {d: classify(premises, query, d) for d in sizes}


# ---------------------------------------------------------------------------
# Inference chains


@dataclass(frozen=True)
class Step:
    premises: tuple[Formula, ...]
    conclusion: Formula
    rule: str


@dataclass(frozen=True)
class InferenceChain:
    """Proof (``disproof=False``) or refutation of ``conclusion``.

    A refutation's last step derives ``negate(conclusion)``.
    """

    conclusion: Formula
    steps: tuple[Step, ...] = field(default=())
    disproof: bool = False

    @property
    def goal(self) -> Formula:
        return negate(self.conclusion) if self.disproof else self.conclusion

    def __len__(self) -> int:
        return len(self.steps)


@dataclass(frozen=True)
class ChainCheck:
    ok: bool
    index: int | None = None
    reason: str = ""

    def __bool__(self) -> bool:
        return self.ok


def verify_chain(premises: Sequence[Formula], chain: InferenceChain, rules) -> ChainCheck:
    """Check that every step is an instance of its named rule and only uses
    premises or earlier conclusions, and that the chain reaches its goal."""
    from .rules import rule_instance_ok

    by_name: dict[str, list] = {}
    for r in rules:
        by_name.setdefault(r.name, []).append(r)
    available = set(premises)
    for i, step in enumerate(chain.steps):
        missing = [p for p in step.premises if p not in available]
        if missing:
            return ChainCheck(False, i, f"premise {render_formula(missing[0])!r} not available")
        candidates = by_name.get(step.rule)
        if not candidates:
            return ChainCheck(False, i, f"unknown rule {step.rule!r}")
        if not any(rule_instance_ok(r, step.premises, step.conclusion) for r in candidates):
            return ChainCheck(False, i, f"step does not instantiate {step.rule!r}")
        available.add(step.conclusion)
    if not chain.steps:
        if chain.goal in available:
            return ChainCheck(True)
        return ChainCheck(False, None, "empty chain and goal is not a premise")
    if chain.steps[-1].conclusion != chain.goal:
        return ChainCheck(False, len(chain.steps) - 1, "last step does not reach the goal")
    return ChainCheck(True)
