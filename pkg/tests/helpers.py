"""Seeded random formulas for property tests."""

from __future__ import annotations

import random

from logic_inference.formula import And, Atom, Const, Exists, ForAll, Iff, Implies, Not, Or, PredApp, Var

PROPS = [f"{c}{s}" for c in "pqrstuvw" for s in ("", "_1", "_2", "_13")]
PREDS = [f"{c}{s}" for c in "PQRSTUVW" for s in ("", "_1", "_2")]
CONSTS = [f"{c}{s}" for c in "abcdefgh" for s in ("", "_1", "_4")]
VARS = ["x", "x_1", "x_2", "x_10"]


def random_body(rng: random.Random, depth: int, var: str | None):
    if depth == 0 or rng.random() < 0.3:
        kind = rng.random()
        if var is not None and kind < 0.5:
            leaf = PredApp(rng.choice(PREDS), Var(var))
        elif kind < 0.75:
            leaf = Atom(rng.choice(PROPS))
        else:
            leaf = PredApp(rng.choice(PREDS), Const(rng.choice(CONSTS)))
        return Not(leaf) if rng.random() < 0.3 else leaf
    op = rng.choice((And, Or, Implies, Iff, Not))
    if op is Not:
        return Not(random_body(rng, depth - 1, var))
    return op(random_body(rng, depth - 1, var), random_body(rng, depth - 1, var))


def random_formula(rng: random.Random, max_depth: int = 4):
    """A clause of the fragment: an optional prenex quantifier over a
    quantifier-free body."""
    r = rng.random()
    if r < 0.4:
        var = rng.choice(VARS)
        q = ForAll if r < 0.2 else Exists
        return q(var, random_body(rng, max_depth, var))
    return random_body(rng, max_depth, None)
