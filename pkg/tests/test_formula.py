import random

import pytest
from hypothesis import given, settings, strategies as st

from helpers import random_formula
from logic_inference.formula import (
    And, Atom, Const, Exists, ForAll, Iff, Implies, Not, Or, ParseError, PredApp, RenameError, Var,
    collect_symbols, negate, parse_formula, render_formula, rename_many, rename_symbols, substitute_var,
)


@pytest.mark.parametrize("text", [
    "p -> q",
    "p_2 <-> q",
    "~p",
    "p and q",
    "p or q or r",
    "forall x_2: Q(x_2) and P_2(x_2)",
    "exists x_2: P_2(x_2) -> Q_2(x_2)",
    "exists x: P(x) -> Q(a)",
    "~(p and q)",
    "(p -> q) -> r",
    "p -> q -> r",
    "(p or q) and r",
    "~~p",
    "forall x: ~(P(x) or Q(x))",
])
def test_round_trip_examples(text):
    assert render_formula(parse_formula(text)) == text


def test_precedence_and_associativity():
    assert parse_formula("p -> q -> r") == Implies(Atom("p"), Implies(Atom("q"), Atom("r")))
    assert parse_formula("~p and q") == And(Not(Atom("p")), Atom("q"))
    assert parse_formula("p and q -> r") == Implies(And(Atom("p"), Atom("q")), Atom("r"))
    assert parse_formula("p <-> q -> r") == Iff(Atom("p"), Implies(Atom("q"), Atom("r")))


def test_quantifier_scope_runs_to_end_of_clause():
    f = parse_formula("forall x: P(x) -> Q(x)")
    assert f == ForAll("x", Implies(PredApp("P", Var("x")), PredApp("Q", Var("x"))))


def test_minimal_parentheses():
    assert render_formula(Implies(Implies(Atom("p"), Atom("q")), Atom("r"))) == "(p -> q) -> r"
    assert render_formula(And(Or(Atom("p"), Atom("q")), Atom("r"))) == "(p or q) and r"
    assert render_formula(Not(And(Atom("p"), Atom("q")))) == "~(p and q)"


@pytest.mark.parametrize("bad", [
    "p and q or r",
    "p ->",
    "P(x)",
    "forall x: P(x) and forall x: Q(x)",
    "p and (forall x: P(x))",
    "(p",
    "p q",
    "",
    "forall x: exists x: P(x)",
])
def test_parse_errors(bad):
    with pytest.raises(ParseError):
        parse_formula(bad)


def test_parse_error_reports_position():
    with pytest.raises(ParseError) as info:
        parse_formula("p -> -> q")
    assert info.value.position == 5


def test_negate_collapses_and_pushes_through_quantifiers():
    p = Atom("p")
    assert negate(p) == Not(p)
    assert negate(Not(p)) == p
    f = parse_formula("forall x: P(x)")
    assert negate(f) == parse_formula("exists x: ~P(x)")
    assert negate(negate(f)) == f


def test_collect_symbols_first_occurrence_order():
    inv = collect_symbols(parse_formula("q -> P(a)"), parse_formula("forall x_1: R(x_1) or p"))
    assert inv.propositions == ("q", "p")
    assert inv.predicates == ("P", "R")
    assert inv.constants == ("a",)
    assert inv.variables == ("x_1",)


def test_rename_is_simultaneous():
    fs = [parse_formula("p -> q"), parse_formula("q")]
    assert rename_many(fs, {"p": "q", "q": "p"}) == [parse_formula("q -> p"), parse_formula("p")]


def test_rename_rejects_merging_and_class_changes():
    f = parse_formula("p -> q")
    with pytest.raises(RenameError):
        rename_symbols(f, {"p": "q"})
    with pytest.raises(RenameError):
        rename_symbols(parse_formula("P(a)"), {"P": "p"})
    with pytest.raises(RenameError):
        rename_symbols(parse_formula("forall x: P(x)"), {"x": "a"})


def test_substitute_var():
    f = parse_formula("forall x: P(x) -> Q(x)")
    assert substitute_var(f.body, "x", "b") == Implies(PredApp("P", Const("b")), PredApp("Q", Const("b")))


def test_seeded_random_round_trip():
    rng = random.Random(1)
    for _ in range(2000):
        f = random_formula(rng)
        assert parse_formula(render_formula(f)) == f


@settings(max_examples=300, deadline=None)
@given(st.integers(min_value=0, max_value=2**32))
def test_round_trip_property(seed):
    f = random_formula(random.Random(seed), max_depth=5)
    text = render_formula(f)
    assert parse_formula(text) == f
    assert render_formula(parse_formula(text)) == text
