import random

import pytest

from golden import FLIP, GOLDEN
from logic_inference.formula import parse_formula as P
from logic_inference.synthesis import GenerationConfig, enumerate_one_step, make_variations
from logic_inference.tasks import (
    CONTRADICTORY_ANSWER, CORNER_CONTRADICTORY, CORNER_NONE, CORNER_OBVIOUS, CORNER_UNRELATED, END_NO, END_YES,
    NO_CHAIN, OBVIOUS_ANSWER, TYPE2_NOTHING, UNRELATED_ANSWER, YES_CHAIN, Example, answer_flip,
    closure_derivations, make_example, ordered_closure, query_for, select_query,
)
from logic_inference.dataset import validate_example


@pytest.mark.parametrize("ptype", list(GOLDEN))
def test_reference_examples(ptype):
    g = GOLDEN[ptype]
    e = make_example(g["problem"], ptype, "begin", random.Random(0), shuffle=False, **g["kwargs"])
    assert e.input == g["input"]
    assert e.output == g["output"]


def test_refutation_begin_and_end_forms():
    for position in ("begin", "end"):
        e = make_example(FLIP["problem"], "3a", position, random.Random(0), shuffle=False, **FLIP["kwargs"])
        assert e.input == FLIP["input"]
        assert e.output == FLIP[position]
    begin = make_example(FLIP["problem"], "3a", "begin", shuffle=False, **FLIP["kwargs"])
    end = answer_flip(begin)
    assert end.output == FLIP["end"] and end.input == begin.input and end.answer_position == "end"
    assert answer_flip(end) == begin


def test_corner_case_strings():
    assert OBVIOUS_ANSWER == "Yes, that is one of the premises."
    assert UNRELATED_ANSWER == "No, we cannot infer that from the premises."
    assert CONTRADICTORY_ANSWER == "Yes, the premises are contradictory, so we can infer anything from them."
    g = GOLDEN["3a"]
    p = g["problem"]
    unrelated = p.__class__(p.premises, p.inferences, (), (P("r"), P("~r")))
    e = make_example(unrelated, "3a", query=P("r"), shuffle=False)
    assert e.output == UNRELATED_ANSWER and e.corner_case == CORNER_UNRELATED
    e = make_example(unrelated, "3a", query=P("q_2"), shuffle=False)
    assert e.output == OBVIOUS_ANSWER and e.corner_case == CORNER_OBVIOUS
    contradictory = p.__class__(p.premises + (P("~q_2"),), p.inferences, (), (P("r"),), is_contradictory=True)
    e = make_example(contradictory, "3a", query=P("r"), shuffle=False)
    assert e.output == CONTRADICTORY_ANSWER and e.corner_case == CORNER_CONTRADICTORY


def test_corner_outputs_survive_flip():
    e = make_example(GOLDEN["3b"]["problem"], "3b", shuffle=False, **GOLDEN["3b"]["kwargs"])
    flipped = answer_flip(e)
    assert flipped.output == e.output and flipped.answer_position == "end"
    assert answer_flip(flipped) == e


def test_flip_rejects_other_types():
    e = make_example(GOLDEN["1"]["problem"], "1", shuffle=False, **GOLDEN["1"]["kwargs"])
    with pytest.raises(ValueError):
        answer_flip(e)


def test_query_for_unknown_formula():
    with pytest.raises(ValueError):
        query_for(GOLDEN["3a"]["problem"], P("zzz"))


def test_empty_closure_message():
    from logic_inference.synthesis import InferenceProblem

    e = make_example(InferenceProblem((P("p -> q"),), (), (), ()), "2a", name_rules=False, shuffle=False)
    assert e.output == TYPE2_NOTHING


def test_select_query_rates(problems_200):
    rng = random.Random(0)
    kinds = {}
    clean = [p for p in problems_200 if not p.is_contradictory]
    for i in range(4000):
        q = select_query(clean[i % len(clean)], rng, 0.05, 0.10)
        kinds[q.kind] = kinds.get(q.kind, 0) + 1
    assert 0.03 < kinds[CORNER_OBVIOUS] / 4000 < 0.13  # includes problems whose targets are premises
    assert 0.07 < kinds[CORNER_UNRELATED] / 4000 < 0.13


def test_ordered_closure_matches_direct_enumeration(problems_200, catalog):
    rng = random.Random(0)
    for p in problems_200[:80]:
        derivs = closure_derivations(p.premises, catalog)
        order = list(range(len(p.premises)))
        rng.shuffle(order)
        presented = [p.premises[i] for i in order]
        assert ordered_closure(presented, derivs, order) == enumerate_one_step(presented, catalog)


@pytest.mark.parametrize("ptype", ["1", "2a", "2b", "3a", "3b"])
@pytest.mark.parametrize("position", ["begin", "end"])
def test_generated_examples_are_faithful(problems_200, catalog, ptype, position):
    rng = random.Random(f"{ptype}/{position}")
    for p in problems_200[:70]:
        e = make_example(p, ptype, position, rng, rules=catalog)
        validate_example(e, catalog)
        if ptype in ("3a", "3b") and e.corner_case == CORNER_NONE:
            if position == "begin":
                assert e.output.split()[0] in ("Yes,", "No,")
            else:
                assert e.output.endswith((END_YES, END_NO))
            assert answer_flip(answer_flip(e)) == e


def test_answer_invariant_under_shuffle_and_renaming(problems_200, catalog):
    config = GenerationConfig()
    for p in problems_200[:40]:
        for chain in p.inferences + p.contradictions:
            if not chain.steps or p.is_contradictory:
                continue
            base = make_example(p, "3a", rng=random.Random(0), query=chain.conclusion, config=config)
            for v in make_variations(p, 3, random.Random(1)):
                target = v.contradictions if chain.disproof else v.inferences
                idx = (p.contradictions if chain.disproof else p.inferences).index(chain)
                e = make_example(v, "3a", rng=random.Random(2), query=target[idx].conclusion, config=config)
                assert e.output.startswith(NO_CHAIN if chain.disproof else YES_CHAIN)
                assert base.output.startswith(NO_CHAIN if chain.disproof else YES_CHAIN)
            break


def test_closure_multiset_invariant_under_shuffle(problems_200, catalog):
    for p in problems_200[:30]:
        outputs = set()
        for seed in range(4):
            e = make_example(p, "2a", rng=random.Random(seed), name_rules=True, rules=catalog)
            outputs.add(frozenset(s.strip() for s in e.output.split(" rule.") if s.strip()))
        assert len(outputs) == 1


def test_one_assignment_per_nl_example(problems_200):
    for p in problems_200[:50]:
        e = make_example(p, "3b", rng=random.Random(p.problem_id))
        assert e.logic is not None and e.logic["premises"]


def test_example_dict_round_trip():
    e = make_example(GOLDEN["2b"]["problem"], "2b", shuffle=False, **GOLDEN["2b"]["kwargs"])
    assert Example.from_dict(e.to_dict()) == e
    with pytest.raises(ValueError):
        Example("", "x", "1")
