"""Hand-built problems and assignments behind the five reference examples."""

from logic_inference.formula import parse_formula as P
from logic_inference.nl import DEFAULT_LEXICON, IMPERSONAL, SUBJECT_ACTION, SUBJECT_PREDICATE, LexAssignment, Phrase
from logic_inference.semantics import InferenceChain, Step
from logic_inference.synthesis import InferenceProblem


def entry(present: str):
    lex = DEFAULT_LEXICON
    return next(e for e in lex.predicates + lex.actions + lex.impersonal if e.present == present)


def problem(premises, inferences=(), contradictions=(), unrelated=()):
    return InferenceProblem(tuple(P(p) for p in premises), tuple(inferences), tuple(contradictions),
                            tuple(P(u) for u in unrelated))


TYPE1 = dict(
    problem=problem(["p -> q", "p"], [InferenceChain(P("q"), (Step((P("p -> q"), P("p")), P("q"), "modus ponens"),))]),
    kwargs=dict(query=P("q"), assignment=LexAssignment(propositions={
        "p": Phrase(SUBJECT_PREDICATE, entry("is rich"), "James"),
        "q": Phrase(SUBJECT_ACTION, entry("is playing squash"), "Susan")})),
    input="Translate the following inference to logic notation: If James were rich, then Susan is playing "
          "squash. James is rich. Therefore Susan is playing squash.",
    output="p -> q. p. Therefore q.",
)

TYPE2A = dict(
    problem=problem(["forall x_2: Q(x_2)", "exists x_2: P_2(x_2) -> Q_2(x_2)", "forall x_2: P_2(x_2)"]),
    kwargs=dict(name_rules=True),
    input="What can be inferred from the following premises in a single inference step (ignoring inferences "
          "that add new predicates or constants)? Name the inference rule being used: forall x_2: Q(x_2). "
          "exists x_2: P_2(x_2) -> Q_2(x_2). forall x_2: P_2(x_2).",
    output="exists x_2: Q_2(x_2) can be inferred via the existential modus ponens rule. forall x_2: Q(x_2) "
           "and P_2(x_2) can be inferred via the universal conjunction rule. forall x_2: P_2(x_2) and Q(x_2) "
           "can be inferred via the universal conjunction rule.",
)

TYPE2B = dict(
    problem=problem(["w <-> c", "~w"]),
    kwargs=dict(name_rules=False, assignment=LexAssignment(propositions={
        "w": Phrase(SUBJECT_ACTION, entry("is working"), "David"),
        "c": Phrase(IMPERSONAL, entry("is cloudy"))})),
    input="What can be inferred from the following premises in a single inference step (ignoring inferences "
          "that add new predicates or constants)? David is working if and only if it is cloudy. David is not "
          "working.",
    output="If David works, then it is cloudy. If it is cloudy, then David is working. It is not cloudy.",
)

_CHAIN_3A = InferenceChain(P("~p"), (
    Step((P("p_2 -> ~q_2"), P("q_2")), P("~p_2"), "modus tollens"),
    Step((P("p <-> p_2"), P("~p_2")), P("~p"), "biconditional elimination"),
))

TYPE3A = dict(
    problem=problem(["p <-> p_2", "p_2 -> ~q_2", "q_2"], [_CHAIN_3A]),
    kwargs=dict(name_rules=True, query=P("~p"), prompt_shape="inline"),
    input="Consider the following premises. p <-> p_2. p_2 -> ~q_2. q_2. Can we infer ~p from them? If "
          "possible, name the inference rules being used at each step.",
    output="Yes, via the following inference chain. From p_2 -> ~q_2, q_2 we can infer ~p_2 via modus "
           "tollens. Finally, from p <-> p_2, ~p_2 we can infer ~p via biconditional elimination.",
)

TYPE3B = dict(
    problem=problem(["exists x: P(x) -> Q(x)", "forall x: Q(x) -> P(x)"]),
    kwargs=dict(name_rules=True, query=P("exists x: P(x) -> Q(x)"), prompt_shape="trailing",
                assignment=LexAssignment(predicates={"P": Phrase(SUBJECT_PREDICATE, entry("is an astronaut")),
                                                     "Q": Phrase(SUBJECT_ACTION, entry("is climbing a mountain"))})),
    input="Consider the following premises. There is at least one x for which if x were an astronaut, then x "
          "is climbing a mountain. For all x, if x climbs a mountain, then x is an astronaut. Can we infer the "
          "following from them? If we can, name the inference rule being used: There is at least one x for "
          "which if x were an astronaut, then x is climbing a mountain.",
    output="Yes, that is one of the premises.",
)

GOLDEN = {"1": TYPE1, "2a": TYPE2A, "2b": TYPE2B, "3a": TYPE3A, "3b": TYPE3B}

# refutation example with answer-first and answer-last outputs
_REFUTE = InferenceChain(P("exists x_3: ~Q_3(x_3)"), (
    Step((P("forall x_3: P_3(x_3) or Q_3(x_3)"), P("forall x_3: ~P_3(x_3)")), P("forall x_3: Q_3(x_3)"),
         "universal disjunctive syllogism"),
    Step((P("forall x_3: Q_3(x_3)"), P("forall x_3: Q_1(x_3)")), P("forall x_3: Q_3(x_3) and Q_1(x_3)"),
         "universal conjunction"),
    Step((P("forall x_3: Q_3(x_3) and Q_1(x_3)"),), P("forall x_3: Q_3(x_3)"), "universal simplification"),
), disproof=True)

FLIP = dict(
    problem=problem(["forall x_3: Q_1(x_3)", "forall x_3: ~P_3(x_3)", "forall x_3: P_3(x_3) or Q_3(x_3)"],
                    contradictions=[_REFUTE]),
    kwargs=dict(name_rules=False, query=P("exists x_3: ~Q_3(x_3)"), prompt_shape="inline"),
    input="Consider the following premises. forall x_3: Q_1(x_3). forall x_3: ~P_3(x_3). forall x_3: "
          "P_3(x_3) or Q_3(x_3). Can we infer exists x_3: ~Q_3(x_3) from them?",
    begin="No, we can see why via the following inference chain. From forall x_3: P_3(x_3) or Q_3(x_3), "
          "forall x_3: ~P_3(x_3) we can infer forall x_3: Q_3(x_3). From forall x_3: Q_3(x_3), forall x_3: "
          "Q_1(x_3) we can infer forall x_3: Q_3(x_3) and Q_1(x_3). Finally, from forall x_3: Q_3(x_3) and "
          "Q_1(x_3) we can infer forall x_3: Q_3(x_3), which contradicts exists x_3: ~Q_3(x_3).",
    end="From forall x_3: P_3(x_3) or Q_3(x_3), forall x_3: ~P_3(x_3) we can infer forall x_3: Q_3(x_3). "
        "From forall x_3: Q_3(x_3), forall x_3: Q_1(x_3) we can infer forall x_3: Q_3(x_3) and Q_1(x_3). "
        "Finally, from forall x_3: Q_3(x_3) and Q_1(x_3) we can infer forall x_3: Q_3(x_3), which contradicts "
        "exists x_3: ~Q_3(x_3). Therefore, the answer is no.",
)
