"""Formulas, notation, and the truth-table oracle.

Run: python3 demos/01_formulas_and_oracle.py
"""

from logic_inference.formula import collect_symbols, negate, parse_formula, render_formula
from logic_inference.semantics import classify, classify_all_sizes, consistent

# Notation: ~ binds tightest, and/or may not be mixed unparenthesized, and
# -> / <-> are right associative.  A quantifier opens a clause.
for text in ["p -> q -> r", "(p -> q) -> r", "~(p and q)", "forall x_2: P(x_2) -> Q(a)"]:
    f = parse_formula(text)
    print(f"{text!r:32} parsed as {f!r}")
    assert render_formula(f) == text

# Negation never stacks and moves through a quantifier.
print(render_formula(negate(parse_formula("forall x: P(x) or Q(x)"))))

print(collect_symbols(parse_formula("forall x: P(x) -> q"), parse_formula("R(b)")))

# Entailment over all truth assignments; quantifiers are grounded over the
# constants present plus d fresh elements.
premises = [parse_formula("p <-> p_2"), parse_formula("p_2 -> ~q_2"), parse_formula("q_2")]
for query in ["~p", "p", "r"]:
    print(query, classify(premises, parse_formula(query)).value)

quantified = [parse_formula("forall x: P(x) -> Q(x)"), parse_formula("exists x: P(x)")]
print(classify_all_sizes(quantified, parse_formula("exists x: Q(x)")))
print("consistent:", consistent([parse_formula("forall x: P(x)"), parse_formula("~P(a)")]))
