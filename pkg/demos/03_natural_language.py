"""Rendering formulas as templated English.

Run: python3 demos/03_natural_language.py
"""

import random

from logic_inference.formula import collect_symbols, parse_formula
from logic_inference.nl import DEFAULT_LEXICON, assign_lexicon, canonicalize_type1, render_nl

formulas = [parse_formula(t) for t in (
    "p -> q", "~p", "q <-> r", "forall x_4: P(x_4) -> ~Q(x_4)", "exists x: P(x) and R(x)", "Q(a) or s",
)]
for seed in (0, 1):
    assignment = assign_lexicon(collect_symbols(*formulas), random.Random(seed), DEFAULT_LEXICON)
    print(f"assignment {seed}:")
    for f in formulas:
        print("  ", render_nl(f, assignment))

# Type 1 targets use canonical names in order of first appearance.
print(canonicalize_type1([parse_formula("t_3 -> s"), parse_formula("t_3"), parse_formula("s")]))
