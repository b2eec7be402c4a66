"""The rule catalog and backward-chained inference problems.

Run: python3 demos/02_rules_and_problems.py
"""

import random

from logic_inference.formula import parse_formula, render_formula
from logic_inference.rules import default_catalog
from logic_inference.semantics import verify_chain
from logic_inference.synthesis import (
    GenerationConfig, enumerate_one_step, generate_problem, make_variations, problem_to_dict,
)

catalog = default_catalog()
print(len(catalog), "rules; a few of them:")
for rule in (catalog[0], catalog[19], catalog[21]):
    print("  ", rule.describe())

# Every conclusion one rule application can reach without new symbols.
premises = [parse_formula(t) for t in ("forall x_2: Q(x_2)", "exists x_2: P_2(x_2) -> Q_2(x_2)",
                                       "forall x_2: P_2(x_2)")]
for conclusion, rule in enumerate_one_step(premises, catalog):
    print(f"  {render_formula(conclusion)}  [{rule}]")

# A problem of depth 2: two backward-chaining steps on top of a seed rule.
problem = generate_problem(catalog, GenerationConfig(), random.Random(4), depth=2)
d = problem_to_dict(problem)
print("premises:", d["premises"])
for chain in problem.inferences:
    print("proves", render_formula(chain.conclusion), "in", len(chain), "steps:",
          bool(verify_chain(problem.premises, chain, catalog)))
print("unrelated:", d["unrelated"])

# Renaming variations hide the step counters baked into generated names.
for v in make_variations(problem, 2, random.Random(0)):
    print("variation:", [render_formula(f) for f in v.premises])
