"""From problems to training examples and dataset files.

Run: python3 demos/04_examples_and_dataset.py
"""

import random
import tempfile
from pathlib import Path

from logic_inference.dataset import build_dataset, validate_dataset, write_dataset
from logic_inference.rules import default_catalog
from logic_inference.synthesis import GenerationConfig, generate_problem
from logic_inference.tasks import answer_flip, make_example

catalog = default_catalog()
problem = generate_problem(catalog, GenerationConfig(), random.Random(12), depth=2)
rng = random.Random(0)
for ptype in ("1", "2a", "2b", "3a", "3b"):
    e = make_example(problem, ptype, "begin", rng, rules=catalog)
    print(f"[{ptype}] {e.input}\n     -> {e.output}\n")

e = make_example(problem, "3a", "begin", random.Random(3), rules=catalog, query=problem.inferences[0].conclusion)
print("answer last:", answer_flip(e).output, "\n")

# A desk-scale build: problems, variations, examples, dedup and the IID split.
config = GenerationConfig(num_problems=300, num_variations=10, num_examples=3000, seed=0)
split, report = build_dataset(config, "iid")
print("train/test:", len(split.train), len(split.test))
print("types:", report.type_counts, "corner cases:", report.corner_counts)
print("input tokens:", report.input_tokens)
with tempfile.TemporaryDirectory() as tmp:
    paths = write_dataset(split, "jsonl", Path(tmp))
    check = validate_dataset(paths[1], catalog)
    print("validation of the test file:", "OK" if check.ok else check.failures[:3], check.tally)
