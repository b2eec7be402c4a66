import json

import pytest

from logic_inference.dataset import (
    DatasetSplit, LengthSummary, build_dataset, read_examples, read_tsv, report_stats, tsv_escape,
    tsv_unescape, validate_dataset, write_dataset,
)
from logic_inference.synthesis import GenerationConfig
from logic_inference.tasks import CORNER_NONE, Example, NO_CHAIN, YES_CHAIN

SMALL = GenerationConfig(num_problems=150, num_variations=5, num_examples=1500, seed=3)


@pytest.fixture(scope="module")
def iid():
    return build_dataset(SMALL, "iid")


def test_iid_split_sizes_and_dedup(iid):
    split, report = iid
    n = len(split.train) + len(split.test)
    assert len(split.train) == round(0.9 * n)
    pairs = [(e.input, e.output) for e in split.train + split.test]
    assert len(pairs) == len(set(pairs))
    assert report.emitted == n and report.attempts == SMALL.num_examples
    assert report.emitted + report.duplicates_removed + report.failed == report.attempts
    assert sum(report.type_counts.values()) == n
    assert report.split_sizes == {"train": len(split.train), "test": len(split.test)}


def test_ood_split_disjoint_problems():
    split, _ = build_dataset(SMALL, "ood")
    train_ids = {e.problem_id for e in split.train}
    test_ids = {e.problem_id for e in split.test}
    assert train_ids and test_ids and not train_ids & test_ids


def test_length_split_boundary():
    config = GenerationConfig(num_problems=150, num_variations=5, num_examples=1500, seed=3, length_threshold=3)
    split, _ = build_dataset(config, "length")
    assert split.test
    assert all(e.premise_count <= 3 for e in split.train)
    assert all(e.premise_count > 3 for e in split.test)


def test_unknown_split():
    with pytest.raises(ValueError):
        build_dataset(SMALL, "random")


def test_jsonl_and_tsv_files(iid, tmp_path):
    split, _ = iid
    paths = write_dataset(split, "jsonl", tmp_path)
    assert [p.name for p in paths] == ["iid_train.jsonl", "iid_test.jsonl"]
    assert read_examples(paths[0]) == split.train
    first = json.loads(paths[0].read_text().splitlines()[0])
    assert set(first) >= {"input", "output", "type", "answer_position", "problem_id", "premise_count", "corner_case"}
    tsv = write_dataset(split, "tsv", tmp_path)
    lines = tsv[1].read_text().splitlines()
    assert len(lines) == len(split.test)
    assert read_tsv(tsv[1]) == [(e.input, e.output) for e in split.test]


def test_tsv_escaping():
    text = "a\tb\nc\\d"
    assert "\t" not in tsv_escape(text) and "\n" not in tsv_escape(text)
    assert tsv_unescape(tsv_escape(text)) == text


def test_validation_passes_generated_data(iid, tmp_path):
    split, _ = iid
    path = write_dataset(split, "jsonl", tmp_path)[0]
    report = validate_dataset(path)
    assert report.ok, report.failures[:3]
    assert report.checked == len(split.train)


def test_validation_catches_a_flipped_answer(iid, tmp_path):
    split, _ = iid
    path = write_dataset(split, "jsonl", tmp_path)[0]
    lines = path.read_text().splitlines()
    for i, line in enumerate(lines):
        d = json.loads(line)
        if d["type"] == "3a" and d["corner_case"] == CORNER_NONE and d["output"].startswith(YES_CHAIN):
            d["output"] = NO_CHAIN + d["output"][len(YES_CHAIN):]
            lines[i] = json.dumps(d)
            break
    path.write_text("\n".join(lines) + "\n")
    report = validate_dataset(path)
    assert len(report.failures) == 1
    assert report.failures[0][0] == i + 1


def test_validation_reports_unreadable_lines(tmp_path):
    path = tmp_path / "bad.jsonl"
    path.write_text('{"input": "x"}\nnot json\n')
    report = validate_dataset(path)
    assert [f[0] for f in report.failures] == [1, 2]


def test_build_is_deterministic(tmp_path):
    config = GenerationConfig(num_problems=60, num_variations=4, num_examples=400, seed=9)
    a = write_dataset(build_dataset(config, "iid")[0], "jsonl", tmp_path / "a")
    b = write_dataset(build_dataset(config, "iid")[0], "jsonl", tmp_path / "b")
    for x, y in zip(a, b):
        assert x.read_bytes() == y.read_bytes()


def test_answer_position_end(tmp_path):
    config = GenerationConfig(num_problems=60, num_variations=4, num_examples=300, seed=9, answer_position="end")
    split, _ = build_dataset(config, "iid")
    for e in split.train:
        assert e.answer_position == "end"
        assert not e.output.startswith((YES_CHAIN, NO_CHAIN))


def test_empty_split_report():
    r = report_stats(DatasetSplit("iid"))
    assert r.emitted == 0 and r.problems == 0
    assert r.input_tokens == LengthSummary()
    assert set(r.type_counts.values()) == {0}


def test_report_shape(iid):
    _, report = iid
    assert report.problems > 0 and sum(report.chain_length_histogram.values()) == report.problems
    s = report.input_tokens
    assert s.min <= s.median <= s.p90 <= s.max
    json.dumps(report.to_dict())


def test_example_records_keep_nl_logic(iid):
    split, _ = iid
    for e in split.train:
        assert (e.logic is not None) == (e.problem_type in ("2b", "3b"))
        assert isinstance(e, Example)
