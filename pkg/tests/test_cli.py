import json

from logic_inference.cli import build_parser, main


def test_rules_list(capsys):
    assert main(["rules", "list"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert len(lines) == 66
    assert "modus ponens" in lines[0]


def test_generate_validate_stats(tmp_path, capsys):
    out = tmp_path / "data"
    code = main(["generate", "--split", "length", "--num-problems", "80", "--num-variations", "3",
                 "--num-examples", "300", "--seed", "5", "--out", str(out), "--format", "jsonl"])
    assert code == 0
    assert (out / "length_train.jsonl").exists() and (out / "length_stats.json").exists()
    stats = json.loads((out / "length_stats.json").read_text())
    assert stats["split_sizes"]["train"] + stats["split_sizes"]["test"] == stats["emitted"]
    capsys.readouterr()
    assert main(["validate", "--in", str(out / "length_train.jsonl")]) == 0
    assert "OK" in capsys.readouterr().out
    assert main(["stats", "--in", str(out / "length_train.jsonl")]) == 0
    assert json.loads(capsys.readouterr().out)["emitted"] == stats["split_sizes"]["train"]


def test_validate_failure_exit_code(tmp_path, capsys):
    path = tmp_path / "bad.jsonl"
    record = {"input": "Translate the following inference to logic notation: x. Therefore y.",
              "output": "q. Therefore p.", "type": "1", "answer_position": "begin", "problem_id": 0,
              "premise_count": 1, "corner_case": "none"}
    path.write_text(json.dumps(record) + "\n")
    assert main(["validate", "--in", str(path)]) == 1
    assert "FAILED" in capsys.readouterr().out


def test_tsv_generation_and_stats(tmp_path, capsys):
    out = tmp_path / "tsv"
    assert main(["generate", "--num-problems", "40", "--num-variations", "2", "--num-examples", "100",
                 "--out", str(out), "--format", "tsv", "--type-weights", "0.2,0.2,0.2,0.2,0.2"]) == 0
    capsys.readouterr()
    assert main(["stats", "--in", str(out / "iid_train.tsv")]) == 0
    assert json.loads(capsys.readouterr().out)["emitted"] > 0


def test_parser_options():
    args = build_parser().parse_args(["generate", "--out", "x", "--chain-dist", "0.5,0.5",
                                      "--type-weights", "1=0.2,2a=0.2,2b=0.2,3a=0.2,3b=0.2"])
    assert args.chain_dist == (0.5, 0.5)
    assert args.type_weights["2a"] == 0.2
    assert args.num_examples == 200000 and args.answer_position == "begin"


def test_bad_config_exit_code(tmp_path, capsys):
    assert main(["generate", "--out", str(tmp_path), "--chain-dist", "0.5,0.2", "--num-examples", "10"]) == 2
