from __future__ import annotations

import json

import pytest
from click.testing import CliRunner

from signalmine.cli import main

from conftest import FIXTURES


@pytest.fixture()
def runner():
    return CliRunner()


def run_extract(runner, tmp_path, mine, **extra):
    out = tmp_path / f"{mine}.tuples"
    args = ["extract", "--mine", mine, "--in", str(FIXTURES / "mines" / f"{mine}.jsonl"),
            "--out", str(out), "--seed", "7"]
    for flag, value in extra.items():
        args += [f"--{flag}", str(value)]
    result = runner.invoke(main, args)
    assert result.exit_code == 0, result.output
    return out


def test_extract_smoke(runner, tmp_path):
    out = run_extract(runner, tmp_path, "wordnet")
    lines = out.read_text().strip().split("\n")
    assert lines and all(json.loads(l)["signal_type"].startswith("wordnet") for l in lines)


def test_extract_report(runner, tmp_path):
    report = tmp_path / "report.json"
    out = tmp_path / "rt.tuples"
    result = runner.invoke(main, [
        "extract", "--mine", "rotten_tomatoes",
        "--in", str(FIXTURES / "mines" / "rotten_tomatoes.jsonl"),
        "--out", str(out), "--seed", "7", "--report", str(report),
    ])
    assert result.exit_code == 0, result.output
    doc = json.loads(report.read_text())
    assert doc["accepted"]["rotten_tomatoes_sentiment"] > 0


def test_unknown_mine_is_usage_error(runner, tmp_path):
    result = runner.invoke(main, [
        "extract", "--mine", "gold_mine",
        "--in", str(FIXTURES / "mines" / "wordnet.jsonl"),
        "--out", str(tmp_path / "x"),
    ])
    assert result.exit_code == 2


def test_pwc_requires_db(runner, tmp_path):
    result = runner.invoke(main, [
        "extract", "--mine", "paperswithcode",
        "--in", str(FIXTURES / "mines" / "paperswithcode.jsonl"),
        "--out", str(tmp_path / "x"),
    ])
    assert result.exit_code == 2


def _write_spec(tmp_path):
    spec = {
        "name": "clismoke",
        "split_ratio": 0.2,
        "global_seed": 7,
        "entries": [
            {"signal_type": "rotten_tomatoes_sentiment", "family": "multiple_choice", "cap": 10},
            {"signal_type": "plain_text_cloze", "family": "cloze"},
        ],
    }
    path = tmp_path / "spec.json"
    path.write_text(json.dumps(spec))
    return path


def test_full_pipeline_and_determinism(runner, tmp_path):
    rt = run_extract(runner, tmp_path, "rotten_tomatoes")
    pt = run_extract(runner, tmp_path, "plain_text")
    spec = _write_spec(tmp_path)

    hashes = []
    for name in ("b1", "b2"):
        result = runner.invoke(main, [
            "mix", "--spec", str(spec), "--tuples", str(rt), "--tuples", str(pt),
            "--out", str(tmp_path / name), "--seed", "7",
        ])
        assert result.exit_code == 0, result.output
        hashes.append(result.output.strip().split()[-1])
    assert hashes[0] == hashes[1]

    result = runner.invoke(main, ["mix", "--spec", str(spec), "--tuples", str(rt),
                                  "--tuples", str(pt), "--out", str(tmp_path / "b3"),
                                  "--seed", "8"])
    assert result.output.strip().split()[-1] != hashes[0]

    result = runner.invoke(main, ["validate", "--bundle", str(tmp_path / "b1")])
    assert result.exit_code == 0 and result.output.startswith("ok ")

    result = runner.invoke(main, ["stats", "--bundle", str(tmp_path / "b1")])
    assert result.exit_code == 0
    assert "rotten_tomatoes_sentiment" in result.output
    assert "(review,rating)" in result.output


def test_validate_detects_corruption(runner, tmp_path):
    rt = run_extract(runner, tmp_path, "rotten_tomatoes")
    spec = _write_spec(tmp_path)
    runner.invoke(main, ["mix", "--spec", str(spec), "--tuples", str(rt),
                         "--out", str(tmp_path / "b"), "--seed", "7"])
    victim = tmp_path / "b" / "clismoke.stage1.train"
    victim.write_text(victim.read_text().replace("film", "flim"))
    result = runner.invoke(main, ["validate", "--bundle", str(tmp_path / "b")])
    assert result.exit_code == 1
    assert result.output.startswith("integrity-error:") or "integrity-error:" in result.output


def test_restructure_command(runner, tmp_path):
    wn = run_extract(runner, tmp_path, "wordnet")
    out = tmp_path / "examples.jsonl"
    result = runner.invoke(main, ["restructure", "--tuples", str(wn), "--out", str(out),
                                  "--seed", "3"])
    assert result.exit_code == 0, result.output
    lines = [json.loads(l) for l in out.read_text().strip().split("\n")]
    assert all("QUERY:" in rec["source"] for rec in lines)


def test_grade_prints_published_total(runner):
    result = runner.invoke(main, [
        "grade", "--paper", str(FIXTURES / "gaokao" / "paper_2019_np2.json"),
        "--answers", str(FIXTURES / "gaokao" / "answers_2019_np2_rst.json"),
    ])
    assert result.exit_code == 0, result.output
    assert "total: 138.5" in result.output


def test_grade_essay_override(runner):
    result = runner.invoke(main, [
        "grade", "--paper", str(FIXTURES / "gaokao" / "paper_2019_np2.json"),
        "--answers", str(FIXTURES / "gaokao" / "answers_2019_np2_rst.json"),
        "--essay-score", "0",
    ])
    assert "total: 116.5" in result.output


def test_evaluate_reference_scorer(runner, tmp_path):
    out = tmp_path / "report.json"
    result = runner.invoke(main, [
        "evaluate", "--dataset", "rte", "--data", str(FIXTURES / "eval" / "rte.jsonl"),
        "--scorer", "reference", "--seed", "5", "--out", str(out),
    ])
    assert result.exit_code == 0, result.output
    doc = json.loads(out.read_text())
    assert doc["metric"] == "accuracy" and len(doc["per_prompt"]) == 5
    assert doc["std_kind"] == "population"


def test_evaluate_unknown_dataset(runner):
    result = runner.invoke(main, [
        "evaluate", "--dataset", "nope", "--data", str(FIXTURES / "eval" / "rte.jsonl"),
    ])
    assert result.exit_code == 1
    assert "schema-error:" in result.output


def test_seed_env_var(runner, tmp_path, monkeypatch):
    monkeypatch.setenv("SIGNALMINE_SEED", "99")
    rt = run_extract(runner, tmp_path, "rotten_tomatoes")
    assert rt.exists()


def test_mix_preset_name(runner, tmp_path):
    wn = run_extract(runner, tmp_path, "wordnet")
    result = runner.invoke(main, [
        "mix", "--spec", "word_sense_disambiguation", "--tuples", str(wn),
        "--out", str(tmp_path / "wsd"), "--seed", "1",
    ])
    assert result.exit_code == 0, result.output
    manifest = json.loads((tmp_path / "wsd" / "manifest.json").read_text())
    assert manifest["spec_name"] == "word_sense_disambiguation"
    # caps far exceed the fixtures: shortfalls are warnings, not errors
    assert manifest["warnings"]


def test_audit_templates_command(runner):
    result = runner.invoke(main, ["audit-templates"])
    assert result.exit_code == 0
    doc = json.loads(result.output)
    assert doc["matches_manifest"] is True


def test_config_file_supplies_default_seed(runner, tmp_path):
    config = tmp_path / "config.json"
    config.write_text(json.dumps({"seed": 123}))
    out = tmp_path / "rt.tuples"
    result = runner.invoke(main, [
        "--config", str(config),
        "extract", "--mine", "rotten_tomatoes",
        "--in", str(FIXTURES / "mines" / "rotten_tomatoes.jsonl"),
        "--out", str(out),
    ])
    assert result.exit_code == 0, result.output
    assert out.exists()


def test_restructure_with_custom_catalog(runner, tmp_path):
    wn = run_extract(runner, tmp_path, "wordnet")
    catalog = tmp_path / "catalog.jsonl"
    catalog.write_text(json.dumps({
        "id": "wordnet_pos.gen.900", "signal_type": "wordnet_pos",
        "family": "generation", "group": "pos",
        "source": "TEXT: {sentence} QUERY: Part of speech of \"{word}\"?",
        "target": "{pos}",
    }) + "\n")
    out = tmp_path / "ex.jsonl"
    result = runner.invoke(main, [
        "restructure", "--tuples", str(wn), "--templates", str(catalog),
        "--out", str(out), "--seed", "1", "--family", "generation",
    ])
    # tuples of other wordnet signals have no templates in this tiny catalog
    if result.exit_code != 0:
        assert "config-error" in result.output
    else:
        assert out.exists()


def test_evaluate_with_external_scorer(runner, tmp_path):
    import sys
    import textwrap

    program = tmp_path / "scorer.py"
    program.write_text(textwrap.dedent("""
        import json, sys
        for line in sys.stdin:
            req = json.loads(line)
            if req["op"] == "score":
                n = max(1, len(req["candidate"].split()))
                print(json.dumps({"logprobs": [-1.0] * n}), flush=True)
            else:
                print(json.dumps({"text": ""}), flush=True)
    """))
    result = runner.invoke(main, [
        "evaluate", "--dataset", "rte", "--data", str(FIXTURES / "eval" / "rte.jsonl"),
        "--scorer", f"external-cmd:{sys.executable} {program}", "--seed", "2",
    ])
    assert result.exit_code == 0, result.output
    doc = json.loads(result.output)
    assert len(doc["per_prompt"]) == 5


def test_unknown_spec_is_usage_error(runner, tmp_path):
    result = runner.invoke(main, ["mix", "--spec", "no_such_preset",
                                  "--tuples", str(FIXTURES / "mines" / "wordnet.jsonl"),
                                  "--out", str(tmp_path / "b")])
    assert result.exit_code == 2


def test_malformed_spec_is_data_error(runner, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    result = runner.invoke(main, ["mix", "--spec", str(bad),
                                  "--tuples", str(FIXTURES / "mines" / "wordnet.jsonl"),
                                  "--out", str(tmp_path / "b")])
    assert result.exit_code == 1
    assert "schema-error:" in result.output


def test_mix_rerun_to_same_path_is_idempotent(runner, tmp_path):
    rt = run_extract(runner, tmp_path, "rotten_tomatoes")
    spec = _write_spec(tmp_path)
    hashes = set()
    for _ in range(2):
        result = runner.invoke(main, ["mix", "--spec", str(spec), "--tuples", str(rt),
                                      "--out", str(tmp_path / "same"), "--seed", "4"])
        assert result.exit_code == 0, result.output
        hashes.add(result.output.strip().split()[-1])
    assert len(hashes) == 1


def test_grade_report_file(runner, tmp_path):
    out = tmp_path / "grade.json"
    result = runner.invoke(main, [
        "grade", "--paper", str(FIXTURES / "gaokao" / "paper_2019_np2.json"),
        "--answers", str(FIXTURES / "gaokao" / "answers_2019_np2_rst.json"),
        "--out", str(out),
    ])
    assert result.exit_code == 0, result.output
    doc = json.loads(out.read_text())
    assert doc["total"] == 138.5
    assert doc["sections"]["cloze_hint"] == {"score": 12.0, "max": 15.0}


def test_evaluate_with_custom_prompt_set(runner, tmp_path):
    prompts = [
        {"source": f"TEXT: {{premise}} QUERY: variant {i}: does it follow that \"{{hypothesis}}\"? \"Yes\" or \"No\"?",
         "target": "{answer}",
         "answer": {"kind": "cond", "field": "label", "cases": [
             {"value": "Yes", "literal": "entailment", "negate": False},
             {"value": "No", "literal": "contradiction", "negate": False}]}}
        for i in range(5)
    ]
    path = tmp_path / "prompts.json"
    path.write_text(json.dumps(prompts))
    result = runner.invoke(main, [
        "evaluate", "--dataset", "rte", "--data", str(FIXTURES / "eval" / "rte.jsonl"),
        "--prompts", str(path), "--scorer", "reference", "--seed", "1",
    ])
    assert result.exit_code == 0, result.output
    doc = json.loads(result.output)
    assert len(doc["per_prompt"]) == 5


def test_wikidata_blocklist_flag(runner, tmp_path):
    blocklist = tmp_path / "blocked.txt"
    blocklist.write_text("place of birth\n")
    out = tmp_path / "wd.tuples"
    result = runner.invoke(main, [
        "extract", "--mine", "wikidata", "--in", str(FIXTURES / "mines" / "wikidata.jsonl"),
        "--out", str(out), "--seed", "7", "--blocklist", str(blocklist),
    ])
    assert result.exit_code == 0, result.output
    lines = [json.loads(l) for l in out.read_text().strip().split("\n")]
    assert not any(rec["fields"].get("property") == "place of birth" for rec in lines)
