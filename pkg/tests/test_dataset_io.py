from __future__ import annotations

import pytest

from signalmine.dataset_io import (
    IntegrityError,
    read_examples,
    read_manifest,
    stats_report,
    verify_bundle,
    write_bundle,
)
from signalmine.signal_model import PromptedExample


def example(i: int, signal="qa_triviaqa", split="train") -> PromptedExample:
    return PromptedExample(
        source=f"TEXT: context {i} QUERY: question {i}?",
        target=f"answer {i}",
        signal_type=signal,
        template_id="qa_triviaqa.gen.001",
        family="generation",
        seed=1,
        split=split,
        source_doc=f"qa_corpus/d{i}",
    )


def streams(n=10):
    return {"t.stage1.train": [example(i) for i in range(n)],
            "t.stage1.validation": [example(100 + i, split="validation") for i in range(3)]}


def test_round_trip_byte_exact(tmp_path):
    path = tmp_path / "bundle"
    write_bundle(path, streams())
    back = read_examples(path, "t.stage1.train")
    assert back == streams()["t.stage1.train"]


def test_same_inputs_same_hash(tmp_path):
    h1 = write_bundle(tmp_path / "b1", streams())
    h2 = write_bundle(tmp_path / "b2", streams())
    assert h1 == h2


def test_hash_changes_with_any_byte(tmp_path):
    h1 = write_bundle(tmp_path / "b1", streams())
    altered = streams()
    ex = altered["t.stage1.train"][0]
    altered["t.stage1.train"][0] = PromptedExample(
        source=ex.source + " ", target=ex.target, signal_type=ex.signal_type,
        template_id=ex.template_id, family=ex.family, seed=ex.seed,
        split=ex.split, source_doc=ex.source_doc,
    )
    h2 = write_bundle(tmp_path / "b2", altered)
    assert h1 != h2


def test_manifest_line_counts(tmp_path):
    path = tmp_path / "b"
    write_bundle(path, streams())
    manifest = read_manifest(path)
    assert manifest["files"]["t.stage1.train"]["lines"] == 10
    assert manifest["files"]["t.stage1.validation"]["lines"] == 3
    assert manifest["per_signal"] == {"qa_triviaqa": 13}
    verify_bundle(path)


def test_empty_bundle_is_valid(tmp_path):
    path = tmp_path / "b"
    h = write_bundle(path, {"t.stage1.train": []})
    assert h
    manifest = verify_bundle(path)
    assert manifest["per_signal"] == {}


def test_corruption_detected(tmp_path):
    path = tmp_path / "b"
    write_bundle(path, streams())
    target = path / "t.stage1.train"
    target.write_bytes(target.read_bytes().replace(b"question 3", b"question X"))
    with pytest.raises(IntegrityError):
        verify_bundle(path)


def test_partial_write_leaves_nothing(tmp_path):
    path = tmp_path / "exists"
    path.mkdir()  # a non-bundle directory is never clobbered
    with pytest.raises(Exception):
        write_bundle(path, streams())
    leftovers = [p for p in tmp_path.iterdir() if p.name.startswith(".exists")]
    assert not leftovers


def test_rewriting_a_bundle_is_idempotent(tmp_path):
    path = tmp_path / "b"
    h1 = write_bundle(path, streams())
    h2 = write_bundle(path, streams())
    assert h1 == h2
    verify_bundle(path)


def test_stats_report_rows(tmp_path):
    path = tmp_path / "b"
    write_bundle(path, streams())
    table = stats_report(path)
    lines = table.strip().split("\n")
    assert lines[0] == "mine\tsignal\ttuple\tsamples"
    assert lines[1] == "qa_corpus\tqa_triviaqa\t(context,question,answer)\t13"
    # recomputed on an identical rewrite -> identical report
    write_bundle(tmp_path / "b2", streams())
    assert stats_report(tmp_path / "b2") == table


def test_round_trip_file_bytes_are_identical(tmp_path):
    write_bundle(tmp_path / "b1", streams())
    back = {name: read_examples(tmp_path / "b1", name) for name in streams()}
    write_bundle(tmp_path / "b2", back)
    for name in streams():
        assert (tmp_path / "b1" / name).read_bytes() == (tmp_path / "b2" / name).read_bytes()
