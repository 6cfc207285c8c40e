from __future__ import annotations

import json
from pathlib import Path

import pytest

from signalmine.extractors import extract_documents, read_jsonl
from signalmine.extractors.pwc import EntityDb
from signalmine.report import ExtractionReport

FIXTURES = Path(__file__).parent / "fixtures"


def fixture_docs(name: str) -> list[dict]:
    return list(read_jsonl(str(FIXTURES / "mines" / f"{name}.jsonl")))


def always_english(_text: str) -> tuple[str, float]:
    return ("en", 1.0)


def extract_fixture(mine: str, seed: int = 7, language_gate: bool = False, **options):
    """Extract a fixture dump with a permissive gate (rule tests want to see
    the word-count gates, not the language detector)."""
    if mine == "paperswithcode" and "entity_db" not in options:
        options["entity_db"] = EntityDb(read_jsonl(str(FIXTURES / "mines" / "pwc_entity_db.jsonl")))
    report = ExtractionReport()
    tuples = extract_documents(
        mine,
        fixture_docs(mine if mine != "paperswithcode" else "paperswithcode"),
        seed=seed,
        report=report,
        language_gate=language_gate,
        detector=always_english,
        options=options,
    )
    return tuples, report


@pytest.fixture(scope="session")
def all_fixture_tuples():
    out = []
    for mine in (
        "rotten_tomatoes", "daily_mail", "wikidata", "wikihow", "wikipedia",
        "wordnet", "qa_corpus", "arxiv", "paperswithcode", "plain_text",
    ):
        out.extend(extract_fixture(mine)[0])
    return out


def load_eval_fixture(name: str) -> list[dict]:
    return list(read_jsonl(str(FIXTURES / "eval" / f"{name}.jsonl")))


def gaokao_fixture(name: str):
    path = FIXTURES / "gaokao" / name
    if name.endswith(".jsonl"):
        return list(read_jsonl(str(path)))
    return json.loads(path.read_text(encoding="utf-8"))
