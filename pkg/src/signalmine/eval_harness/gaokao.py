"""Exam grading: seven subcategories, fixed per-question points, 150 total.

Objective sections are graded as correct-count times per-question points.
Grammar admits partial credit (the single question is worth ten points, one
per corrected error), and the essay score always comes from outside; both
can be supplied as raw section scores.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Mapping

from ..signal_model import SchemaError


@dataclass(frozen=True)
class SectionSpec:
    name: str
    questions: int
    points_per_question: float
    auto: bool = True

    @property
    def max_points(self) -> float:
        return self.questions * self.points_per_question


SECTIONS: tuple[SectionSpec, ...] = (
    SectionSpec("listening", 20, 1.5),
    SectionSpec("cloze_mc", 20, 1.5),
    SectionSpec("cloze_hint", 10, 1.5),
    SectionSpec("reading_mc", 15, 2.0),
    SectionSpec("reading_cloze", 5, 2.0),
    SectionSpec("grammar", 1, 10.0),
    SectionSpec("essay", 1, 25.0, auto=False),
)
SECTION_BY_NAME = {s.name: s for s in SECTIONS}
FULL_MARKS = 150.0

assert sum(s.max_points for s in SECTIONS) == FULL_MARKS


@dataclass(frozen=True)
class SectionScore:
    name: str
    score: float
    max_points: float


@dataclass
class GaokaoPaper:
    paper_id: str
    gold: dict[str, list[str]] = field(default_factory=dict)  # section -> answer key

    def __post_init__(self) -> None:
        for name, answers in self.gold.items():
            spec = SECTION_BY_NAME.get(name)
            if spec is None:
                raise SchemaError(f"unknown exam section: {name}")
            if spec.auto and name not in ("grammar",) and len(answers) != spec.questions:
                raise SchemaError(
                    f"{self.paper_id}/{name}: answer key has {len(answers)} entries, "
                    f"expected {spec.questions}"
                )

    @classmethod
    def from_record(cls, rec: Mapping) -> "GaokaoPaper":
        return cls(paper_id=rec.get("paper_id", "paper"), gold=dict(rec.get("gold", {})))


def load_paper(path: str) -> GaokaoPaper:
    with open(path, encoding="utf-8") as fh:
        return GaokaoPaper.from_record(json.load(fh))


def total_from_section_scores(section_scores: Mapping[str, float], essay_score: float = 0.0) -> float:
    """Straight bookkeeping: validated section scores plus the essay."""
    total = 0.0
    for name, score in section_scores.items():
        spec = SECTION_BY_NAME.get(name)
        if spec is None:
            raise SchemaError(f"unknown exam section: {name}")
        if name == "essay":
            raise SchemaError("essay score is a separate argument")
        if not (0 <= score <= spec.max_points):
            raise SchemaError(f"{name}: score {score} outside [0, {spec.max_points}]")
        total += score
    if not (0 <= essay_score <= SECTION_BY_NAME["essay"].max_points):
        raise SchemaError(f"essay: score {essay_score} outside [0, 25]")
    return total + essay_score


def grade_gaokao(
    paper: GaokaoPaper,
    answers: Mapping[str, list[str]],
    section_scores: Mapping[str, float] | None = None,
    essay_score: float = 0.0,
) -> tuple[list[SectionScore], float]:
    """Grade answer lists against the key; raw `section_scores` override
    per-question grading for sections judged externally (grammar partial
    credit). Answer-count mismatches are structural errors."""
    section_scores = dict(section_scores or {})
    results: list[SectionScore] = []
    total = 0.0
    for spec in SECTIONS:
        if spec.name == "essay":
            score = essay_score
            if not (0 <= score <= spec.max_points):
                raise SchemaError(f"essay: score {score} outside [0, {spec.max_points}]")
        elif spec.name in section_scores:
            score = float(section_scores[spec.name])
            if not (0 <= score <= spec.max_points):
                raise SchemaError(f"{spec.name}: score {score} outside [0, {spec.max_points}]")
        elif spec.name in answers:
            key = paper.gold.get(spec.name)
            if key is None:
                raise SchemaError(f"paper has no answer key for section {spec.name}")
            given = answers[spec.name]
            if len(given) != len(key):
                raise SchemaError(
                    f"{spec.name}: {len(given)} answers for {len(key)} questions"
                )
            correct = sum(1 for g, k in zip(given, key) if _norm(g) == _norm(k))
            score = correct * spec.points_per_question
        else:
            score = 0.0
        results.append(SectionScore(spec.name, score, spec.max_points))
        total += score
    return results, total


def _norm(answer: str) -> str:
    return str(answer).strip().upper()
