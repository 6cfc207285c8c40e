"""Two-step entity recognition: generate the entity list, then classify each
entity with an option-scored type prompt. Scoring is exact-match micro-F1
over (surface, type) pairs."""

from __future__ import annotations

from ..restructurer.render import format_options
from .mc import score_mc
from .scorers import ModelScorer, ScorerError


def parse_entity_list(text: str) -> list[str]:
    """Comma-separated entities, deduplicated preserving first occurrence."""
    out: list[str] = []
    for part in text.split(","):
        ent = part.strip()
        if ent and ent not in out:
            out.append(ent)
    return out


def eval_two_step_ner(
    text: str,
    scorer: ModelScorer,
    type_labels: list[str],
    find_prompt: str,
    type_prompt: str,
) -> list[tuple[str, str]]:
    """Prompts carry {text} / {entity} / {choices_*} placeholders."""
    source = find_prompt.replace("{text}", text)
    try:
        raw = scorer.generate(source)
    except ScorerError:
        return []
    entities = parse_entity_list(raw)
    typed: list[tuple[str, str]] = []
    with_or = format_options(type_labels, with_or=True)
    without_or = format_options(type_labels, with_or=False)
    for entity in entities:
        prompt = (
            type_prompt.replace("{text}", text)
            .replace("{entity}", entity)
            .replace("{choices_with_or}", with_or)
            .replace("{choices_without_or}", without_or)
        )
        index = score_mc(prompt, type_labels, scorer)
        if index is None:
            continue
        typed.append((entity, type_labels[index]))
    return typed


def micro_f1(pairs: list[tuple[list[tuple[str, str]], list[tuple[str, str]]]]) -> float:
    """Micro-averaged exact-match F1 over (predicted, gold) pair lists."""
    tp = pred_n = gold_n = 0
    for predicted, gold in pairs:
        pset, gset = set(predicted), set(gold)
        tp += len(pset & gset)
        pred_n += len(pset)
        gold_n += len(gset)
    if pred_n == 0 or gold_n == 0:
        return 0.0
    precision = tp / pred_n
    recall = tp / gold_n
    if precision + recall == 0:
        return 0.0
    return 2 * precision * recall / (precision + recall)


def ner_f1(predicted: list[tuple[str, str]], gold: list[tuple[str, str]]) -> float:
    return micro_f1([(predicted, gold)])
