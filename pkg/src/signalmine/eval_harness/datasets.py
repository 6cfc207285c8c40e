"""Five-prompt dataset evaluation: per-prompt scores plus mean, max, and
population standard deviation.

Classification sets are subsampled to 5,000 and generation sets to 2,000
with the global seed before scoring. Metrics: accuracy (option scoring),
exact-match micro-F1 (two-step entity recognition), and unigram-overlap
ROUGE-1 for summaries.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Mapping, Sequence

from ..restructurer.render import format_options
from ..restructurer.templates import load_eval_prompts
from ..rng import derive_rng
from ..signal_model import SchemaError
from .mc import score_mc
from .ner import eval_two_step_ner, micro_f1
from .scorers import ModelScorer, ScorerError

CLASSIFICATION_SAMPLE_CAP = 5000
GENERATION_SAMPLE_CAP = 2000

METRICS = ("accuracy", "micro_f1", "rouge1")

_WORD_RE = re.compile(r"[a-z0-9']+")


def rouge1(prediction: str, reference: str) -> float:
    """Unigram overlap F1 after lowercasing and punctuation stripping."""
    pred = _WORD_RE.findall(prediction.lower())
    ref = _WORD_RE.findall(reference.lower())
    if not pred or not ref:
        return 0.0
    ref_counts: dict[str, int] = {}
    for t in ref:
        ref_counts[t] = ref_counts.get(t, 0) + 1
    overlap = 0
    for t in pred:
        if ref_counts.get(t, 0) > 0:
            ref_counts[t] -= 1
            overlap += 1
    precision = overlap / len(pred)
    recall = overlap / len(ref)
    if precision + recall == 0:
        return 0.0
    return 2 * precision * recall / (precision + recall)


def population_std(values: Sequence[float]) -> float:
    if not values:
        return 0.0
    mean = sum(values) / len(values)
    return math.sqrt(sum((v - mean) ** 2 for v in values) / len(values))


@dataclass(frozen=True)
class EvalReport:
    dataset: str
    metric: str
    per_prompt: tuple[float, ...]
    avg: float
    max: float
    std: float  # population standard deviation

    def to_record(self) -> dict:
        return {
            "dataset": self.dataset,
            "metric": self.metric,
            "per_prompt": list(self.per_prompt),
            "avg": self.avg,
            "max": self.max,
            "std": self.std,
            "std_kind": "population",
        }


def summarize(dataset: str, metric: str, per_prompt: Sequence[float]) -> EvalReport:
    return EvalReport(
        dataset=dataset,
        metric=metric,
        per_prompt=tuple(per_prompt),
        avg=sum(per_prompt) / len(per_prompt),
        max=max(per_prompt),
        std=population_std(per_prompt),
    )


def prompt_set_for(dataset: str, prompts_doc: Mapping | None = None) -> tuple[str, list[dict]]:
    doc = prompts_doc or load_eval_prompts()
    key = doc["datasets"].get(dataset, dataset)
    sets = doc["sets"]
    if key not in sets:
        raise SchemaError(f"no evaluation prompt set for dataset '{dataset}'")
    return key, sets[key]


def _bind(pattern: str, record: Mapping, extra: Mapping[str, str]) -> str:
    def repl(m: re.Match) -> str:
        name = m.group(1)
        if name in extra:
            return extra[name]
        if name in record:
            return str(record[name])
        raise SchemaError(f"eval prompt needs '{name}' but the record lacks it")

    return re.sub(r"\{([A-Za-z0-9_]+)\}", repl, pattern)


def _rule_value(rule: Mapping, record: Mapping) -> str:
    if rule["kind"] == "const":
        return rule["value"]
    if rule["kind"] == "cond":
        value = str(record.get(rule["field"], ""))
        for case in rule["cases"]:
            if case["negate"]:
                if value != case["literal"]:
                    return case["value"]
            elif value == case["literal"]:
                return case["value"]
        raise SchemaError(f"no answer-rule case for value '{value}'")
    raise SchemaError(f"unknown answer rule kind: {rule['kind']}")


def _rule_options(rule: Mapping) -> list[str]:
    out = []
    for case in rule.get("cases", []):
        if case["value"] not in out:
            out.append(case["value"])
    return out


def _candidates_and_gold(
    prompt: Mapping, record: Mapping, spaces: Mapping[str, list[str]]
) -> tuple[list[str], str]:
    rule = prompt.get("answer")
    if rule:
        options = _rule_options(rule)
        return options, _rule_value(rule, record)
    target_name = prompt["target"].strip("{}")
    gold = str(record.get(target_name, ""))
    options = [str(o) for o in record.get("options", [])] or list(spaces.get(target_name, []))
    return options, gold


def subsample(records: list, cap: int, seed: int) -> list:
    if len(records) <= cap:
        return list(records)
    rng = derive_rng(seed, "eval_subsample", cap)
    picked = sorted(rng.sample(range(len(records)), cap))
    return [records[i] for i in picked]


def eval_dataset(
    dataset: str,
    records: list[Mapping],
    scorer: ModelScorer,
    metric: str,
    seed: int = 0,
    prompts_doc: Mapping | None = None,
) -> EvalReport:
    if metric not in METRICS:
        raise SchemaError(f"unknown metric: {metric}")
    key, prompts = prompt_set_for(dataset, prompts_doc)
    if len(prompts) != 5:
        raise SchemaError(f"prompt set '{key}' must have 5 prompts, has {len(prompts)}")
    cap = GENERATION_SAMPLE_CAP if metric in ("rouge1", "micro_f1") else CLASSIFICATION_SAMPLE_CAP
    records = subsample(list(records), cap, seed)
    if not records:
        raise SchemaError(f"no records for dataset '{dataset}'")

    if metric == "micro_f1":
        doc = prompts_doc or load_eval_prompts()
        type_prompts = doc["sets"].get("ner_type")
        if not type_prompts or len(type_prompts) != len(prompts):
            raise SchemaError("entity-typing prompt set missing or mismatched")
        per_prompt: list[float] = []
        for i, prompt in enumerate(prompts):
            type_labels = sorted({t for rec in records for _, t in rec.get("entities", [])})
            if not type_labels:
                raise SchemaError("entity records carry no type labels")
            pairs = []
            for rec in records:
                predicted = eval_two_step_ner(
                    str(rec["text"]),
                    scorer,
                    type_labels,
                    prompt["source"],
                    type_prompts[i]["source"],
                )
                gold = [(s, t) for s, t in rec.get("entities", [])]
                pairs.append((predicted, gold))
            per_prompt.append(micro_f1(pairs))
        return summarize(dataset, metric, per_prompt)

    spaces: dict[str, list[str]] = {}
    if metric == "accuracy":
        for prompt in prompts:
            if prompt.get("answer"):
                continue
            name = prompt["target"].strip("{}")
            if name in spaces:
                continue
            seen: set[str] = set()
            space: list[str] = []
            for rec in records:
                value = str(rec.get(name, ""))
                if value and value not in seen:
                    seen.add(value)
                    space.append(value)
            spaces[name] = space

    # the length hint is the dataset-level average summary length
    avg_length = "0"
    if metric == "rouge1":
        lengths = [len(str(rec.get("summary", "")).split()) for rec in records]
        avg_length = str(max(1, round(sum(lengths) / len(lengths))))

    per_prompt = []
    for prompt in prompts:
        if metric == "rouge1":
            total = 0.0
            for rec in records:
                extra = {"avg_length": avg_length}
                source = _bind(prompt["source"], rec, extra)
                try:
                    prediction = scorer.generate(source)
                except ScorerError:
                    prediction = ""
                total += rouge1(prediction, str(rec.get("summary", "")))
            per_prompt.append(total / len(records))
            continue

        correct = 0
        for rec in records:
            options, gold = _candidates_and_gold(prompt, rec, spaces)
            if len(options) < 2 or gold not in options:
                raise SchemaError(
                    f"dataset '{dataset}': record options unusable (gold={gold!r}, options={options})"
                )
            extra = {
                "choices_with_or": format_options(options, with_or=True),
                "choices_without_or": format_options(options, with_or=False),
            }
            source = _bind(prompt["source"], rec, extra)
            index = score_mc(source, options, scorer)
            if index is not None and options[index] == gold:
                correct += 1
        per_prompt.append(correct / len(records))
    return summarize(dataset, metric, per_prompt)
