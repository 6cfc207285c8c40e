"""Weighted mixing: caps, composition constraints, curriculum stages, splits.

Weights act as sampling proportions over capped pools. Splits are assigned
per tuple, never per example, so no tuple's renderings leak across train and
validation. The final shuffle is one Fisher-Yates pass with the global seed
over a canonical pre-order, which keeps bundles byte-identical across runs.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .restructurer.pools import DistractorPools
from .restructurer.render import ConfigError, RenderError, render_with_selected, tuple_key
from .restructurer.templates import PromptRegistry
from .rng import derive_rng
from .signal_model import MixEntry, MixSpec, PromptedExample, SignalTuple


@dataclass
class MixResult:
    examples: dict[tuple[int, str], list[PromptedExample]] = field(default_factory=dict)
    per_signal: dict[str, int] = field(default_factory=dict)
    warnings: list[str] = field(default_factory=list)
    errors: list[str] = field(default_factory=list)


def _entry_id(entry: MixEntry, index: int) -> str:
    group = f":{entry.template_group}" if entry.template_group else ""
    return f"{index}:{entry.signal_type}:{entry.family}{group}"


def _sample_keep_order(items: Sequence, k: int, rng: random.Random) -> list:
    if k >= len(items):
        return list(items)
    picked = sorted(rng.sample(range(len(items)), k))
    return [items[i] for i in picked]


def _category_of(tup: SignalTuple, key: str) -> str:
    return tup.extraction_meta.get(key, "")


def apply_caps(
    tuples_by_signal: Mapping[str, Sequence[SignalTuple]],
    spec: MixSpec,
    seed: int | None = None,
    eligible=None,
) -> tuple[dict[int, list[SignalTuple]], list[str]]:
    """Per-entry pools after per-category caps, composition constraints, and
    the global cap. Shortfalls warn, they never fail. `eligible(entry, tuple)`
    optionally restricts an entry's population (e.g. to renderable tuples)."""
    seed = spec.global_seed if seed is None else seed
    out: dict[int, list[SignalTuple]] = {}
    warnings: list[str] = []
    covered = {e.signal_type for e in spec.entries}
    uncovered = sorted(set(tuples_by_signal) - covered)
    if uncovered:
        warnings.append(f"signals present but not covered by any entry: {', '.join(uncovered)}")
    for index, entry in enumerate(spec.entries):
        eid = _entry_id(entry, index)
        if entry.weight == 0:
            out[index] = []
            continue
        pool = list(tuples_by_signal.get(entry.signal_type, ()))
        if eligible is not None:
            pool = [t for t in pool if eligible(entry, t)]
        rng = derive_rng(seed, "cap", spec.name, eid)

        if entry.composition:
            key = entry.composition_key or "category"
            chosen: list[SignalTuple] = []
            for value, want in sorted(entry.composition.items()):
                bucket = [t for t in pool if _category_of(t, key) == value]
                if len(bucket) < want:
                    warnings.append(
                        f"{eid}: composition shortfall for {key}={value}: {len(bucket)} < {want}"
                    )
                chosen.extend(_sample_keep_order(bucket, want, rng))
            pool = chosen

        if entry.per_category_cap is not None:
            buckets: dict[str, list[SignalTuple]] = {}
            for tup in pool:
                buckets.setdefault(_category_of(tup, "category"), []).append(tup)
            capped: list[SignalTuple] = []
            for value in sorted(buckets):
                capped.extend(_sample_keep_order(buckets[value], entry.per_category_cap, rng))
            pool = capped

        if entry.cap is not None:
            if len(pool) < entry.cap:
                warnings.append(f"{eid}: cap shortfall: {len(pool)} available < cap {entry.cap}")
            pool = _sample_keep_order(pool, entry.cap, rng)
        out[index] = pool
    return out, warnings


def stage_plan(spec: MixSpec) -> list[tuple[int, list[int]]]:
    """Ordered (stage, entry indexes); multi-stage curricula start with the
    multiple-choice entries and widen to the union."""
    stages = spec.stages
    if len(stages) == 1:
        return [(1, list(range(len(spec.entries))))]
    first = [i for i, e in enumerate(spec.entries) if e.stage == 1]
    if any(spec.entries[i].family == "generation" for i in first):
        raise ConfigError("stage 1 of a multi-stage curriculum cannot contain generation entries")
    if not any(e.family == "multiple_choice" for e in spec.entries):
        raise ConfigError("multi-stage curriculum declared but no multiple-choice entries exist")
    plan = []
    for stage in stages:
        members = [i for i, e in enumerate(spec.entries) if e.stage <= stage]
        plan.append((stage, members))
    return plan


def split_assignments(tuples: Sequence[SignalTuple], spec: MixSpec) -> dict[str, str]:
    """Tuple-level split map: a seeded shuffle of the distinct tuples with the
    first floor(ratio * n) going to validation. Exact quota, and a tuple's
    split never depends on which entry renders it."""
    keys = []
    seen: set[str] = set()
    for tup in tuples:
        key = tuple_key(tup)
        if key not in seen:
            seen.add(key)
            keys.append(key)
    if spec.split_ratio <= 0:
        return {key: "train" for key in keys}
    keys.sort()
    rng = derive_rng(spec.global_seed, "split", spec.name)
    rng.shuffle(keys)
    n_validation = int(len(keys) * spec.split_ratio)
    return {key: ("validation" if i < n_validation else "train") for i, key in enumerate(keys)}


def _canonical_order(ex: PromptedExample) -> tuple:
    return (ex.signal_type, ex.source_doc, ex.template_id, ex.target, ex.source)


def mix(
    tuples: Iterable[SignalTuple],
    spec: MixSpec,
    registry: PromptRegistry,
    pools: DistractorPools | None = None,
) -> MixResult:
    """Render capped, staged, split example streams for every spec entry."""
    all_tuples = list(tuples)
    by_signal: dict[str, list[SignalTuple]] = {}
    for tup in all_tuples:
        by_signal.setdefault(tup.signal_type, []).append(tup)
    if pools is None:
        pools = DistractorPools.build(all_tuples)

    def renderable(entry: MixEntry, tup: SignalTuple) -> bool:
        if entry.family == "cloze":
            return tup.signal_type == "plain_text_cloze"
        templates = registry.get(entry.signal_type, entry.family, entry.template_group)
        return any(t.applies_to(tup) for t in templates)

    capped, warnings = apply_caps(by_signal, spec, eligible=renderable)
    plan = stage_plan(spec)
    result = MixResult(warnings=warnings)
    seed = spec.global_seed
    splits = split_assignments(all_tuples, spec)

    rendered: dict[int, list[tuple[str, PromptedExample]]] = {}
    failed_entries: set[int] = set()
    for index, entry in enumerate(spec.entries):
        pool = capped.get(index, [])
        out: list[tuple[str, PromptedExample]] = []
        try:
            for tup in pool:
                split = splits[tuple_key(tup)]
                ex = render_with_selected(
                    registry, tup, entry.family, pools, seed, entry.template_group
                )
                ex = PromptedExample(
                    source=ex.source,
                    target=ex.target,
                    signal_type=ex.signal_type,
                    template_id=ex.template_id,
                    family=ex.family,
                    seed=seed,
                    split=split,
                    source_doc=ex.source_doc,
                )
                out.append((split, ex))
        except (RenderError, ConfigError) as exc:
            failed_entries.add(index)
            result.errors.append(f"{_entry_id(entry, index)}: {exc}")
            continue
        rendered[index] = out

    for stage, members in plan:
        buckets: dict[str, list[PromptedExample]] = {"train": [], "validation": []}
        for index in members:
            if index in failed_entries:
                continue
            for split, ex in rendered.get(index, []):
                buckets[split].append(ex)
        for split, examples in buckets.items():
            examples.sort(key=_canonical_order)
            rng = derive_rng(seed, "shuffle", spec.name, stage, split)
            rng.shuffle(examples)
            if examples or spec.split_ratio > 0 or split == "train":
                result.examples[(stage, split)] = examples

    for examples in result.examples.values():
        for ex in examples:
            result.per_signal[ex.signal_type] = result.per_signal.get(ex.signal_type, 0) + 1
    return result
