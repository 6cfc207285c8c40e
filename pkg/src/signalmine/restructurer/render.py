"""Turn signal tuples into prompted source/target examples.

Rendering is a pure function of (tuple, template, pools, rng stream): the
same seed always reproduces the same bytes. Every option list contains the
correct answer exactly once; list style is quoted items joined by commas,
with a final "or" for the with_or flavor.
"""

from __future__ import annotations

import hashlib
import random
import re
from typing import Mapping

from ..normalizer import word_count
from ..rng import derive_rng
from ..signal_model import LIST_SEP, NO_ENTITIES, PromptedExample, SchemaError, SignalTuple
from .pools import ALIASES, OPTION_SLOTS, OTHER_SLOTS, DistractorPools
from .templates import OPTION_SLOT_RE, PLACEHOLDER_RE, PromptRegistry, PromptTemplate, load_gaokao_prompts

MIN_OPTIONS = 3
MAX_OPTIONS = 9


class RenderError(Exception):
    """A template cannot be rendered for this tuple (pool too small, missing
    binding); carries the offending group for the manifest."""


class ConfigError(Exception):
    """Registry-level problem: empty template group, unknown signal."""


def tuple_key(tup: SignalTuple) -> str:
    digest = hashlib.sha256()
    digest.update(tup.signal_type.encode())
    for f in tup.fields:
        digest.update(b"\x1f" + f.encode())
    digest.update(b"\x1e" + tup.source_doc.encode())
    for k in sorted(tup.extraction_meta):
        digest.update(f"\x1d{k}\x1c{tup.extraction_meta[k]}".encode())
    return digest.hexdigest()[:16]


def format_options(options: list[str], with_or: bool) -> str:
    quoted = [f'"{o}"' for o in options]
    if not with_or or len(quoted) == 1:
        return ", ".join(quoted)
    if len(quoted) == 2:
        return f"{quoted[0]} or {quoted[1]}"
    return ", ".join(quoted[:-1]) + ", or " + quoted[-1]


_OPTION_RUN_RE = re.compile(r'"[^"]+"(?:(?:, | or |, or | and |, and )"[^"]+")+')


def parse_options(source: str) -> list[str]:
    """Inverse view of a rendered option list.

    Option lists are runs of two or more quoted items separated by commas and
    a final "or"; the last such run in the source is the bound option list
    (other quoted strings, e.g. an embedded subject, stand alone or come
    earlier). Values themselves must not contain double quotes.
    """
    runs = _OPTION_RUN_RE.findall(source)
    if not runs:
        return re.findall(r'"([^"]+)"', source)
    best = runs[-1]
    for run in runs:
        if len(re.findall(r'"([^"]+)"', run)) > len(re.findall(r'"([^"]+)"', best)):
            best = run
    return re.findall(r'"([^"]+)"', best)


def _pool_values(spec: tuple, tup: SignalTuple, pools: DistractorPools) -> list[str]:
    kind, ref = spec
    if kind == "labels":
        values = list(ref)
    elif kind == "context":
        values = list(pools.get(ref))
    elif kind == "field":
        raw = tup.get(ref) or ""
        values = [v for v in raw.split(LIST_SEP) if v]
    elif kind == "meta":
        raw = tup.extraction_meta.get(ref, "")
        values = [v for v in raw.split(LIST_SEP) if v]
    else:
        raise SchemaError(f"unknown pool spec: {kind}")
    # packed lists may repeat a value; options must stay distinct
    out: list[str] = []
    seen: set[str] = set()
    for v in values:
        if v not in seen:
            seen.add(v)
            out.append(v)
    return out


def _exclusion_values(tup: SignalTuple, keys: tuple[str, ...]) -> set[str]:
    out: set[str] = set()
    for key in keys:
        raw = tup.get(key)
        if raw:
            out.update(v for v in raw.split(LIST_SEP) if v)
    return out


def _build_options(
    base: str, tup: SignalTuple, template: PromptTemplate, pools: DistractorPools, rng: random.Random
) -> list[str]:
    key = (tup.signal_type, base)
    if key not in OPTION_SLOTS:
        raise RenderError(f"{tup.signal_type}/{template.group}: no option pool for slot '{base}'")
    correct_field, spec, mode = OPTION_SLOTS[key]
    if template.slots.get(base):
        correct_field = template.slots[base]
    correct = tup.get(correct_field)
    if not correct:
        raise RenderError(f"{tup.signal_type}/{template.group}: missing correct option field '{correct_field}'")
    values = _pool_values(spec, tup, pools)

    if mode == "all":
        options: list[str] = []
        for v in values:
            if v not in options:
                options.append(v)
        if correct not in options:
            options.insert(0, correct)
        if len(options) < 2:
            raise RenderError(f"{tup.signal_type}/{template.group}: option pool too small for '{base}'")
        return options

    distractors = [v for v in values if v != correct]
    if len(distractors) < MIN_OPTIONS - 1:
        raise RenderError(f"{tup.signal_type}/{template.group}: distractor pool too small for '{base}'")
    count = rng.randint(MIN_OPTIONS, min(MAX_OPTIONS, len(distractors) + 1))
    chosen = rng.sample(distractors, count - 1)
    position = rng.randrange(count)
    chosen.insert(position, correct)
    return chosen


def _other_value(name: str, tup: SignalTuple, pools: DistractorPools, rng: random.Random) -> str:
    key = (tup.signal_type, name)
    if key not in OTHER_SLOTS:
        raise RenderError(f"{tup.signal_type}: no distractor rule for '{name}'")
    spec, excluded_keys = OTHER_SLOTS[key]
    values = _pool_values(spec, tup, pools)
    excluded = _exclusion_values(tup, excluded_keys)
    candidates = [v for v in values if v not in excluded]
    if not candidates:
        raise RenderError(f"{tup.signal_type}: distractor pool empty for '{name}'")
    return rng.choice(candidates)


def _entity_bindings(tup: SignalTuple, needed: set[str], rng: random.Random) -> dict[str, str]:
    out: dict[str, str] = {}
    wants_entity = needed & {"entity", "choice0", "choice1"}
    wants_not_entity = needed & {"not_entity", "choice0", "choice1"}
    entities = [v for v in tup.extraction_meta.get("entity_list", "").split(LIST_SEP) if v]
    if wants_entity:
        if "entity" in tup.extraction_meta:
            out["entity"] = tup.extraction_meta["entity"]
        elif entities:
            out["entity"] = rng.choice(entities)
        else:
            raise RenderError(f"{tup.signal_type}: template needs an entity but the tuple has none")
    if wants_not_entity:
        body = tup.fields[0]
        tokens = body.split()
        surfaces = set(entities)
        for attempt in range(64):
            length = rng.randint(1, min(3, len(tokens)))
            if len(tokens) < length:
                break
            start = rng.randrange(0, len(tokens) - length + 1)
            span = " ".join(tokens[start : start + length])
            if span in surfaces or span == NO_ENTITIES:
                continue
            if any(span in s or s in span for s in surfaces):
                continue
            out["not_entity"] = span
            break
        if "not_entity" not in out:
            raise RenderError(f"{tup.signal_type}: could not pick a non-entity span")
    if needed & {"choice0", "choice1"}:
        pair = [out["entity"], out["not_entity"]]
        rng.shuffle(pair)
        out["choice0"], out["choice1"] = pair
    return out


def _answer_value(rule: Mapping, tup: SignalTuple) -> str:
    kind = rule.get("kind")
    if kind == "const":
        return rule["value"]
    if kind == "presence":
        raw = tup.get(rule.get("field", "entities")) or ""
        present = bool(raw) and raw != NO_ENTITIES
        return rule["present"] if present else rule["absent"]
    if kind == "cond":
        value = tup.get(rule["field"])
        if value is None:
            raise RenderError(f"{tup.signal_type}: answer rule needs field '{rule['field']}'")
        for case in rule["cases"]:
            if case["negate"]:
                if value != case["literal"]:
                    return case["value"]
            elif value == case["literal"]:
                return case["value"]
        raise RenderError(f"{tup.signal_type}: answer rule has no case for value '{value}'")
    raise SchemaError(f"unknown answer rule kind: {kind}")


_A_AN_RE = re.compile(r"\ba/an(\s+\"?)([A-Za-z])")


def resolve_article(text: str) -> str:
    """Pick "a" or "an" for a/an slots by the next word's initial vowel."""

    def repl(m: re.Match) -> str:
        article = "an" if m.group(2).lower() in "aeiou" else "a"
        return f"{article}{m.group(1)}{m.group(2)}"

    return _A_AN_RE.sub(repl, text)


def _substitute(pattern: str, bindings: Mapping[str, str]) -> str:
    out: list[str] = []
    i = 0
    while i < len(pattern):
        ch = pattern[i]
        if ch == "{":
            if pattern.startswith("{{", i):
                out.append("{")
                i += 2
                continue
            m = PLACEHOLDER_RE.match(pattern, i)
            if not m:
                raise RenderError(f"malformed placeholder at offset {i}")
            name = m.group(1)
            if name not in bindings:
                raise RenderError(f"unbound placeholder '{name}'")
            out.append(bindings[name])
            i = m.end()
            continue
        if ch == "}":
            if pattern.startswith("}}", i):
                out.append("}")
                i += 2
                continue
            raise RenderError(f"stray '}}' at offset {i}")
        out.append(ch)
        i += 1
    return "".join(out)


def render(
    tup: SignalTuple,
    template: PromptTemplate,
    pools: DistractorPools,
    rng: random.Random,
    seed: int = 0,
) -> PromptedExample:
    if template.signal_type != tup.signal_type:
        raise RenderError(f"template {template.template_id} does not match {tup.signal_type}")

    names = template.placeholders()
    bindings: dict[str, str] = {}
    bindings.update(tup.named_fields())
    bindings.update(tup.extraction_meta)
    for alias, target_name in ALIASES.get(tup.signal_type, {}).items():
        if target_name in bindings:
            bindings[alias] = bindings[target_name]

    if tup.signal_type in ("wikipedia_entities", "paperswithcode_entity"):
        specials = names & {"entity", "not_entity", "choice0", "choice1"}
        specials -= {n for n in ("entity",) if n in bindings}
        if specials:
            bindings.update(_entity_bindings(tup, names & {"entity", "not_entity", "choice0", "choice1"}, rng))
    if tup.signal_type == "wikihow_procedure" and {"choice1", "choice2"} & names:
        pair = [bindings["first_step_headline"], bindings["second_step_headline"]]
        rng.shuffle(pair)
        bindings["choice1"], bindings["choice2"] = pair

    for name in sorted(names):
        if name in bindings:
            continue
        m = OPTION_SLOT_RE.match(name)
        if m:
            base = m.group(1)
            options = _build_options(base, tup, template, pools, rng)
            bindings[f"{base}_with_or"] = format_options(options, with_or=True)
            bindings[f"{base}_without_or"] = format_options(options, with_or=False)
            continue
        if name.startswith("other_") or name == "not_related_question":
            bindings[name] = _other_value(name, tup, pools, rng)

    if template.answer is not None:
        bindings["answer"] = _answer_value(template.answer, tup)

    target = _substitute(template.target_pattern, bindings)
    if "length" in names:
        bindings["length"] = str(word_count(target))
    source = resolve_article(_substitute(template.source_pattern, bindings))

    example = PromptedExample(
        source=source,
        target=target,
        signal_type=tup.signal_type,
        template_id=template.template_id,
        family=template.family,
        seed=seed,
        source_doc=tup.source_doc,
    )
    verdict = example.validate()
    if not verdict:
        raise RenderError(f"{template.template_id}: {verdict.reason}")
    return example


def select_template(
    registry: PromptRegistry,
    signal_type: str,
    family: str,
    tup: SignalTuple,
    seed: int,
    group: str | None = None,
) -> PromptTemplate:
    """Uniform seeded choice among the templates applicable to this tuple."""
    templates = registry.get(signal_type, family, group)
    if not templates:
        raise ConfigError(f"no templates for ({signal_type}, {family}, group={group})")
    eligible = [t for t in templates if t.applies_to(tup)]
    if not eligible:
        raise RenderError(f"no applicable template for tuple of {signal_type} (group={group})")
    rng = derive_rng(seed, "select", signal_type, family, group or "", tuple_key(tup))
    return eligible[rng.randrange(len(eligible))]


def render_with_selected(
    registry: PromptRegistry,
    tup: SignalTuple,
    family: str,
    pools: DistractorPools,
    seed: int,
    group: str | None = None,
) -> PromptedExample:
    if tup.signal_type == "plain_text_cloze":
        return render_cloze(tup, seed)
    template = select_template(registry, tup.signal_type, family, tup, seed, group)
    rng = derive_rng(seed, "render", template.template_id, tuple_key(tup))
    return render(tup, template, pools, rng, seed=seed)


CLOZE_TEMPLATE_ID = "plain_text_cloze.cloze.001"


def cloze_target(sentinels: list[str], spans: list[str]) -> str:
    """Sentinel-prefixed spans with one trailing sentinel after the last span."""
    from ..extractors.plain_text import sentinel as nth_sentinel

    parts: list[str] = []
    for mark, span in zip(sentinels, spans):
        parts.append(mark)
        parts.append(span)
    parts.append(nth_sentinel(len(sentinels)))
    return " ".join(parts)


def render_cloze(tup: SignalTuple, seed: int = 0) -> PromptedExample:
    if tup.signal_type != "plain_text_cloze":
        raise RenderError("render_cloze only accepts plain_text_cloze tuples")
    named = tup.named_fields()
    sentinels = [s for s in named["corrupted_positions"].split(LIST_SEP) if s]
    spans = [s for s in named["target_spans"].split(LIST_SEP) if s]
    if len(sentinels) != len(spans):
        raise RenderError("cloze tuple has mismatched positions/spans")
    return PromptedExample(
        source=named["corrupted_text"],
        target=cloze_target(sentinels, spans),
        signal_type=tup.signal_type,
        template_id=CLOZE_TEMPLATE_ID,
        family="cloze",
        seed=seed,
        source_doc=tup.source_doc,
    )


GAOKAO_KINDS = ("reading_mc", "listening", "cloze_mc", "reading_cloze", "cloze_hint", "grammar", "essay")


def render_gaokao(record: Mapping, kind: str) -> PromptedExample:
    """Render one exam question with the fixed prompt for its subcategory."""
    prompts = load_gaokao_prompts()
    if kind not in GAOKAO_KINDS:
        raise ConfigError(f"unknown exam question kind: {kind}")
    key = kind
    if kind == "cloze_hint" and not record.get("hint"):
        key = "cloze_hint_no_hint"
    spec = prompts[key]
    bindings = {k: str(v) for k, v in record.items() if not isinstance(v, (list, dict))}
    options = record.get("options") or []
    if options:
        bindings["options_with_or"] = format_options([str(o) for o in options], with_or=True)
    bindings.setdefault("target", str(record.get("answer", "")))
    source = _substitute(spec["source"], bindings)
    target = _substitute(spec["target"], bindings)
    example = PromptedExample(
        source=source,
        target=target,
        signal_type=f"gaokao_{kind}",
        template_id=f"gaokao.{key}",
        family="generation" if kind in ("cloze_hint", "grammar", "essay") else "multiple_choice",
        seed=0,
    )
    verdict = example.validate()
    if not verdict:
        raise RenderError(f"gaokao {kind}: {verdict.reason}")
    return example
