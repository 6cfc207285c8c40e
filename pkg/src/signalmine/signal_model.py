"""Signal typology and the shared record types.

The catalog enumerates the 30 task-relevant signal types (one per row of the
collected-signal statistics, with per-mine variants folded into their parent
id) plus the generic plain-text cloze signal. All types are immutable and the
catalog is read-only after import.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, Mapping

FORMAT_VERSION = "1"

# Separator used to pack list-valued fields (options, positions, spans) into a
# single text field.
LIST_SEP = " | "

FAMILIES = ("multiple_choice", "generation", "cloze")
SPLITS = ("train", "validation")

# Marker used for an empty entity list: tuple fields must stay non-empty.
NO_ENTITIES = "None"


class SchemaError(ValueError):
    """Structural problem: unknown signal type, malformed record, bad spec."""


@dataclass(frozen=True)
class SignalType:
    id: str
    mine: str
    field_names: tuple[str, ...]
    schema_label: str  # display form used by the statistics report

    @property
    def arity(self) -> int:
        return len(self.field_names)


def _st(id: str, mine: str, fields: str, label: str) -> SignalType:
    return SignalType(id, mine, tuple(fields.split()), label)


_CATALOG_ENTRIES = [
    _st("rotten_tomatoes_sentiment", "rotten_tomatoes", "review sentiment", "(review,rating)"),
    _st("daily_mail_category", "daily_mail", "summary category", "(text,category)"),
    _st("daily_mail_summary", "daily_mail", "title text summary", "(title,text,summary)"),
    _st("daily_mail_temporal", "daily_mail", "text events", "(text,events)"),
    _st("wikidata_entity", "wikidata", "text entity entity_type", "(text,entity,entity_type)"),
    _st("wikidata_relation", "wikidata", "text subject property object", "(subject,object,relation,text)"),
    _st("wikihow_text_category", "wikihow", "title_description category", "(text,category)"),
    _st("wikihow_category_hierarchy", "wikihow", "low_category high_category", "(low_category,high_category)"),
    _st("wikihow_goal_step", "wikihow", "goal step_headline", "(goal,steps)"),
    _st("wikihow_summary", "wikihow", "step_headline step_description", "(text,summary)"),
    _st("wikihow_procedure", "wikihow", "goal first_step_headline second_step_headline", "(first_step,second_step,goal)"),
    _st("wikihow_question", "wikihow", "title title_description first_related_question answer", "(question,description,related_questions,answer)"),
    _st("wikipedia_entities", "wikipedia", "paragraph entities", "(text,entities)"),
    _st("wikipedia_sections", "wikipedia", "section_text section_title", "(texts,titles)"),
    _st("wikipedia_sentiment", "wikipedia", "text sentiment", "(text,neutral_sentiment)"),
    _st("wordnet_pos", "wordnet", "word sentence pos", "(word,sentence,pos)"),
    _st("wordnet_meaning", "wordnet", "word sentence meaning possible_meanings", "(word,sentence,meaning,possible_meanings)"),
    _st("wordnet_synonym", "wordnet", "word sentence synonym", "(word,sentence,synonyms)"),
    _st("wordnet_antonym", "wordnet", "word sentence antonym", "(word,sentence,antonyms)"),
    _st("qa_control", "qa_corpus", "premise hypothesis label", "(premise,hypothesis,label)"),
    _st("qa_dream", "qa_corpus", "context question options answer", "(context,question,options,answer)"),
    _st("qa_logiqa", "qa_corpus", "context question options answer", "(context,question,options,answer)"),
    _st("qa_reclor", "qa_corpus", "context question options answer", "(context,question,options,answer)"),
    _st("qa_race", "qa_corpus", "context question options answer", "(context,question,options,answer)"),
    _st("qa_race_c", "qa_corpus", "context question options answer", "(context,question,options,answer)"),
    _st("qa_triviaqa", "qa_corpus", "context question answer", "(context,question,answer)"),
    _st("arxiv_category", "arxiv", "abstract category", "(text,category)"),
    _st("arxiv_summary", "arxiv", "abstract title", "(text,summary)"),
    _st("paperswithcode_entity", "paperswithcode", "sentence entities", "(text,entities,datasets,methods,tasks,metrics)"),
    _st("paperswithcode_summary", "paperswithcode", "introduction abstract", "(text,summary)"),
    _st("plain_text_cloze", "plain_text", "corrupted_text corrupted_positions target_spans", "(corrupted_text,corrupted_positions,target_spans)"),
]

CATALOG: Mapping[str, SignalType] = {st.id: st for st in _CATALOG_ENTRIES}
TASK_SIGNAL_IDS: tuple[str, ...] = tuple(st.id for st in _CATALOG_ENTRIES if st.id != "plain_text_cloze")

assert len(TASK_SIGNAL_IDS) == 30
assert len(CATALOG) == 31


@dataclass(frozen=True)
class SignalTuple:
    signal_type: str
    fields: tuple[str, ...]
    source_doc: str  # "<mine>/<doc_id>" provenance locator
    extraction_meta: Mapping[str, str] = field(default_factory=dict)

    def named_fields(self) -> dict[str, str]:
        st = CATALOG.get(self.signal_type)
        if st is None:
            raise SchemaError(f"unknown signal type: {self.signal_type}")
        return dict(zip(st.field_names, self.fields))

    def get(self, name: str) -> str | None:
        named = self.named_fields()
        if name in named:
            return named[name]
        return self.extraction_meta.get(name)


@dataclass(frozen=True)
class Verdict:
    ok: bool
    reason: str = ""

    def __bool__(self) -> bool:
        return self.ok


def validate_tuple(tup: SignalTuple, registry: Mapping[str, SignalType] = CATALOG) -> Verdict:
    """Accept, or reject naming the first violated invariant.

    An unknown signal type is a structural error (raised), not a rejection.
    """
    st = registry.get(tup.signal_type)
    if st is None:
        raise SchemaError(f"unknown signal type: {tup.signal_type}")
    if len(tup.fields) != st.arity:
        return Verdict(False, f"arity: expected {st.arity} fields, got {len(tup.fields)}")
    for name, value in zip(st.field_names, tup.fields):
        if not value:
            return Verdict(False, f"empty_field: {name}")
        if value != value.strip() or "\t" in value or "\n" in value or "  " in value:
            return Verdict(False, f"unnormalized_field: {name}")
    return Verdict(True)


def tuple_to_record(tup: SignalTuple) -> dict:
    rec = {
        "v": FORMAT_VERSION,
        "signal_type": tup.signal_type,
        "fields": tup.named_fields(),
        "source_doc": tup.source_doc,
    }
    if tup.extraction_meta:
        rec["meta"] = dict(tup.extraction_meta)
    return rec


def tuple_from_record(rec: Mapping) -> SignalTuple:
    try:
        signal_type = rec["signal_type"]
        named = rec["fields"]
        source_doc = rec["source_doc"]
    except KeyError as exc:
        raise SchemaError(f"tuple record missing key: {exc}") from exc
    st = CATALOG.get(signal_type)
    if st is None:
        raise SchemaError(f"unknown signal type: {signal_type}")
    try:
        fields = tuple(named[name] for name in st.field_names)
    except KeyError as exc:
        raise SchemaError(f"tuple record missing field: {exc}") from exc
    return SignalTuple(signal_type, fields, source_doc, dict(rec.get("meta", {})))


def dump_tuples(tuples: Iterable[SignalTuple]) -> str:
    # field order inside the record follows the SignalType's declared order
    return "".join(json.dumps(tuple_to_record(t), ensure_ascii=False) + "\n" for t in tuples)


def load_tuples(text: str) -> list[SignalTuple]:
    out = []
    for i, line in enumerate(text.splitlines(), 1):
        if not line.strip():
            continue
        try:
            rec = json.loads(line)
        except json.JSONDecodeError as exc:
            raise SchemaError(f"line {i}: not a JSON record") from exc
        out.append(tuple_from_record(rec))
    return out


@dataclass(frozen=True)
class PromptedExample:
    source: str
    target: str
    signal_type: str
    template_id: str
    family: str
    seed: int
    split: str = "train"
    source_doc: str = ""

    def validate(self) -> Verdict:
        if self.family not in FAMILIES:
            return Verdict(False, f"unknown family: {self.family}")
        if not self.target:
            return Verdict(False, "empty target")
        if self.family in ("multiple_choice", "generation"):
            if self.source.count("QUERY:") != 1:
                return Verdict(False, "source must contain QUERY: exactly once")
            if self.source.count("TEXT:") > 1:
                return Verdict(False, "source may contain TEXT: at most once")
            if "TEXT:" in self.source and self.source.index("TEXT:") > self.source.index("QUERY:"):
                return Verdict(False, "TEXT: must precede QUERY:")
        return Verdict(True)


def example_to_record(ex: PromptedExample) -> dict:
    return {
        "v": FORMAT_VERSION,
        "source": ex.source,
        "target": ex.target,
        "signal_type": ex.signal_type,
        "template_id": ex.template_id,
        "family": ex.family,
        "seed": ex.seed,
        "split": ex.split,
        "source_doc": ex.source_doc,
    }


def example_from_record(rec: Mapping) -> PromptedExample:
    try:
        return PromptedExample(
            source=rec["source"],
            target=rec["target"],
            signal_type=rec["signal_type"],
            template_id=rec["template_id"],
            family=rec["family"],
            seed=int(rec["seed"]),
            split=rec.get("split", "train"),
            source_doc=rec.get("source_doc", ""),
        )
    except KeyError as exc:
        raise SchemaError(f"example record missing key: {exc}") from exc


@dataclass(frozen=True)
class MixEntry:
    signal_type: str
    family: str
    weight: float = 1.0
    cap: int | None = None
    per_category_cap: int | None = None
    stage: int = 1
    template_group: str | None = None
    composition: Mapping[str, int] | None = None  # category value -> exact count
    composition_key: str | None = None  # field/meta key the composition counts

    def __post_init__(self) -> None:
        if self.signal_type not in CATALOG:
            raise SchemaError(f"unknown signal type in mix entry: {self.signal_type}")
        if self.family not in FAMILIES:
            raise SchemaError(f"unknown family in mix entry: {self.family}")
        if self.weight < 0:
            raise SchemaError("mix weight must be non-negative")
        if self.cap is not None and self.cap <= 0:
            raise SchemaError("cap must be positive when given")
        if self.per_category_cap is not None and self.per_category_cap <= 0:
            raise SchemaError("per_category_cap must be positive when given")
        if self.stage < 1:
            raise SchemaError("stage must be >= 1")


@dataclass(frozen=True)
class MixSpec:
    entries: tuple[MixEntry, ...]
    split_ratio: float = 0.0
    global_seed: int = 0
    name: str = "mix"

    def __post_init__(self) -> None:
        if not self.entries:
            raise SchemaError("mix spec has no entries")
        if not any(e.weight > 0 for e in self.entries):
            raise SchemaError("mix spec needs at least one entry with weight > 0")
        if not (0 <= self.split_ratio < 1):
            raise SchemaError("split_ratio must be in [0, 1)")
        stages = sorted({e.stage for e in self.entries})
        if stages != list(range(1, len(stages) + 1)):
            raise SchemaError(f"stages must be contiguous from 1, got {stages}")

    @property
    def stages(self) -> list[int]:
        return sorted({e.stage for e in self.entries})


def mixspec_from_record(rec: Mapping) -> MixSpec:
    entries = []
    for e in rec.get("entries", []):
        comp = e.get("composition")
        entries.append(
            MixEntry(
                signal_type=e["signal_type"],
                family=e["family"],
                weight=float(e.get("weight", 1.0)),
                cap=e.get("cap"),
                per_category_cap=e.get("per_category_cap"),
                stage=int(e.get("stage", 1)),
                template_group=e.get("template_group"),
                composition=dict(comp) if comp else None,
                composition_key=e.get("composition_key"),
            )
        )
    return MixSpec(
        entries=tuple(entries),
        split_ratio=float(rec.get("split_ratio", 0.0)),
        global_seed=int(rec.get("global_seed", 0)),
        name=rec.get("name", "mix"),
    )


def load_mixspec(text: str) -> MixSpec:
    try:
        rec = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError("mix spec is not valid JSON") from exc
    return mixspec_from_record(rec)
