"""Distractor pools: where wrong options come from, per signal and slot.

Pools are either fixed label spaces, values carried by the tuple itself
(packed lists in fields or extraction_meta), or corpus-level collections
built in one pass over the tuple stream.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

from ..extractors.arxiv import DOMAINS as ARXIV_DOMAINS
from ..extractors.daily_mail import CATEGORIES as DAILY_MAIL_CATEGORIES
from ..extractors.pwc import ENTITY_TYPES as PWC_ENTITY_TYPES
from ..extractors.wikihow import ACCEPTED_CATEGORIES as WIKIHOW_CATEGORIES
from ..extractors.wordnet import PARTS_OF_SPEECH
from ..signal_model import LIST_SEP, SignalTuple


@dataclass
class DistractorPools:
    """Corpus-level value collections, deduplicated, insertion-ordered."""

    values: dict[str, list[str]] = field(default_factory=dict)
    _seen: dict[str, set[str]] = field(default_factory=dict)

    def add(self, pool: str, value: str) -> None:
        if not value:
            return
        seen = self._seen.setdefault(pool, set())
        if value not in seen:
            seen.add(value)
            self.values.setdefault(pool, []).append(value)

    def get(self, pool: str) -> list[str]:
        return self.values.get(pool, [])

    def observe(self, tup: SignalTuple) -> None:
        named = tup.named_fields()
        sig = tup.signal_type
        if sig == "daily_mail_summary":
            self.add("daily_mail_titles", named["title"])
        elif sig == "arxiv_summary":
            self.add("arxiv_titles", named["title"])
        elif sig == "wikidata_relation":
            self.add("wikidata_subjects", named["subject"])
            self.add("wikidata_properties", named["property"])
            self.add("wikidata_objects", named["object"])
        elif sig == "wikidata_entity":
            self.add("wikidata_entity_types", named["entity_type"])
        elif sig == "wikihow_category_hierarchy":
            self.add("wikihow_high_categories", named["high_category"])
        elif sig == "wikihow_goal_step":
            self.add("wikihow_goals", named["goal"])
            self.add("wikihow_step_headlines", named["step_headline"])
        elif sig == "wikihow_summary":
            self.add("wikihow_step_headlines", named["step_headline"])
        elif sig == "wikihow_procedure":
            self.add("wikihow_goals", named["goal"])
            self.add("wikihow_step_headlines", named["first_step_headline"])
            self.add("wikihow_step_headlines", named["second_step_headline"])
        elif sig == "wikihow_question":
            self.add("wikihow_questions", named["title"])
            for q in tup.extraction_meta.get("related_questions", "").split(LIST_SEP):
                self.add("wikihow_questions", q)
        elif sig in ("wordnet_pos", "wordnet_meaning", "wordnet_synonym", "wordnet_antonym"):
            self.add("wordnet_words", named["word"])
            if sig == "wordnet_synonym":
                self.add("wordnet_words", named["synonym"])
            if sig == "wordnet_antonym":
                self.add("wordnet_words", named["antonym"])

    @classmethod
    def build(cls, tuples: Iterable[SignalTuple]) -> "DistractorPools":
        pools = cls()
        for tup in tuples:
            pools.observe(tup)
        return pools


# Option slot registry: (signal, base) -> (correct field, pool spec, mode).
# Pool specs: ("labels", <tuple>), ("context", <pool name>), ("field", <field>),
# ("meta", <meta key>). Mode "all" lists the whole pool; "sample" draws 3..9
# options including the correct one.
OPTION_SLOTS: dict[tuple[str, str], tuple[str, tuple, str]] = {
    ("daily_mail_category", "choices"): ("category", ("labels", DAILY_MAIL_CATEGORIES), "all"),
    ("daily_mail_summary", "choices"): ("title", ("context", "daily_mail_titles"), "sample"),
    ("daily_mail_summary", "titles"): ("title", ("context", "daily_mail_titles"), "sample"),
    ("daily_mail_temporal", "choices"): ("second_bullet_point", ("meta", "all_bullet_points"), "all"),
    ("wikidata_relation", "objects"): ("object", ("context", "wikidata_objects"), "sample"),
    ("wikidata_relation", "subjects"): ("subject", ("context", "wikidata_subjects"), "sample"),
    ("wikidata_relation", "properties"): ("property", ("context", "wikidata_properties"), "sample"),
    ("wikidata_entity", "entity_types"): ("entity_type", ("context", "wikidata_entity_types"), "sample"),
    ("wikihow_text_category", "choices"): ("category", ("labels", WIKIHOW_CATEGORIES), "sample"),
    ("wikihow_category_hierarchy", "high_categories"): (
        "high_category", ("context", "wikihow_high_categories"), "sample"),
    ("wikihow_goal_step", "step_headlines"): ("step_headline", ("context", "wikihow_step_headlines"), "sample"),
    ("wikihow_goal_step", "goals"): ("goal", ("context", "wikihow_goals"), "sample"),
    ("wikihow_summary", "step_headlines"): ("step_headline", ("context", "wikihow_step_headlines"), "sample"),
    ("wikihow_procedure", "step_headlines"): (
        "second_step_headline", ("meta", "other_step_headlines"), "all"),
    ("wikihow_question", "questions"): ("first_related_question", ("context", "wikihow_questions"), "sample"),
    ("wikipedia_sections", "section_titles"): ("section_title", ("meta", "sibling_titles"), "sample"),
    ("wordnet_meaning", "meanings"): ("meaning", ("field", "possible_meanings"), "all"),
    ("wordnet_synonym", "choices"): ("synonym", ("context", "wordnet_words"), "sample"),
    ("wordnet_antonym", "choices"): ("antonym", ("context", "wordnet_words"), "sample"),
    ("qa_dream", "choices"): ("answer", ("field", "options"), "all"),
    ("qa_logiqa", "choices"): ("answer", ("field", "options"), "all"),
    ("qa_reclor", "choices"): ("answer", ("field", "options"), "all"),
    ("qa_race", "choices"): ("answer", ("field", "options"), "all"),
    ("qa_race_c", "choices"): ("answer", ("field", "options"), "all"),
    ("arxiv_category", "categories"): ("category", ("labels", ARXIV_DOMAINS), "all"),
    ("arxiv_summary", "titles"): ("title", ("context", "arxiv_titles"), "sample"),
    ("paperswithcode_entity", "entity_types"): ("entity_type", ("labels", PWC_ENTITY_TYPES), "sample"),
}

# {other_*} placeholders: (signal, name) -> (pool spec, fields/meta excluded).
OTHER_SLOTS: dict[tuple[str, str], tuple[tuple, tuple[str, ...]]] = {
    ("daily_mail_category", "other_category"): (("labels", DAILY_MAIL_CATEGORIES), ("category",)),
    ("wikihow_text_category", "other_category"): (("labels", WIKIHOW_CATEGORIES), ("category",)),
    ("arxiv_category", "other_category"): (("labels", ARXIV_DOMAINS), ("category",)),
    ("daily_mail_summary", "other_title"): (("context", "daily_mail_titles"), ("title",)),
    ("arxiv_summary", "other_title"): (("context", "arxiv_titles"), ("title",)),
    ("wikidata_relation", "other_object"): (("context", "wikidata_objects"), ("object",)),
    ("wikidata_relation", "other_subject"): (("context", "wikidata_subjects"), ("subject",)),
    ("wikidata_relation", "other_property"): (("context", "wikidata_properties"), ("property",)),
    ("wikidata_entity", "other_entity_type"): (("context", "wikidata_entity_types"), ("entity_type",)),
    ("paperswithcode_entity", "other_entity_type"): (("labels", PWC_ENTITY_TYPES), ("entity_type",)),
    ("wikihow_category_hierarchy", "other_high_category"): (
        ("context", "wikihow_high_categories"), ("high_category", "low_category")),
    ("wikihow_summary", "other_step_headline"): (("context", "wikihow_step_headlines"), ("step_headline",)),
    ("wordnet_meaning", "other_meaning"): (("field", "possible_meanings"), ("meaning",)),
    ("wordnet_pos", "other_POS"): (("labels", PARTS_OF_SPEECH), ("pos",)),
    ("wordnet_synonym", "other_word"): (("context", "wordnet_words"), ("word", "synonym", "all_synonyms")),
    ("wordnet_antonym", "other_word"): (("context", "wordnet_words"), ("word", "antonym", "all_antonyms")),
    ("wikipedia_sections", "other_section_title"): (("meta", "sibling_titles"), ("section_title",)),
    ("wikihow_question", "not_related_question"): (
        ("context", "wikihow_questions"), ("title", "first_related_question", "related_questions")),
}

# Placeholder aliases per signal (prompt names -> tuple field names).
ALIASES: dict[str, dict[str, str]] = {
    "wordnet_pos": {"POS": "pos"},
    "daily_mail_category": {"text": "summary"},
}

# Placeholders bound from extraction_meta or computed per tuple at render time.
META_PLACEHOLDERS: dict[str, frozenset[str]] = {
    "daily_mail_temporal": frozenset({
        "one_bullet_point", "another_bullet_point", "first_bp", "last_bp",
        "first_bullet_point", "second_bullet_point",
    }),
    "wikipedia_entities": frozenset({"entity", "not_entity", "choice0", "choice1"}),
    "paperswithcode_entity": frozenset({"entity", "not_entity", "choice0", "choice1", "entity_type"}),
    "wikihow_procedure": frozenset({"choice1", "choice2"}),
}

_OPTION_NAME_RE = None  # set below to avoid importing the templates module


def legal_placeholder(signal_type: str, name: str) -> bool:
    """Is this placeholder resolvable for tuples of the given signal?"""
    import re

    from ..signal_model import CATALOG

    st = CATALOG.get(signal_type)
    if st is None:
        return False
    if name in ("answer", "length"):
        return True
    if name in st.field_names:
        return True
    if name in META_PLACEHOLDERS.get(signal_type, ()):
        return True
    if name in ALIASES.get(signal_type, {}):
        return True
    m = re.match(r"^(.*)_(?:with|without)_or$", name)
    if m:
        return (signal_type, m.group(1)) in OPTION_SLOTS
    if name.startswith("other_") or name == "not_related_question":
        return (signal_type, name) in OTHER_SLOTS
    return False
