"""Reading-comprehension corpora -> (context, question, options, answer) tuples.

Contexts longer than 400 words are dropped rather than truncated; questions
must end with "?" or ":" or be cloze questions (carry a blank). The NLI-style
corpus maps onto (premise, hypothesis, label) and skips the question gate.
Web-search evidence is the only admissible source for the trivia corpus.
"""

from __future__ import annotations

import re
from typing import Mapping

from ..normalizer import purify, word_count
from ..signal_model import LIST_SEP, SignalTuple

CORPUS_KINDS = ("control", "dream", "logiqa", "reclor", "race", "race_c", "triviaqa")
MAX_CONTEXT_WORDS = 400
_BLANK_RE = re.compile(r"_{2,}")


def signal_for(kind: str) -> str:
    return f"qa_{kind}"


def is_cloze_question(question: str) -> bool:
    return bool(_BLANK_RE.search(question))


def primary_text(doc: Mapping) -> str:
    return purify(str(doc.get("context", "")) + " " + str(doc.get("question", "")))


def extract(doc: Mapping, ctx) -> list[SignalTuple]:
    kind = str(doc.get("kind", "")).lower()
    if kind not in CORPUS_KINDS:
        ctx.report.skip_doc("qa_corpus", "unknown_corpus_kind")
        return []
    signal = signal_for(kind)
    provenance = f"qa_corpus/{doc['doc_id']}"

    context = purify(str(doc.get("context", "")))
    question = purify(str(doc.get("question", "")))
    answer = purify(str(doc.get("answer", "")))
    options = [purify(str(o)) for o in doc.get("options", [])]
    options = [o for o in options if o]

    if not answer:
        ctx.report.reject(signal, "missing_answer")
        return []
    if not context or word_count(context) > MAX_CONTEXT_WORDS:
        ctx.report.reject(signal, "context_too_long" if context else "missing_context")
        return []

    if kind == "control":
        if not question:
            ctx.report.reject(signal, "missing_hypothesis")
            return []
        ctx.report.accept(signal)
        return [SignalTuple(signal, (context, question, answer), provenance)]

    if not question:
        ctx.report.reject(signal, "missing_question")
        return []
    cloze = is_cloze_question(question)
    if not (question.endswith("?") or question.endswith(":") or cloze):
        ctx.report.reject(signal, "question_terminal_mark")
        return []
    if kind == "triviaqa":
        if str(doc.get("source", "web")).lower() != "web":
            ctx.report.reject(signal, "non_web_evidence")
            return []
        ctx.report.accept(signal)
        return [SignalTuple(signal, (context, question, answer), provenance)]

    if not options:
        ctx.report.reject(signal, "missing_options")
        return []
    if answer not in options:
        ctx.report.reject(signal, "answer_not_in_options")
        return []
    ctx.report.accept(signal)
    return [
        SignalTuple(
            signal,
            (context, question, LIST_SEP.join(options), answer),
            provenance,
            {"is_cloze": "yes" if cloze else "no"},
        )
    ]
