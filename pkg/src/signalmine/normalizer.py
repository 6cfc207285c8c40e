"""Text purification applied to every extracted field.

Pipeline order is fixed: whitespace folding, ASCII stripping, whitespace
folding again (stripping can merge words and leave double spaces), then the
language gate. A "word" everywhere in this package is a maximal run of
non-space characters in normalized text.
"""

from __future__ import annotations

import math
import re
from typing import Callable, Tuple

from .wordlists import COMMON_WORDS, STOP_WORDS

_WS_RE = re.compile(r"[ \t\n\r\f\v]+")

# Detector contract: text -> (language tag, probability in [0, 1]).
Detector = Callable[[str], Tuple[str, float]]

ENGLISH_THRESHOLD = 0.9999


class DetectorError(Exception):
    """The language detector itself failed (distinct from a non-English verdict)."""


def normalize_whitespace(text: str) -> str:
    return _WS_RE.sub(" ", text).strip()


def strip_non_ascii(text: str) -> str:
    return "".join(ch for ch in text if ord(ch) < 128)


def purify(text: str) -> str:
    """Whitespace -> ASCII strip -> whitespace, without the language gate."""
    return normalize_whitespace(strip_non_ascii(normalize_whitespace(text)))


def words(text: str) -> list[str]:
    return text.split()


def word_count(text: str) -> int:
    return len(text.split())


def truncate_words(text: str, n: int) -> str:
    return " ".join(text.split()[:n])


def is_english(text: str, detector: Detector) -> bool:
    """True iff the detector reports English strictly above the threshold."""
    try:
        lang, prob = detector(text)
    except DetectorError:
        raise
    except Exception as exc:  # noqa: BLE001 - oracle is arbitrary user code
        raise DetectorError(str(exc)) from exc
    return lang == "en" and prob > ENGLISH_THRESHOLD


def _trigrams(word: str) -> set[str]:
    padded = f" {word} "
    return {padded[i : i + 3] for i in range(len(padded) - 2)}


def _build_profile() -> frozenset[str]:
    grams: set[str] = set()
    for word in COMMON_WORDS | STOP_WORDS:
        grams |= _trigrams(word)
    return frozenset(grams)

_PROFILE = _build_profile()


def trigram_detector(text: str) -> tuple[str, float]:
    """Bundled fallback detector: trigram hit rate against an English profile,
    squashed to a probability. Intended for rough gating, not linguistics."""
    toks = [t for t in re.findall(r"[a-zA-Z']+", text.lower()) if t]
    if not toks:
        return ("und", 0.0)
    grams: list[str] = []
    for tok in toks:
        grams.extend(_trigrams(tok))
    if not grams:
        return ("und", 0.0)
    hit = sum(1 for g in grams if g in _PROFILE) / len(grams)
    prob = 1.0 / (1.0 + math.exp(-(hit - 0.42) * 55.0))
    return ("en", prob)
