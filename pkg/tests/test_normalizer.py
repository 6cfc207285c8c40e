from __future__ import annotations

import pytest
from hypothesis import given, strategies as st

from signalmine.normalizer import (
    DetectorError,
    ENGLISH_THRESHOLD,
    is_english,
    normalize_whitespace,
    purify,
    strip_non_ascii,
    trigram_detector,
    truncate_words,
    word_count,
)


def test_whitespace_folding():
    assert normalize_whitespace("a\t\tb\n c") == "a b c"
    assert normalize_whitespace("abc") == "abc"
    assert normalize_whitespace("  x  ") == "x"


def test_strip_non_ascii():
    assert strip_non_ascii("café") == "caf"
    assert strip_non_ascii("hello") == "hello"
    # oracle: per-codepoint filter
    text = "naïve test"
    assert strip_non_ascii(text) == "".join(c for c in text if ord(c) <= 127) == "nave test"


def test_purify_order_handles_stripping_artifacts():
    # stripping a non-ascii char between spaces must not leave a double space
    assert purify("a é b") == "a b"


@given(st.text(max_size=200))
def test_whitespace_idempotent(text):
    once = normalize_whitespace(text)
    assert normalize_whitespace(once) == once


@given(st.text(max_size=200))
def test_strip_non_ascii_idempotent_and_shrinking(text):
    once = strip_non_ascii(text)
    assert strip_non_ascii(once) == once
    assert len(once) <= len(text)


def test_word_count_and_truncate():
    assert word_count(normalize_whitespace("a b  c")) == 3
    assert truncate_words("a b c d", 2) == "a b"
    text = " ".join(f"w{i}" for i in range(400))
    assert truncate_words(text, 400) == text


@given(st.text(alphabet="ab ", max_size=300), st.integers(min_value=0, max_value=50))
def test_truncate_bound(text, n):
    assert word_count(truncate_words(normalize_whitespace(text), n)) <= n


def test_is_english_threshold_is_strict():
    assert is_english("x", lambda t: ("en", 0.99999))
    assert not is_english("x", lambda t: ("en", 0.9999))
    assert not is_english("x", lambda t: ("fr", 1.0))
    assert ENGLISH_THRESHOLD == 0.9999


def test_detector_failure_is_distinct():
    def broken(_):
        raise RuntimeError("backend down")

    with pytest.raises(DetectorError):
        is_english("x", broken)


def test_bundled_detector_separates_languages():
    english = (
        "The committee met on Tuesday morning to discuss the new school budget "
        "and decided that every student should receive additional support."
    )
    french = (
        "Le comité s'est réuni mardi matin pour discuter du nouveau budget "
        "scolaire et a décidé que chaque élève devrait recevoir un soutien."
    )
    lang, p_en = trigram_detector(english)
    assert lang == "en" and p_en > ENGLISH_THRESHOLD
    _, p_fr = trigram_detector(french)
    assert p_fr <= ENGLISH_THRESHOLD
    assert trigram_detector("")[1] == 0.0
