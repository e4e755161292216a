"""Keyword query parsing and fixture-backed answers.

Everything here is offline and deterministic: the clock is injected, the
knowledge comes from a JSON fixture, and no network capability is linked
in. A networked provider would implement the same parse/answer surface.
"""

from __future__ import annotations

import datetime as _dt
import json
import re
from dataclasses import dataclass, field
from pathlib import Path

from deskbot.intent.text import normalize_text

PROVIDER_NAME = "offline-fixture"
FALLBACK_TEXT = (
    "I do not have that in my offline knowledge yet, but I would love to learn it."
)


@dataclass(frozen=True)
class AssistantQuery:
    text: str
    intent: str  # date | on_this_day | summarize | translate | unknown
    topic: str | None = None
    word: str | None = None
    language: str | None = None


@dataclass(frozen=True)
class AssistantAnswer:
    text: str
    provider: str = PROVIDER_NAME
    offline: bool = True


@dataclass(frozen=True)
class KnowledgeFixture:
    topics: dict[str, str] = field(default_factory=dict)
    on_this_day: dict[str, str] = field(default_factory=dict)  # "MM-DD" -> event
    dictionary: dict[str, dict[str, str]] = field(default_factory=dict)

    def topic(self, name: str) -> str | None:
        return self.topics.get(name.lower())

    def event_for(self, month_day: str) -> str | None:
        return self.on_this_day.get(month_day)

    def translation(self, word: str, language: str) -> str | None:
        return self.dictionary.get(word.lower(), {}).get(language.lower())


def load_fixture(path: str | Path) -> KnowledgeFixture:
    with open(path, encoding="utf-8") as f:
        doc = json.load(f)
    return KnowledgeFixture(
        topics={k.lower(): v for k, v in doc.get("topics", {}).items()},
        on_this_day=dict(doc.get("on_this_day", {})),
        dictionary={
            w.lower(): {lang.lower(): t for lang, t in entry.items()}
            for w, entry in doc.get("dictionary", {}).items()
        },
    )


def bundled_fixture_path() -> Path:
    return Path(__file__).parent / "data" / "knowledge.json"


class FixedClock:
    """Clock stub answering today() with a constant date."""

    def __init__(self, date: _dt.date):
        self._date = date

    def today(self) -> _dt.date:
        return self._date


class SystemClock:
    def today(self) -> _dt.date:
        return _dt.date.today()


_TRANSLATE_RE = re.compile(r"\btranslate\s+(.+?)\s+(?:to|into)\s+(\w+)\s*$")
_SUMMARY_PATTERNS = (
    re.compile(r"\btell me about\s+(.+)$"),
    re.compile(r"\bsummary of\s+(.+)$"),
    re.compile(r"\bsummarize\s+(.+)$"),
    re.compile(r"\bwhat do you know about\s+(.+)$"),
)


def parse_query(text: str) -> AssistantQuery:
    """Deterministic keyword detection over the normalized utterance."""
    normalized = " ".join(normalize_text(text))
    if "on this day" in normalized or "today in history" in normalized:
        return AssistantQuery(text=text, intent="on_this_day")
    match = _TRANSLATE_RE.search(normalized)
    if match:
        return AssistantQuery(
            text=text, intent="translate", word=match.group(1), language=match.group(2)
        )
    for pattern in _SUMMARY_PATTERNS:
        match = pattern.search(normalized)
        if match:
            return AssistantQuery(text=text, intent="summarize", topic=match.group(1))
    if "date" in normalized.split() or "what day is it" in normalized:
        return AssistantQuery(text=text, intent="date")
    return AssistantQuery(text=text, intent="unknown")


def _fallback() -> AssistantAnswer:
    return AssistantAnswer(text=FALLBACK_TEXT)


def answer(query: AssistantQuery, fixture: KnowledgeFixture, clock=None) -> AssistantAnswer:
    """Answer a parsed query; never fails, unknowns get a polite fallback."""
    clock = clock or SystemClock()
    if query.intent == "date":
        today = clock.today()
        return AssistantAnswer(text=f"Today is {today.strftime('%B')} {today.day}, {today.year}.")
    if query.intent == "on_this_day":
        today = clock.today()
        event = fixture.event_for(f"{today.month:02d}-{today.day:02d}")
        if event is None:
            return _fallback()
        return AssistantAnswer(
            text=f"On this day, {today.strftime('%B')} {today.day}: {event}"
        )
    if query.intent == "summarize" and query.topic:
        summary = fixture.topic(query.topic)
        return AssistantAnswer(text=summary) if summary else _fallback()
    if query.intent == "translate" and query.word and query.language:
        translation = fixture.translation(query.word, query.language)
        if translation is None:
            return _fallback()
        return AssistantAnswer(
            text=f"{query.word!r} in {query.language.capitalize()} is {translation!r}."
        )
    return _fallback()
