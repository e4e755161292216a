"""Offline home-assistant providers: date, on-this-day, summaries, translation."""

from .providers import (
    AssistantAnswer,
    AssistantQuery,
    FixedClock,
    KnowledgeFixture,
    answer,
    bundled_fixture_path,
    load_fixture,
    parse_query,
)

__all__ = [
    "AssistantAnswer",
    "AssistantQuery",
    "FixedClock",
    "KnowledgeFixture",
    "answer",
    "bundled_fixture_path",
    "load_fixture",
    "parse_query",
]
