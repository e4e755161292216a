"""Intent corpus: tagged training data (tag/patterns/responses/context)."""

from __future__ import annotations

import json
import time
import warnings
from dataclasses import dataclass, field
from pathlib import Path

MAX_RECOMMENDED_TAGS = 32


class EmptyCorpusError(ValueError):
    """Corpus has no usable training tokens."""


@dataclass(frozen=True)
class Intent:
    tag: str
    patterns: tuple[str, ...]
    responses: tuple[str, ...]
    context: str | None = None  # carried through files, unused by routing

    def __post_init__(self):
        if not self.tag:
            raise ValueError("intent tag must be nonempty")
        if not self.patterns:
            raise ValueError(f"intent {self.tag!r} has no patterns")
        if not self.responses:
            raise ValueError(f"intent {self.tag!r} has no responses")


@dataclass(frozen=True)
class IntentCorpus:
    intents: tuple[Intent, ...]
    version: int = 1

    def __post_init__(self):
        if len(self.intents) < 2:
            raise ValueError("corpus needs at least 2 intents to classify")
        tags = [i.tag for i in self.intents]
        if len(set(tags)) != len(tags):
            dupes = sorted({t for t in tags if tags.count(t) > 1})
            raise ValueError(f"duplicate intent tags: {dupes}")
        if len(tags) > MAX_RECOMMENDED_TAGS:
            warnings.warn(
                f"corpus has {len(tags)} tags; more than {MAX_RECOMMENDED_TAGS} "
                "exceeds half the second hidden layer and may classify poorly",
                stacklevel=2,
            )

    @property
    def tags(self) -> tuple[str, ...]:
        return tuple(i.tag for i in self.intents)

    def intent_for(self, tag: str) -> Intent:
        for intent in self.intents:
            if intent.tag == tag:
                return intent
        raise KeyError(tag)


def corpus_from_dict(data: dict) -> IntentCorpus:
    intents = tuple(
        Intent(
            tag=item["tag"],
            patterns=tuple(item["patterns"]),
            responses=tuple(item["responses"]),
            context=item.get("context"),
        )
        for item in data["intents"]
    )
    return IntentCorpus(intents=intents, version=int(data.get("version", 1)))


def corpus_to_dict(corpus: IntentCorpus) -> dict:
    return {
        "version": corpus.version,
        "intents": [
            {
                "tag": i.tag,
                "patterns": list(i.patterns),
                "responses": list(i.responses),
                "context": i.context,
            }
            for i in corpus.intents
        ],
    }


def load_corpus(path: str | Path) -> IntentCorpus:
    with open(path, encoding="utf-8") as f:
        return corpus_from_dict(json.load(f))


def save_corpus(corpus: IntentCorpus, path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as f:
        json.dump(corpus_to_dict(corpus), f, indent=2)
        f.write("\n")


def bundled_corpus_path() -> Path:
    return Path(__file__).parent / "data" / "desk_corpus.json"


def load_bundled_corpus() -> IntentCorpus:
    return load_corpus(bundled_corpus_path())


@dataclass
class GrowthLog:
    """Append-only record of utterances the chatbot could not match.

    Feeds offline corpus curation; entries are never consumed automatically.
    When a sink path is set, each entry is additionally appended to that file
    as one JSON line.
    """

    entries: list[dict] = field(default_factory=list)
    sink: str | Path | None = None
    clock: object = time  # anything with .time() -> float

    def append(self, utterance: str, top_tag: str | None, confidence: float) -> dict:
        entry = {
            "utterance": utterance,
            "top_tag": top_tag,
            "confidence": float(confidence),
            "timestamp": float(self.clock.time()),
        }
        self.entries.append(entry)
        if self.sink is not None:
            with open(self.sink, "a", encoding="utf-8") as f:
                f.write(json.dumps(entry) + "\n")
        return entry
