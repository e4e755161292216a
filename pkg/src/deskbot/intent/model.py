"""Prediction, response selection, and the versioned model file format."""

from __future__ import annotations

import json
import random
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .corpus import GrowthLog, IntentCorpus
from .network import NetworkParams, forward
from .text import Vocabulary, normalize_text, vectorize
from .training import TrainedModel

MODEL_FORMAT_VERSION = 1
FALLBACK_REPLY = "Sorry, I did not understand that. Could you say it another way?"


class CorruptFileError(ValueError):
    """Model file is truncated, malformed, or internally inconsistent."""


class FormatVersionMismatchError(ValueError):
    """Model file was written by an incompatible format version."""


class TagSetMismatchError(ValueError):
    """Model tag set does not match the corpus it is being used with."""


@dataclass(frozen=True)
class PredictionResult:
    ranked: tuple[tuple[str, float], ...]  # (tag, confidence), descending
    matched: bool

    @property
    def top_tag(self) -> str:
        return self.ranked[0][0]

    @property
    def top_confidence(self) -> float:
        return self.ranked[0][1]


def predict(model: TrainedModel, text: str, threshold: float | None = None) -> PredictionResult:
    """Rank all tags by softmax confidence; matched when top >= threshold."""
    if threshold is None:
        threshold = model.threshold
    x = vectorize(normalize_text(text), model.vocab)
    probs, _ = forward(model.params, x, train=False)
    order = np.argsort(-probs, kind="stable")
    ranked = tuple((model.tags[i], float(probs[i])) for i in order)
    return PredictionResult(ranked=ranked, matched=ranked[0][1] >= threshold)


def respond(
    model: TrainedModel,
    corpus: IntentCorpus,
    text: str,
    rng: random.Random,
    growth_log: GrowthLog | None = None,
    threshold: float | None = None,
) -> tuple[str, str | None]:
    """Pick a reply for the user's text; returns (reply, matched tag or None).

    A matched prediction draws uniformly from the tag's responses with the
    caller's rng. An unmatched one returns the fixed fallback and appends the
    utterance to the growth log for offline curation.
    """
    if set(model.tags) != set(corpus.tags):
        raise TagSetMismatchError(
            f"model tags {sorted(model.tags)} != corpus tags {sorted(corpus.tags)}"
        )
    result = predict(model, text, threshold)
    if result.matched:
        intent = corpus.intent_for(result.top_tag)
        return rng.choice(intent.responses), result.top_tag
    if growth_log is not None:
        growth_log.append(text, result.top_tag, result.top_confidence)
    return FALLBACK_REPLY, None


def save_model(model: TrainedModel, path: str | Path) -> None:
    """Versioned JSON; float values survive the round trip bit-exactly."""
    layers = [
        {"w": model.params.w1.tolist(), "b": model.params.b1.tolist()},
        {"w": model.params.w2.tolist(), "b": model.params.b2.tolist()},
        {"w": model.params.w3.tolist(), "b": model.params.b3.tolist()},
    ]
    doc = {
        "format_version": MODEL_FORMAT_VERSION,
        "vocab": list(model.vocab.tokens),
        "tags": list(model.tags),
        "threshold": model.threshold,
        "layers": layers,
    }
    with open(path, "w", encoding="utf-8") as f:
        json.dump(doc, f)
        f.write("\n")


def load_model(path: str | Path) -> TrainedModel:
    try:
        with open(path, encoding="utf-8") as f:
            doc = json.load(f)
    except (json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise CorruptFileError(f"cannot parse model file {path}: {exc}") from exc

    if not isinstance(doc, dict) or "format_version" not in doc:
        raise CorruptFileError(f"model file {path} has no format_version field")
    if doc["format_version"] != MODEL_FORMAT_VERSION:
        raise FormatVersionMismatchError(
            f"model format {doc['format_version']} != supported {MODEL_FORMAT_VERSION}"
        )
    try:
        vocab = Vocabulary(tuple(doc["vocab"]))
        tags = tuple(doc["tags"])
        threshold = float(doc["threshold"])
        l1, l2, l3 = doc["layers"]
        params = NetworkParams(
            w1=np.array(l1["w"], dtype=np.float64),
            b1=np.array(l1["b"], dtype=np.float64),
            w2=np.array(l2["w"], dtype=np.float64),
            b2=np.array(l2["b"], dtype=np.float64),
            w3=np.array(l3["w"], dtype=np.float64),
            b3=np.array(l3["b"], dtype=np.float64),
        )
    except (KeyError, ValueError, TypeError) as exc:
        raise CorruptFileError(f"model file {path} is malformed: {exc}") from exc

    expected = {
        "w1": (vocab.size, 128), "b1": (128,),
        "w2": (128, 64), "b2": (64,),
        "w3": (64, len(tags)), "b3": (len(tags),),
    }
    for name, shape in expected.items():
        if getattr(params, name).shape != shape:
            raise CorruptFileError(
                f"model file {path}: {name} has shape {getattr(params, name).shape}, "
                f"expected {shape}"
            )
    return TrainedModel(params=params, vocab=vocab, tags=tags, threshold=threshold)
