"""Text preprocessing: normalization, vocabulary building, bag-of-words encoding."""

from __future__ import annotations

import string
from dataclasses import dataclass, field

import numpy as np

from .corpus import EmptyCorpusError, IntentCorpus

_PUNCT_TABLE = str.maketrans("", "", string.punctuation)


def normalize_text(text: str) -> list[str]:
    """Lowercase, strip punctuation characters, split on whitespace.

    Deliberately rule-only (no stemming or lemmatization) so the pipeline is
    deterministic and dependency-free. Empty input yields an empty list.
    """
    return text.lower().translate(_PUNCT_TABLE).split()


@dataclass(frozen=True)
class Vocabulary:
    """Sorted, deduplicated token list; index order defines feature positions."""

    tokens: tuple[str, ...]
    _index: dict[str, int] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        for a, b in zip(self.tokens, self.tokens[1:]):
            if a >= b:
                raise ValueError(f"vocabulary not strictly sorted: {a!r} >= {b!r}")
        object.__setattr__(self, "_index", {t: i for i, t in enumerate(self.tokens)})

    @property
    def size(self) -> int:
        return len(self.tokens)

    def index_of(self, token: str) -> int | None:
        return self._index.get(token)


def build_vocabulary(corpus: IntentCorpus) -> Vocabulary:
    """Sorted union of normalized tokens over all patterns in the corpus."""
    tokens: set[str] = set()
    for intent in corpus.intents:
        for pattern in intent.patterns:
            tokens.update(normalize_text(pattern))
    if not tokens:
        raise EmptyCorpusError("no pattern in the corpus yields any token")
    return Vocabulary(tuple(sorted(tokens)))


def vectorize(tokens: list[str], vocab: Vocabulary) -> np.ndarray:
    """Binary presence vector over the vocabulary; unknown tokens are ignored."""
    if vocab.size == 0:
        raise ValueError("vocabulary is empty")
    vec = np.zeros(vocab.size, dtype=np.float64)
    for token in tokens:
        i = vocab.index_of(token)
        if i is not None:
            vec[i] = 1.0
    return vec
