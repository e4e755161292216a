"""Seeded training loop: shuffled mini-batches, dropout, decayed Nesterov SGD."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .corpus import IntentCorpus
from .network import (
    NetworkParams,
    TrainingConfig,
    backward_into,
    forward,
    init_network,
    loss,
    sgd_step,
)
from .text import Vocabulary, build_vocabulary, normalize_text, vectorize

DEFAULT_THRESHOLD = 0.25


@dataclass
class TrainedModel:
    params: NetworkParams
    vocab: Vocabulary
    tags: tuple[str, ...]
    threshold: float = DEFAULT_THRESHOLD

    def tag_index(self, tag: str) -> int:
        return self.tags.index(tag)


@dataclass
class EpochStats:
    epoch: int
    loss: float
    accuracy: float


@dataclass
class TrainingHistory:
    epochs: list[EpochStats] = field(default_factory=list)

    @property
    def final_accuracy(self) -> float:
        return self.epochs[-1].accuracy if self.epochs else 0.0

    @property
    def losses(self) -> list[float]:
        return [e.loss for e in self.epochs]

    @property
    def accuracies(self) -> list[float]:
        return [e.accuracy for e in self.epochs]


def build_training_set(corpus: IntentCorpus, vocab: Vocabulary):
    """(pattern vector, tag index) pairs for every pattern in the corpus."""
    xs, ys = [], []
    for tag_idx, intent in enumerate(corpus.intents):
        for pattern in intent.patterns:
            xs.append(vectorize(normalize_text(pattern), vocab))
            ys.append(tag_idx)
    return np.stack(xs), np.array(ys, dtype=np.intp)


def _evaluate(params: NetworkParams, xs: np.ndarray, ys: np.ndarray) -> tuple[float, float]:
    total_loss = 0.0
    correct = 0
    for x, y in zip(xs, ys):
        probs, _ = forward(params, x, train=False)
        total_loss += loss(probs, int(y))
        if int(np.argmax(probs)) == int(y):
            correct += 1
    n = len(ys)
    return total_loss / n, correct / n


def train(
    corpus: IntentCorpus,
    config: TrainingConfig | None = None,
    threshold: float = DEFAULT_THRESHOLD,
    stop_at_accuracy: float | None = None,
) -> tuple[TrainedModel, TrainingHistory]:
    """Train the intent network on a corpus; fully determined by the seed.

    Each epoch shuffles the pattern set, walks it in mini-batches of
    config.batch_size, and applies one optimizer update per batch with a
    global step counter driving the lr decay. History records loss and
    accuracy from a dropout-free pass after each epoch. When
    stop_at_accuracy is set, training ends at the first epoch reaching it.
    """
    config = config or TrainingConfig()
    vocab = build_vocabulary(corpus)
    xs, ys = build_training_set(corpus, vocab)
    params = init_network(vocab.size, len(corpus.intents), config.seed)
    velocity = params.zeros_like()
    grads = params.zeros_like()
    rng = np.random.default_rng(config.seed)

    history = TrainingHistory()
    step = 0
    for epoch in range(config.epochs):
        order = rng.permutation(len(ys))
        for start in range(0, len(order), config.batch_size):
            batch = order[start : start + config.batch_size]
            for g in grads.tensors():
                g.fill(0.0)
            for i in batch:
                _, cache = forward(
                    params, xs[i], train=True, rng=rng, dropout_rate=config.dropout_rate
                )
                backward_into(params, cache, int(ys[i]), grads)
            for g in grads.tensors():
                g /= len(batch)
            sgd_step(params, velocity, grads, config, step)
            step += 1
        epoch_loss, epoch_acc = _evaluate(params, xs, ys)
        history.epochs.append(EpochStats(epoch, epoch_loss, epoch_acc))
        if stop_at_accuracy is not None and epoch_acc >= stop_at_accuracy:
            break

    model = TrainedModel(params=params, vocab=vocab, tags=corpus.tags, threshold=threshold)
    return model, history
