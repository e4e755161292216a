"""The 3-layer intent network: 128 and 64 hidden units, softmax over tags.

Per-sample forward/backward run through the selected kernel backend; this
module owns shapes, initialization, dropout mask generation and the
optimizer schedule.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .backend import backward_kernel, forward_kernel, nesterov_update

HIDDEN1 = 128
HIDDEN2 = 64


class DimensionMismatchError(ValueError):
    """Input vector length does not match the network's input width."""


class StaleCacheError(ValueError):
    """Forward cache shapes disagree with the parameters being updated."""


@dataclass
class TrainingConfig:
    learning_rate: float = 0.01
    decay: float = 1e-6  # per update step: lr_t = lr / (1 + decay * t)
    momentum: float = 0.9
    nesterov: bool = True
    dropout_rate: float = 0.5
    epochs: int = 200
    batch_size: int = 5
    seed: int = 0

    def __post_init__(self):
        if self.learning_rate <= 0:
            raise ValueError("learning_rate must be positive")
        if not 0 <= self.dropout_rate < 1:
            raise ValueError("dropout_rate must be in [0, 1)")
        if not 0 <= self.momentum < 1:
            raise ValueError("momentum must be in [0, 1)")
        if self.epochs < 1 or self.batch_size < 1:
            raise ValueError("epochs and batch_size must be positive")

    def lr_at(self, step: int) -> float:
        return self.learning_rate / (1.0 + self.decay * step)


@dataclass
class NetworkParams:
    w1: np.ndarray  # (V, 128)
    b1: np.ndarray  # (128,)
    w2: np.ndarray  # (128, 64)
    b2: np.ndarray  # (64,)
    w3: np.ndarray  # (64, T)
    b3: np.ndarray  # (T,)

    @property
    def input_size(self) -> int:
        return self.w1.shape[0]

    @property
    def tag_count(self) -> int:
        return self.b3.shape[0]

    def tensors(self):
        return (self.w1, self.b1, self.w2, self.b2, self.w3, self.b3)

    def zeros_like(self) -> "NetworkParams":
        return NetworkParams(*(np.zeros_like(t) for t in self.tensors()))

    def copy(self) -> "NetworkParams":
        return NetworkParams(*(t.copy() for t in self.tensors()))


def count_parameters(vocab_size: int, tag_count: int) -> int:
    """Total scalar parameters: 128*V + 128 + 128*64 + 64 + 64*T + T."""
    if vocab_size < 1:
        raise ValueError("vocab_size must be >= 1")
    if tag_count < 2:
        raise ValueError("tag_count must be >= 2")
    return (
        vocab_size * HIDDEN1 + HIDDEN1
        + HIDDEN1 * HIDDEN2 + HIDDEN2
        + HIDDEN2 * tag_count + tag_count
    )


def _glorot_uniform(rng: np.random.Generator, fan_in: int, fan_out: int) -> np.ndarray:
    limit = math.sqrt(6.0 / (fan_in + fan_out))
    return rng.uniform(-limit, limit, size=(fan_in, fan_out))


def init_network(vocab_size: int, tag_count: int, seed: int) -> NetworkParams:
    """Seeded uniform Glorot weights, zero biases; same seed, same bits."""
    count_parameters(vocab_size, tag_count)  # validates bounds
    rng = np.random.default_rng(seed)
    return NetworkParams(
        w1=_glorot_uniform(rng, vocab_size, HIDDEN1),
        b1=np.zeros(HIDDEN1),
        w2=_glorot_uniform(rng, HIDDEN1, HIDDEN2),
        b2=np.zeros(HIDDEN2),
        w3=_glorot_uniform(rng, HIDDEN2, tag_count),
        b3=np.zeros(tag_count),
    )


@dataclass
class ForwardCache:
    x: np.ndarray
    mask1: np.ndarray
    mask2: np.ndarray
    scale: float
    z1: np.ndarray
    a1: np.ndarray
    z2: np.ndarray
    a2: np.ndarray
    probs: np.ndarray
    train: bool


_ONES1 = np.ones(HIDDEN1)
_ONES2 = np.ones(HIDDEN2)


def forward(
    params: NetworkParams,
    x: np.ndarray,
    train: bool = False,
    rng: np.random.Generator | None = None,
    dropout_rate: float = 0.5,
) -> tuple[np.ndarray, ForwardCache]:
    """Run the network on one feature vector; returns (probabilities, cache).

    Train mode applies inverted dropout to both hidden activations (kept
    units scaled by 1/(1-p)), drawing masks from rng; inference is a pure
    deterministic pass.
    """
    x = np.ascontiguousarray(x, dtype=np.float64)
    if x.shape != (params.input_size,):
        raise DimensionMismatchError(
            f"input has shape {x.shape}, network expects ({params.input_size},)"
        )
    if train and dropout_rate > 0:
        if rng is None:
            raise ValueError("train-mode forward with dropout needs an rng")
        keep = 1.0 - dropout_rate
        mask1 = (rng.random(HIDDEN1) < keep).astype(np.float64)
        mask2 = (rng.random(HIDDEN2) < keep).astype(np.float64)
        scale = 1.0 / keep
    else:
        mask1, mask2, scale = _ONES1, _ONES2, 1.0

    t = params.tag_count
    z1 = np.empty(HIDDEN1)
    a1 = np.empty(HIDDEN1)
    z2 = np.empty(HIDDEN2)
    a2 = np.empty(HIDDEN2)
    probs = np.empty(t)
    forward_kernel(
        x, params.w1, params.b1, params.w2, params.b2, params.w3, params.b3,
        mask1, mask2, scale, z1, a1, z2, a2, probs,
    )
    cache = ForwardCache(x, mask1, mask2, scale, z1, a1, z2, a2, probs, train)
    return probs, cache


def loss(probs: np.ndarray, target: int | np.ndarray) -> float:
    """Categorical cross-entropy: -ln(p_target), p clamped to >= 1e-12."""
    idx = int(np.argmax(target)) if isinstance(target, np.ndarray) else int(target)
    return -math.log(max(float(probs[idx]), 1e-12))


def backward_into(
    params: NetworkParams, cache: ForwardCache, target: int, grads: NetworkParams
) -> None:
    """Accumulate (+=) the loss gradients for one sample into grads."""
    if cache.x.shape[0] != params.input_size or cache.probs.shape[0] != params.tag_count:
        raise StaleCacheError("cache shapes do not match the network parameters")
    backward_kernel(
        cache.x, params.w2, params.w3, cache.mask1, cache.mask2, cache.scale,
        cache.z1, cache.a1, cache.z2, cache.a2, cache.probs, int(target),
        grads.w1, grads.b1, grads.w2, grads.b2, grads.w3, grads.b3,
    )


def backward(params: NetworkParams, cache: ForwardCache, target: int | np.ndarray) -> NetworkParams:
    """Exact analytic gradients for one sample, same shapes as the parameters."""
    idx = int(np.argmax(target)) if isinstance(target, np.ndarray) else int(target)
    grads = params.zeros_like()
    backward_into(params, cache, idx, grads)
    return grads


def sgd_step(
    params: NetworkParams,
    velocity: NetworkParams,
    grads: NetworkParams,
    config: TrainingConfig,
    step: int,
) -> tuple[NetworkParams, NetworkParams]:
    """One optimizer update at global step t (decayed lr, Nesterov momentum).

    Updates params/velocity in place and returns them; the returned values
    are authoritative either way.
    """
    lr = config.lr_at(step)
    if config.nesterov:
        for p, v, g in zip(params.tensors(), velocity.tensors(), grads.tensors()):
            nesterov_update(p.ravel(), v.ravel(), g.ravel(), lr, config.momentum)
    else:
        for p, v, g in zip(params.tensors(), velocity.tensors(), grads.tensors()):
            v *= config.momentum
            v -= lr * g
            p += v
    return params, velocity


def one_hot(index: int, size: int) -> np.ndarray:
    vec = np.zeros(size)
    vec[index] = 1.0
    return vec


def uniform_params(params: NetworkParams, value: float = 0.0) -> NetworkParams:
    """Copy of params with every tensor set to a constant (test helper)."""
    out = params.copy()
    for t in out.tensors():
        t.fill(value)
    return out


__all__ = [
    "HIDDEN1",
    "HIDDEN2",
    "DimensionMismatchError",
    "ForwardCache",
    "NetworkParams",
    "StaleCacheError",
    "TrainingConfig",
    "backward",
    "backward_into",
    "count_parameters",
    "forward",
    "init_network",
    "loss",
    "one_hot",
    "sgd_step",
]
