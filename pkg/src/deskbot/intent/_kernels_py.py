"""Numpy implementations of the network hot-loop kernels.

Fallback for deskbot.intent._speedups; both expose the same three functions
and must agree numerically to float64 rounding. Buffers are written in place
so the training loop can preallocate once.
"""

from __future__ import annotations

import numpy as np


def forward_kernel(x, w1, b1, w2, b2, w3, b3, mask1, mask2, scale, z1, a1, z2, a2, probs):
    """Three dense layers: relu, relu, softmax, with inverted-dropout masks.

    mask1/mask2 are 0/1 float vectors already drawn by the caller; scale is
    1/(1-p) in train mode and 1.0 (with all-ones masks) at inference.
    """
    np.dot(x, w1, out=z1)
    z1 += b1
    np.maximum(z1, 0.0, out=a1)
    a1 *= mask1
    a1 *= scale
    np.dot(a1, w2, out=z2)
    z2 += b2
    np.maximum(z2, 0.0, out=a2)
    a2 *= mask2
    a2 *= scale
    logits = a2 @ w3 + b3
    logits -= logits.max()
    np.exp(logits, out=probs)
    probs /= probs.sum()


def backward_kernel(x, w2, w3, mask1, mask2, scale, z1, a1, z2, a2, probs, target,
                    gw1, gb1, gw2, gb2, gw3, gb3):
    """Accumulate exact loss gradients into the g* buffers (+=).

    Uses the softmax + cross-entropy identity at the output layer and replays
    the stored dropout masks, so masked units contribute zero gradient.
    """
    dz3 = probs.copy()
    dz3[target] -= 1.0
    gw3 += np.outer(a2, dz3)
    gb3 += dz3
    dz2 = w3 @ dz3
    dz2 *= mask2
    dz2 *= scale
    dz2[z2 <= 0.0] = 0.0
    gw2 += np.outer(a1, dz2)
    gb2 += dz2
    dz1 = w2 @ dz2
    dz1 *= mask1
    dz1 *= scale
    dz1[z1 <= 0.0] = 0.0
    gw1 += np.outer(x, dz1)
    gb1 += dz1


def nesterov_update(param, vel, grad, lr, momentum):
    """v <- mu*v - lr*g; p <- p + mu*v - lr*g (lookahead form of Nesterov).

    With momentum 0 this reduces to plain SGD. Arrays may be any shape; the
    update is elementwise and in place.
    """
    vel *= momentum
    vel -= lr * grad
    param += momentum * vel
    param -= lr * grad
