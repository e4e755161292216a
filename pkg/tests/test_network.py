import math

import numpy as np
import pytest

from deskbot.intent import (
    DimensionMismatchError,
    NetworkParams,
    StaleCacheError,
    TrainingConfig,
    backward,
    count_parameters,
    forward,
    init_network,
    loss,
    sgd_step,
)
from deskbot.intent.network import HIDDEN1, HIDDEN2, one_hot


def test_count_parameters_reference_size():
    assert count_parameters(118, 14) == 24398


def test_count_parameters_reference_size_is_unique_reconstruction():
    # Independent oracle: enumerate all (V, T) with T in 2..32 satisfying the
    # total; exactly one pair exists and it is (118, 14).
    solutions = [
        (v, t)
        for t in range(2, 33)
        for v in range(1, 2000)
        if count_parameters(v, t) == 24398
    ]
    assert solutions == [(118, 14)]


def test_count_parameters_small_case():
    assert count_parameters(1, 2) == 128 + 128 + 8192 + 64 + 128 + 2 == 8642


def test_count_parameters_rejects_bad_sizes():
    with pytest.raises(ValueError):
        count_parameters(0, 14)
    with pytest.raises(ValueError):
        count_parameters(10, 1)


def test_init_network_deterministic():
    a = init_network(12, 3, seed=42)
    b = init_network(12, 3, seed=42)
    for ta, tb in zip(a.tensors(), b.tensors()):
        assert np.array_equal(ta, tb)


def test_init_network_zero_biases_and_glorot_bounds():
    params = init_network(20, 4, seed=7)
    assert not params.b1.any()
    assert not params.b2.any()
    assert not params.b3.any()
    for w, fan_in, fan_out in (
        (params.w1, 20, HIDDEN1),
        (params.w2, HIDDEN1, HIDDEN2),
        (params.w3, HIDDEN2, 4),
    ):
        limit = math.sqrt(6.0 / (fan_in + fan_out))
        assert np.abs(w).max() <= limit


def test_init_network_parameter_count():
    params = init_network(118, 14, seed=0)
    total = sum(t.size for t in params.tensors())
    assert total == 24398


def test_forward_probabilities_sum_to_one():
    params = init_network(10, 5, seed=1)
    rng = np.random.default_rng(0)
    for _ in range(50):
        x = (rng.random(10) < 0.5).astype(float)
        probs, _ = forward(params, x)
        assert abs(probs.sum() - 1.0) < 1e-9
        assert ((probs > 0) & (probs < 1)).all()


def test_forward_uniform_when_output_layer_zeroed():
    params = init_network(6, 4, seed=3)
    params.w3.fill(0.0)
    params.b3.fill(0.0)
    probs, _ = forward(params, np.ones(6))
    assert np.allclose(probs, 0.25, atol=1e-12)


def test_forward_inference_is_deterministic():
    params = init_network(8, 3, seed=5)
    x = np.array([1, 0, 1, 1, 0, 0, 1, 0], dtype=float)
    p1, _ = forward(params, x)
    p2, _ = forward(params, x)
    assert np.array_equal(p1, p2)


def test_forward_rejects_wrong_length():
    params = init_network(8, 3, seed=5)
    with pytest.raises(DimensionMismatchError):
        forward(params, np.ones(9))


def test_forward_train_mode_drops_units():
    params = init_network(8, 3, seed=5)
    x = np.ones(8)
    rng = np.random.default_rng(11)
    _, cache = forward(params, x, train=True, rng=rng, dropout_rate=0.5)
    # at rate 0.5 over 192 hidden units, some units are certainly dropped
    assert cache.mask1.sum() < HIDDEN1
    assert set(np.concatenate([cache.mask1, cache.mask2]).tolist()) <= {0.0, 1.0}
    assert cache.scale == 2.0


def test_loss_known_values():
    assert loss(np.array([0.25, 0.5, 0.25]), 1) == pytest.approx(math.log(2), abs=1e-12)
    assert loss(np.array([0.0, 1.0]), 1) == 0.0


def test_loss_clamps_zero_probability():
    value = loss(np.array([1.0, 0.0]), 1)
    assert value == pytest.approx(-math.log(1e-12))
    assert math.isfinite(value)


def test_loss_accepts_one_hot_targets():
    probs = np.array([0.2, 0.3, 0.5])
    assert loss(probs, one_hot(2, 3)) == loss(probs, 2)


def test_backward_output_layer_identity():
    # d loss / d b3 is exactly probs - onehot(target)
    params = init_network(7, 3, seed=9)
    x = np.array([1, 1, 0, 0, 1, 0, 1], dtype=float)
    probs, cache = forward(params, x, train=True, dropout_rate=0.0)
    grads = backward(params, cache, 1)
    expected = probs.copy()
    expected[1] -= 1.0
    assert np.allclose(grads.b3, expected, atol=1e-12)
    assert np.allclose(grads.w3, np.outer(cache.a2, expected), atol=1e-12)


def test_backward_dropped_units_have_zero_gradient():
    params = init_network(7, 3, seed=9)
    x = np.ones(7)
    rng = np.random.default_rng(21)
    _, cache = forward(params, x, train=True, rng=rng, dropout_rate=0.5)
    grads = backward(params, cache, 0)
    dropped1 = cache.mask1 == 0.0
    dropped2 = cache.mask2 == 0.0
    assert dropped1.any() and dropped2.any()
    assert not grads.b1[dropped1].any()
    assert not grads.w1[:, dropped1].any()
    assert not grads.b2[dropped2].any()
    assert not grads.w2[:, dropped2].any()


def test_backward_stale_cache_rejected():
    params = init_network(7, 3, seed=9)
    _, cache = forward(params, np.ones(7), train=True, dropout_rate=0.0)
    other = init_network(9, 3, seed=9)
    with pytest.raises(StaleCacheError):
        backward(other, cache, 0)


def _loss_at(params, x, target):
    probs, _ = forward(params, x)
    return loss(probs, target)


def test_gradients_match_central_finite_differences():
    # Independent oracle: central differences with eps=1e-5 on a (V=10, T=3)
    # network with dropout disabled. 20 coordinates with nonzero analytic
    # gradient must agree to 1e-4 relative error; zero-gradient coordinates
    # must also be numerically flat.
    eps = 1e-5
    params = init_network(10, 3, seed=123)
    rng = np.random.default_rng(456)
    x = (rng.random(10) < 0.6).astype(float)
    x[0] = 1.0  # ensure at least one active input
    target = 2

    _, cache = forward(params, x, train=True, dropout_rate=0.0)
    grads = backward(params, cache, target)

    tensors = list(zip(params.tensors(), grads.tensors()))
    flat = [
        (t_idx, i)
        for t_idx, (p, _) in enumerate(tensors)
        for i in range(p.size)
    ]
    rng.shuffle(flat)

    checked = 0
    max_rel = 0.0
    for t_idx, i in flat:
        p, g = tensors[t_idx]
        analytic = g.ravel()[i]
        orig = p.ravel()[i]
        p.ravel()[i] = orig + eps
        lp = _loss_at(params, x, target)
        p.ravel()[i] = orig - eps
        lm = _loss_at(params, x, target)
        p.ravel()[i] = orig
        numeric = (lp - lm) / (2 * eps)
        if abs(analytic) < 1e-6:
            assert abs(numeric) < 1e-6
            continue
        rel = abs(analytic - numeric) / max(abs(analytic), abs(numeric))
        max_rel = max(max_rel, rel)
        checked += 1
        if checked == 20:
            break
    assert checked == 20
    assert max_rel < 1e-4


def test_sgd_step_plain_degenerate_case():
    # mu=0, decay=0, g=1, lr=0.01, theta=0 -> theta' = -0.01
    params = NetworkParams(*(np.zeros(s) for s in ((1, 128), (128,), (128, 64), (64,), (64, 2), (2,))))
    velocity = params.zeros_like()
    grads = params.zeros_like()
    grads.w1.fill(1.0)
    config = TrainingConfig(momentum=0.0, decay=0.0)
    sgd_step(params, velocity, grads, config, step=0)
    assert np.allclose(params.w1, -0.01, atol=1e-15)
    assert not params.b1.any()


def test_sgd_step_zero_gradient_is_noop():
    params = init_network(4, 2, seed=2)
    before = params.copy()
    velocity = params.zeros_like()
    sgd_step(params, velocity, params.zeros_like(), TrainingConfig(), step=0)
    for a, b in zip(params.tensors(), before.tensors()):
        assert np.array_equal(a, b)


def test_sgd_step_matches_scalar_trajectory_oracle():
    # Independent oracle: hand-simulated scalar loop of the update equations
    #   lr_t = lr / (1 + decay * t)
    #   v <- mu*v - lr_t*g ; theta <- theta + mu*v - lr_t*g
    # on the quadratic f(theta) = 0.5 * theta^2 (so g = theta).
    lr0, decay, mu = 0.01, 1e-6, 0.9
    theta, v = 1.0, 0.0
    expected = []
    for t in range(5):
        g = theta
        lr = lr0 / (1 + decay * t)
        v = mu * v - lr * g
        theta = theta + mu * v - lr * g
        expected.append(theta)

    config = TrainingConfig(learning_rate=lr0, decay=decay, momentum=mu, nesterov=True)
    params = NetworkParams(
        np.array([[1.0] + [0.0] * 127]), np.zeros(128),
        np.zeros((128, 64)), np.zeros(64), np.zeros((64, 2)), np.zeros(2),
    )
    velocity = params.zeros_like()
    got = []
    for t in range(5):
        grads = params.zeros_like()
        grads.w1[0, 0] = params.w1[0, 0]
        sgd_step(params, velocity, grads, config, step=t)
        got.append(params.w1[0, 0])
    assert got == pytest.approx(expected, abs=1e-15)


def test_training_config_validation():
    with pytest.raises(ValueError):
        TrainingConfig(learning_rate=0.0)
    with pytest.raises(ValueError):
        TrainingConfig(dropout_rate=1.0)
    with pytest.raises(ValueError):
        TrainingConfig(momentum=1.0)
