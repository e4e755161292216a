#!/usr/bin/env python3
"""Compare the compiled network kernels against the numpy fallback.

Two views:
  - microbenchmark: per-sample forward/backward/update at the reference
    network size (118 inputs, 14 tags), calling each kernel module directly
  - end to end: full training of the bundled corpus in a subprocess, with
    and without DESKBOT_PURE_PYTHON=1

Usage: python benchmarks/bench_kernels.py [--samples 20000]
"""

import argparse
import os
import subprocess
import sys
import time

import numpy as np

from deskbot.intent import _kernels_py
from deskbot.intent.network import HIDDEN1, HIDDEN2, init_network

try:
    from deskbot.intent import _speedups
except ImportError:
    _speedups = None

V, T = 118, 14


def bench_kernels(impl, samples: int) -> dict:
    params = init_network(V, T, seed=0)
    rng = np.random.default_rng(1)
    xs = (rng.random((64, V)) < 0.1).astype(np.float64)
    mask1 = (rng.random(HIDDEN1) < 0.5).astype(np.float64)
    mask2 = (rng.random(HIDDEN2) < 0.5).astype(np.float64)
    z1, a1 = np.empty(HIDDEN1), np.empty(HIDDEN1)
    z2, a2 = np.empty(HIDDEN2), np.empty(HIDDEN2)
    probs = np.empty(T)
    grads = params.zeros_like()
    vel = params.zeros_like()

    t0 = time.perf_counter()
    for i in range(samples):
        impl.forward_kernel(
            xs[i % 64], params.w1, params.b1, params.w2, params.b2,
            params.w3, params.b3, mask1, mask2, 2.0, z1, a1, z2, a2, probs,
        )
    forward_s = time.perf_counter() - t0

    t0 = time.perf_counter()
    for i in range(samples):
        impl.backward_kernel(
            xs[i % 64], params.w2, params.w3, mask1, mask2, 2.0,
            z1, a1, z2, a2, probs, i % T,
            grads.w1, grads.b1, grads.w2, grads.b2, grads.w3, grads.b3,
        )
    backward_s = time.perf_counter() - t0

    t0 = time.perf_counter()
    for _ in range(samples):
        for p, v, g in zip(params.tensors(), vel.tensors(), grads.tensors()):
            impl.nesterov_update(p.ravel(), v.ravel(), g.ravel(), 1e-9, 0.9)
    update_s = time.perf_counter() - t0

    return {"forward": forward_s, "backward": backward_s, "update": update_s}


def bench_training(pure_python: bool) -> float:
    env = dict(os.environ)
    env.pop("DESKBOT_PURE_PYTHON", None)
    if pure_python:
        env["DESKBOT_PURE_PYTHON"] = "1"
    code = (
        "import time; "
        "from deskbot.intent.corpus import load_bundled_corpus; "
        "from deskbot.intent.network import TrainingConfig; "
        "from deskbot.intent.training import train; "
        "from deskbot.intent.backend import BACKEND; "
        "c = load_bundled_corpus(); t0 = time.perf_counter(); "
        "train(c, TrainingConfig(seed=0, epochs=200)); "
        "print(BACKEND, time.perf_counter() - t0)"
    )
    out = subprocess.run(
        [sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True
    )
    backend, seconds = out.stdout.split()
    expected = "python" if pure_python else backend
    assert backend == expected, f"subprocess picked backend {backend}"
    return float(seconds)


def main() -> int:
    parser = argparse.ArgumentParser()
    parser.add_argument("--samples", type=int, default=20_000)
    args = parser.parse_args()

    impls = {"numpy fallback": _kernels_py}
    if _speedups is not None:
        impls["compiled (cython)"] = _speedups
    else:
        print("note: compiled extension not built; benchmarking the fallback only")

    print(f"\nper-sample kernels at V={V}, T={T} ({args.samples} reps), us/call:")
    results = {name: bench_kernels(impl, args.samples) for name, impl in impls.items()}
    print(f"  {'kernel':<10}" + "".join(f"{name:>20}" for name in results))
    for op in ("forward", "backward", "update"):
        row = f"  {op:<10}"
        for name in results:
            row += f"{results[name][op] / args.samples * 1e6:>19.2f}u"
        print(row)
    if len(results) == 2:
        a, b = results["numpy fallback"], results["compiled (cython)"]
        for op in ("forward", "backward", "update"):
            print(f"  {op}: compiled is {a[op] / b[op]:.1f}x the numpy fallback")

    print("\nfull 200-epoch training of the bundled corpus (subprocess):")
    wall_compiled = None if _speedups is None else bench_training(pure_python=False)
    wall_python = bench_training(pure_python=True)
    if wall_compiled is not None:
        print(f"  compiled: {wall_compiled:.2f}s")
    print(f"  numpy fallback: {wall_python:.2f}s")
    if wall_compiled is not None:
        print(f"  speedup: {wall_python / wall_compiled:.2f}x")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
