"""Benchmark the numba kernels against the pure-numpy fallback.

Runs each hot kernel at the two problem sizes the simulations actually use
(mushroom: K=2, d=118; news: K=5, d=65) plus a full policy episode, and prints
per-call timings and speedups. Invoke with:

    python3 benchmarks/bench_kernels.py [--repeats N]
"""
import argparse
import time

import numpy as np

from calbandit import kernels
from calbandit.policy import DisjointLinUCB, PolicyConfig

SIZES = [("mushroom-scale", 2, 118), ("news-scale", 5, 65)]


def make_problem(K, d, seed=0):
    rng = np.random.default_rng(seed)
    X = rng.normal(size=(K, d))
    A = np.empty((K, d, d))
    b = rng.normal(size=(K, d))
    for k in range(K):
        M = rng.normal(size=(d, d))
        A[k] = M @ M.T + d * np.eye(d)  # comfortably SPD
    return A, b, X


def time_call(fn, repeats):
    best = float("inf")
    for _ in range(repeats):
        start = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - start)
    return best


def bench_kernel(name, build, repeats):
    results = {}
    for backend in ("numpy", "numba") if kernels.HAS_NUMBA else ("numpy",):
        kernels.use_backend(backend)
        fn = build()
        fn()  # warm the JIT / caches outside the timed region
        results[backend] = time_call(fn, repeats)
    return results


def episode(K, d, rounds=200):
    rng = np.random.default_rng(1)
    policy = DisjointLinUCB(PolicyConfig(num_arms=K, dim=d), expect_bias=False)
    contexts = rng.normal(size=(rounds, K, d))
    rewards = rng.normal(size=rounds)

    def run():
        for t in range(rounds):
            arm = policy.select_arm(contexts[t])
            policy.update(arm, contexts[t, arm], float(rewards[t]), 1.0)

    return run


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeats", type=int, default=30, help="timing repetitions (best-of)")
    args = parser.parse_args()

    if not kernels.HAS_NUMBA:
        print("numba not importable; only the numpy backend will be timed")

    original = kernels.active_backend()
    print(f"{'benchmark':<40}{'numpy':>12}{'numba':>12}{'speedup':>9}")
    try:
        for label, K, d in SIZES:
            A, b, X = make_problem(K, d)

            cases = {
                f"ucb_scores {label} (K={K}, d={d})": lambda: (
                    lambda A=A.copy(), b=b, X=X: kernels.ucb_scores(A, b, X, 1.0)
                ),
                f"rank1_update {label}": lambda: (
                    lambda A=A.copy(), bv=b.copy(): kernels.rank1_update(
                        A[0], bv[0], X[0], 0.5, 0.3
                    )
                ),
                f"sherman_morrison {label}": lambda: (
                    lambda Ai=np.linalg.inv(A[0]).copy(): kernels.sherman_morrison(
                        Ai, X[0], 0.3
                    )
                ),
                f"episode 200 rounds {label}": lambda: episode(K, d),
            }
            for name, build in cases.items():
                res = bench_kernel(name, build, args.repeats)
                np_t = res["numpy"]
                nb_t = res.get("numba")
                if nb_t is None:
                    print(f"{name:<40}{np_t * 1e6:>10.1f}us{'-':>12}{'-':>9}")
                else:
                    print(
                        f"{name:<40}{np_t * 1e6:>10.1f}us{nb_t * 1e6:>10.1f}us"
                        f"{np_t / nb_t:>8.1f}x"
                    )
    finally:
        kernels.use_backend(original)


if __name__ == "__main__":
    main()
