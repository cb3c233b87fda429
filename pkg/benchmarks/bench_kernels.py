#!/usr/bin/env python3
"""Benchmark the compiled kernels against the NumPy fallback.

Covers the three hot paths: scalar feedback marking, vectorized candidate
filtering (one guess against a whole universe), and edit distance.  Also
times a whole-game trajectory workload through the engine with whichever
backend is active.

Run from the repo root after installing:

    python3 benchmarks/bench_kernels.py [--words 2300] [--filters 2000]
"""

import argparse
import time

import numpy as np

from wordle_amuse import _kernels_py, kernels, synth
from wordle_amuse.engine import EncodedUniverse, candidate_trajectory, encode_word

try:
    from wordle_amuse import _kernels
except ImportError:
    _kernels = None


def timeit(fn, repeats=3):
    best = float("inf")
    for _ in range(repeats):
        start = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - start)
    return best


def bench_backends(args):
    rng = np.random.default_rng(0)
    words = synth.random_words(args.words, rng)
    uni = EncodedUniverse(words)
    guesses = [words[i] for i in rng.integers(0, len(words), size=args.filters)]
    guess_rows = [encode_word(g) for g in guesses]
    answer_rows = [encode_word(words[i])
                   for i in rng.integers(0, len(words), size=args.filters)]
    pairs = [(words[i], words[j])
             for i, j in rng.integers(0, len(words), size=(args.filters, 2))]

    backends = [("numpy", _kernels_py)]
    if _kernels is not None:
        backends.append(("cython", _kernels))
    else:
        print("compiled kernels not built; benchmarking the fallback only")

    results = {}
    for name, impl in backends:
        def scalar():
            for g, a in zip(guess_rows, answer_rows):
                impl.feedback_code(g, a)

        def vector():
            for g in guess_rows:
                impl.feedback_codes(g, uni.matrix)

        def lev():
            for a, b in pairs:
                impl.levenshtein(a, b)

        results[name] = {
            "feedback_code (scalar)": timeit(scalar),
            f"feedback_codes ({args.words} words)": timeit(vector),
            "levenshtein": timeit(lev),
        }

    rows = list(next(iter(results.values())))
    width = max(len(r) for r in rows) + 2
    header = f"{'kernel':<{width}}" + "".join(f"{n:>12}" for n, _ in backends)
    if len(backends) == 2:
        header += f"{'speedup':>10}"
    print(header)
    for row in rows:
        line = f"{row:<{width}}"
        for name, _ in backends:
            line += f"{results[name][row] * 1e3:>10.1f}ms"
        if len(backends) == 2:
            line += f"{results['numpy'][row] / results['cython'][row]:>9.1f}x"
        print(line)


def bench_trajectories(args):
    rng = np.random.default_rng(1)
    words = synth.random_words(args.words, rng)
    uni = EncodedUniverse(words)
    records = synth.simulate_games(args.games, words, seed=2)
    elapsed = timeit(lambda: [candidate_trajectory(g, uni) for g in records],
                     repeats=2)
    print(f"\ncandidate_trajectory x {args.games} games "
          f"({args.words}-word universe, {kernels.BACKEND_NAME} backend): "
          f"{elapsed:.2f}s ({args.games / elapsed:.0f} games/s)")


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--words", type=int, default=2300,
                        help="universe size (default: answer-list scale)")
    parser.add_argument("--filters", type=int, default=2000,
                        help="number of guesses / pairs per kernel")
    parser.add_argument("--games", type=int, default=2000,
                        help="games for the trajectory workload")
    args = parser.parse_args()
    print(f"active backend: {kernels.BACKEND_NAME}")
    bench_backends(args)
    bench_trajectories(args)


if __name__ == "__main__":
    main()
