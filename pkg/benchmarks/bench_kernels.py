#!/usr/bin/env python3
"""Benchmark the skip-gram training kernels: numba @njit vs pure numpy.

Both backends consume the same random stream, so per-epoch losses should
agree closely; the numbers printed here are wall-clock training time for an
identical synthetic workload.

Usage:
    python3 benchmarks/bench_kernels.py [--sentences 2000] [--dim 100]
                                        [--epochs 5] [--vocab 200] [--seed 7]
"""

import argparse
import time

import numpy as np

from finhyper.corpus import corpus_from_token_sentences
from finhyper.embedding import TrainConfig, train_word2vec_stats
from finhyper.kernels import resolve_backend


def synthetic_corpus(n_sentences: int, vocab_size: int, seed: int):
    rng = np.random.default_rng(seed)
    words = [f"w{i}" for i in range(vocab_size)]
    # zipf-ish frequencies so negative sampling has a shaped distribution
    weights = 1.0 / np.arange(1, vocab_size + 1)
    weights /= weights.sum()
    sentences = [
        [str(w) for w in rng.choice(words, size=12, p=weights)]
        for _ in range(n_sentences)
    ]
    return corpus_from_token_sentences({"bench": sentences})


def run(backend: str, corpus, config: TrainConfig):
    # warm-up call compiles the numba kernel so timing excludes compilation
    warm = corpus_from_token_sentences({"w": [["a", "b", "a", "b"]] * 4})
    train_word2vec_stats(warm, TrainConfig(dim=10, min_count=1, epochs=1), backend=backend)
    start = time.perf_counter()
    _, losses = train_word2vec_stats(corpus, config, backend=backend)
    return time.perf_counter() - start, losses


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--sentences", type=int, default=2000)
    parser.add_argument("--vocab", type=int, default=200)
    parser.add_argument("--dim", type=int, default=100)
    parser.add_argument("--epochs", type=int, default=5)
    parser.add_argument("--seed", type=int, default=7)
    args = parser.parse_args()

    corpus = synthetic_corpus(args.sentences, args.vocab, args.seed)
    config = TrainConfig(dim=args.dim, epochs=args.epochs, min_count=1, seed=args.seed)
    tokens = corpus.total_tokens()
    print(f"workload: {args.sentences} sentences, {tokens} tokens, "
          f"dim={args.dim}, epochs={args.epochs} (default backend: {resolve_backend()})")

    results = {}
    for backend in ("numba", "numpy"):
        if backend == "numba" and resolve_backend("numba") != "numba":
            print("numba unavailable; skipping")
            continue
        elapsed, losses = run(backend, corpus, config)
        rate = tokens * args.epochs / elapsed
        results[backend] = (elapsed, losses)
        print(f"{backend:>6}: {elapsed:8.2f}s  ({rate:,.0f} tokens/s)  "
              f"loss {losses[0]:.4f} -> {losses[-1]:.4f}")

    if len(results) == 2:
        t_numba, l_numba = results["numba"]
        t_numpy, l_numpy = results["numpy"]
        drift = max(abs(a - b) for a, b in zip(l_numba, l_numpy))
        print(f"speedup: {t_numpy / t_numba:.1f}x  max per-epoch loss drift: {drift:.2e}")


if __name__ == "__main__":
    main()
