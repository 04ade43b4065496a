"""Hot inner loop for skip-gram negative-sampling training.

Two interchangeable implementations of one epoch over a sentence batch:

* ``numba`` — scalar loops compiled with @njit(cache=True, nogil=True); the
  default whenever numba imports. nogil lets multi-worker training run
  hogwild-style on the shared matrices.
* ``numpy`` — plain numpy per-pair vector ops in Python loops; selected with
  ``FINHYPER_BACKEND=numpy`` (or automatically when numba is unavailable).

Both backends consume an identical random stream (the classic word2vec
linear-congruential generator) so they perform the same pair and negative
selections; their float accumulation order differs, so trained vectors agree
only approximately across backends. Each backend is bit-reproducible on its
own given a fixed seed and a single worker.
"""

from __future__ import annotations

import logging
import os
from functools import lru_cache

import numpy as np

from .errors import ConfigError

logger = logging.getLogger(__name__)

BACKEND_ENV_VAR = "FINHYPER_BACKEND"
BACKENDS = ("numba", "numpy")

LCG_MULT = 25214903917
LCG_INC = 11
LCG_MASK = (1 << 64) - 1

# learning rate decays linearly to this fraction of the initial rate
ALPHA_FLOOR = 0.05


def lcg_next(state: int) -> int:
    return (state * LCG_MULT + LCG_INC) & LCG_MASK


def lcg_uniform(state: int) -> float:
    """Uniform in [0, 1) from bits 16..47 of the state."""
    return ((state >> 16) & 0xFFFFFFFF) / 4294967296.0


def _numba_available() -> bool:
    try:
        import numba  # noqa: F401
    except ImportError:
        return False
    return True


def resolve_backend(name: str | None = None) -> str:
    """Pick the kernel backend: explicit arg > env var > numba when importable."""
    requested = name or os.environ.get(BACKEND_ENV_VAR)
    if requested is not None and requested not in BACKENDS:
        raise ConfigError(
            f"unknown backend {requested!r} (expected one of {', '.join(BACKENDS)})"
        )
    if requested is None:
        return "numba" if _numba_available() else "numpy"
    if requested == "numba" and not _numba_available():
        logger.warning("numba requested but not importable; falling back to numpy")
        return "numpy"
    return requested


def _sigmoid(z: float) -> float:
    if z >= 0.0:
        return 1.0 / (1.0 + np.exp(-z))
    e = np.exp(z)
    return e / (1.0 + e)


def _softplus(z: float) -> float:
    """log(1 + exp(z)), overflow-safe."""
    if z >= 0.0:
        return z + np.log1p(np.exp(-z))
    return float(np.log1p(np.exp(z)))


def sgns_epoch_numpy(
    sent_data: np.ndarray,
    sent_offsets: np.ndarray,
    syn0: np.ndarray,
    syn1: np.ndarray,
    noise_cdf: np.ndarray,
    window: int,
    negatives: int,
    alpha0: float,
    total_updates: int,
    processed: int,
    lcg_state: int,
) -> tuple[float, int, int, int]:
    """One epoch, plain-numpy path. Returns (loss_sum, pairs, processed, lcg_state)."""
    vocab_size = syn1.shape[0]
    window = int(window)
    total_updates = int(total_updates)
    processed = int(processed)
    state = int(lcg_state)
    loss_sum = 0.0
    pairs = 0
    for s in range(len(sent_offsets) - 1):
        start, end = int(sent_offsets[s]), int(sent_offsets[s + 1])
        sent = sent_data[start:end]
        n = end - start
        for pos in range(n):
            decay = 1.0 - 0.95 * (processed / total_updates)
            alpha = alpha0 * (decay if decay > ALPHA_FLOOR else ALPHA_FLOOR)
            processed += 1
            center = int(sent[pos])
            state = (state * LCG_MULT + LCG_INC) & LCG_MASK
            span = window - state % window
            lo = max(0, pos - span)
            hi = min(n - 1, pos + span)
            v = syn0[center]
            for pos2 in range(lo, hi + 1):
                if pos2 == pos:
                    continue
                context = int(sent[pos2])
                neu1e = np.zeros_like(v)
                for d in range(negatives + 1):
                    if d == 0:
                        target, label = context, 1.0
                    else:
                        state = (state * LCG_MULT + LCG_INC) & LCG_MASK
                        u = ((state >> 16) & 0xFFFFFFFF) / 4294967296.0
                        target = int(np.searchsorted(noise_cdf, u, side="right"))
                        if target >= vocab_size:
                            target = vocab_size - 1
                        if target == context:
                            continue  # drawn the positive word: skip this negative
                        label = 0.0
                    row = syn1[target]
                    z = float(v @ row)
                    loss_sum += _softplus(-z) if label == 1.0 else _softplus(z)
                    g = (label - _sigmoid(z)) * alpha
                    neu1e += g * row
                    row += g * v
                v += neu1e
                pairs += 1
    return loss_sum, pairs, processed, state


@lru_cache(maxsize=1)
def _build_numba_kernel():
    from numba import njit

    @njit(cache=True, nogil=True)
    def sgns_epoch_numba(
        sent_data,
        sent_offsets,
        syn0,
        syn1,
        noise_cdf,
        window,
        negatives,
        alpha0,
        total_updates,
        processed,
        lcg_state,
    ):
        dim = syn0.shape[1]
        vocab_size = syn1.shape[0]
        mult = np.uint64(25214903917)
        inc = np.uint64(11)
        shift16 = np.uint64(16)
        mask32 = np.uint64(0xFFFFFFFF)
        uwindow = np.uint64(window)
        state = lcg_state
        loss_sum = 0.0
        pairs = 0
        neu1e = np.empty(dim, dtype=np.float64)
        for s in range(sent_offsets.shape[0] - 1):
            start = sent_offsets[s]
            end = sent_offsets[s + 1]
            n = end - start
            for pos in range(n):
                decay = 1.0 - 0.95 * (processed / total_updates)
                if decay < 0.05:
                    decay = 0.05
                alpha = alpha0 * decay
                processed += 1
                center = sent_data[start + pos]
                state = state * mult + inc
                span = window - np.int64(state % uwindow)
                lo = pos - span
                if lo < 0:
                    lo = 0
                hi = pos + span
                if hi > n - 1:
                    hi = n - 1
                for pos2 in range(lo, hi + 1):
                    if pos2 == pos:
                        continue
                    context = np.int64(sent_data[start + pos2])
                    for k in range(dim):
                        neu1e[k] = 0.0
                    for d in range(negatives + 1):
                        if d == 0:
                            target = context
                            label = 1.0
                        else:
                            state = state * mult + inc
                            u = np.float64((state >> shift16) & mask32) / 4294967296.0
                            target = np.int64(
                                np.searchsorted(noise_cdf, u, side="right")
                            )
                            if target >= vocab_size:
                                target = vocab_size - 1
                            if target == context:
                                continue  # drawn the positive word: skip this negative
                            label = 0.0
                        z = 0.0
                        for k in range(dim):
                            z += syn0[center, k] * syn1[target, k]
                        if z >= 0.0:
                            ez = np.exp(-z)
                            p = 1.0 / (1.0 + ez)
                            loss_pos = np.log1p(ez)       # -log sigmoid(z)
                            loss_neg = z + np.log1p(ez)   # -log sigmoid(-z)
                        else:
                            ez = np.exp(z)
                            p = ez / (1.0 + ez)
                            loss_pos = -z + np.log1p(ez)
                            loss_neg = np.log1p(ez)
                        if label == 1.0:
                            loss_sum += loss_pos
                        else:
                            loss_sum += loss_neg
                        g = (label - p) * alpha
                        for k in range(dim):
                            neu1e[k] += g * syn1[target, k]
                        for k in range(dim):
                            syn1[target, k] += g * syn0[center, k]
                    for k in range(dim):
                        syn0[center, k] += neu1e[k]
                    pairs += 1
        return loss_sum, pairs, processed, state

    return sgns_epoch_numba


def _sgns_epoch_numba_wrapper(
    sent_data, sent_offsets, syn0, syn1, noise_cdf,
    window, negatives, alpha0, total_updates, processed, lcg_state,
):
    kernel = _build_numba_kernel()
    loss_sum, pairs, processed, state = kernel(
        sent_data,
        sent_offsets,
        syn0,
        syn1,
        noise_cdf,
        np.int64(window),
        np.int64(negatives),
        np.float64(alpha0),
        np.int64(total_updates),
        np.int64(processed),
        np.uint64(lcg_state),
    )
    return float(loss_sum), int(pairs), int(processed), int(state)


def get_epoch_fn(backend: str | None = None):
    """Return the epoch function for the resolved backend."""
    if resolve_backend(backend) == "numba":
        return _sgns_epoch_numba_wrapper
    return sgns_epoch_numpy
