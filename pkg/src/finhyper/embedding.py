"""Skip-gram word embeddings with negative sampling, plus table persistence.

The text format is word2vec-compatible: a "<vocab_size> <dim>" header line,
then one "<token> <v1> ... <vdim>" line per word. The same format carries
externally produced per-term vectors (keyed by '_'-joined term tokens).
"""

from __future__ import annotations

import logging
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import kernels
from .corpus import Corpus
from .errors import ConfigError, EmptyVocabularyError, ParseError

logger = logging.getLogger(__name__)

DIM_RANGE = (10, 1000)
WINDOW_RANGE = (1, 20)
NEGATIVES_RANGE = (1, 50)

NOISE_POWER = 0.75  # unigram distribution raised to the 3/4 power


@dataclass(frozen=True)
class TrainConfig:
    dim: int = 100
    window: int = 5
    negatives: int = 5
    epochs: int = 5
    initial_learning_rate: float = 0.025
    min_count: int = 2
    seed: int = 1

    def validate(self) -> None:
        checks = [
            ("dim", self.dim, DIM_RANGE),
            ("window", self.window, WINDOW_RANGE),
            ("negatives", self.negatives, NEGATIVES_RANGE),
        ]
        for name, value, (lo, hi) in checks:
            if not isinstance(value, int) or not lo <= value <= hi:
                raise ConfigError(f"{name}={value!r} outside [{lo}, {hi}]")
        if not isinstance(self.epochs, int) or self.epochs < 1:
            raise ConfigError(f"epochs={self.epochs!r} must be a positive integer")
        if not self.initial_learning_rate > 0:
            raise ConfigError(
                f"initial_learning_rate={self.initial_learning_rate!r} must be positive"
            )
        if not isinstance(self.min_count, int) or self.min_count < 0:
            raise ConfigError(f"min_count={self.min_count!r} must be >= 0")


@dataclass
class EmbeddingTable:
    """Vocabulary-to-vector map of fixed dimension. Treated as immutable once built."""

    dim: int
    vocab: tuple[str, ...]
    vectors: np.ndarray
    _index: dict[str, int] = field(init=False, repr=False)

    def __post_init__(self):
        self.vocab = tuple(self.vocab)
        self.vectors = np.asarray(self.vectors, dtype=np.float64).reshape(
            len(self.vocab), self.dim
        )
        self._index = {}
        for i, token in enumerate(self.vocab):
            if token in self._index:
                raise ValueError(f"duplicate vocabulary token {token!r}")
            self._index[token] = i
        if not np.all(np.isfinite(self.vectors)):
            raise ValueError("embedding table contains non-finite entries")

    def __len__(self) -> int:
        return len(self.vocab)

    def __contains__(self, token: str) -> bool:
        return token in self._index

    def get(self, token: str) -> np.ndarray | None:
        """Exact-match lookup on a normalized token; None for OOV."""
        i = self._index.get(token)
        return None if i is None else self.vectors[i]


def lookup(table: EmbeddingTable, token: str) -> np.ndarray | None:
    return table.get(token)


def build_vocab(corpus: Corpus, min_count: int) -> tuple[list[str], np.ndarray]:
    """Tokens with frequency >= min_count, ordered by descending frequency then lexicographically."""
    counts = Counter()
    for doc in corpus.documents:
        counts.update(doc.tokens)
    kept = [(tok, c) for tok, c in counts.items() if c >= max(min_count, 1)]
    if not kept:
        raise EmptyVocabularyError(
            f"no token reaches min_count={min_count} (corpus has {len(counts)} distinct tokens)"
        )
    kept.sort(key=lambda item: (-item[1], item[0]))
    vocab = [tok for tok, _ in kept]
    freqs = np.array([c for _, c in kept], dtype=np.float64)
    return vocab, freqs


def _encode_sentences(corpus: Corpus, index: dict[str, int]) -> tuple[np.ndarray, np.ndarray]:
    """CSR layout of in-vocabulary token ids per sentence, document then sentence order."""
    data: list[int] = []
    offsets = [0]
    for doc in corpus.documents:
        for start, end in corpus.sentence_index.get(doc.source_id, []):
            ids = [index[t] for t in doc.tokens[start:end] if t in index]
            if ids:
                data.extend(ids)
                offsets.append(len(data))
    return np.array(data, dtype=np.int32), np.array(offsets, dtype=np.int64)


def _noise_cdf(freqs: np.ndarray) -> np.ndarray:
    weights = freqs ** NOISE_POWER
    cdf = np.cumsum(weights / weights.sum())
    cdf[-1] = 1.0
    return cdf


def _worker_state(seed: int, worker: int) -> int:
    return (seed + 0x9E3779B97F4A7C15 * (worker + 1)) & kernels.LCG_MASK


def train_word2vec_stats(
    corpus: Corpus,
    config: TrainConfig,
    workers: int = 1,
    backend: str | None = None,
) -> tuple[EmbeddingTable, list[float]]:
    """Train and also return the average pair loss per epoch."""
    config.validate()
    if not isinstance(workers, int) or workers < 1:
        raise ConfigError(f"workers={workers!r} must be a positive integer")
    if not corpus.documents or corpus.total_tokens() == 0:
        raise EmptyVocabularyError("corpus is empty")
    vocab, freqs = build_vocab(corpus, config.min_count)
    index = {tok: i for i, tok in enumerate(vocab)}
    sent_data, sent_offsets = _encode_sentences(corpus, index)
    total_tokens = int(sent_data.shape[0])
    noise_cdf = _noise_cdf(freqs)

    rng = np.random.default_rng(config.seed)
    syn0 = (rng.random((len(vocab), config.dim)) - 0.5) / config.dim
    syn1 = np.zeros((len(vocab), config.dim))

    epoch_fn = kernels.get_epoch_fn(backend)
    losses: list[float] = []

    if workers == 1:
        state = config.seed & kernels.LCG_MASK
        processed = 0
        total_updates = config.epochs * total_tokens
        for _ in range(config.epochs):
            loss_sum, pairs, processed, state = epoch_fn(
                sent_data, sent_offsets, syn0, syn1, noise_cdf,
                config.window, config.negatives, config.initial_learning_rate,
                total_updates, processed, state,
            )
            losses.append(loss_sum / max(pairs, 1))
    else:
        # hogwild: unsynchronized concurrent updates to syn0/syn1; nondeterministic
        n_sentences = sent_offsets.shape[0] - 1
        batches = []
        for w in range(workers):
            picks = range(w, n_sentences, workers)
            data: list[np.ndarray] = []
            offs = [0]
            for s in picks:
                data.append(sent_data[sent_offsets[s]:sent_offsets[s + 1]])
                offs.append(offs[-1] + (sent_offsets[s + 1] - sent_offsets[s]))
            shard_data = np.concatenate(data) if data else np.empty(0, dtype=np.int32)
            batches.append((shard_data, np.array(offs, dtype=np.int64)))
        states = [_worker_state(config.seed, w) for w in range(workers)]
        processed_by = [0] * workers
        totals = [config.epochs * int(b[0].shape[0]) for b in batches]
        for _ in range(config.epochs):
            def run_shard(w: int):
                if totals[w] == 0:
                    return 0.0, 0
                loss_sum, pairs, processed_by[w], states[w] = epoch_fn(
                    batches[w][0], batches[w][1], syn0, syn1, noise_cdf,
                    config.window, config.negatives, config.initial_learning_rate,
                    totals[w], processed_by[w], states[w],
                )
                return loss_sum, pairs
            with ThreadPoolExecutor(max_workers=workers) as pool:
                results = list(pool.map(run_shard, range(workers)))
            loss_sum = sum(r[0] for r in results)
            pairs = sum(r[1] for r in results)
            losses.append(loss_sum / max(pairs, 1))

    return EmbeddingTable(config.dim, tuple(vocab), syn0), losses


def train_word2vec(
    corpus: Corpus,
    config: TrainConfig,
    workers: int = 1,
    backend: str | None = None,
) -> EmbeddingTable:
    """Skip-gram with negative sampling over the corpus sentences.

    Deterministic (bit-reproducible per backend) when workers == 1 and the
    seed is fixed; multi-worker mode trades determinism for speed.
    """
    table, _ = train_word2vec_stats(corpus, config, workers=workers, backend=backend)
    return table


def sgns_pair_loss(
    center: np.ndarray, context: np.ndarray, negatives: np.ndarray
) -> float:
    """Negative-sampling loss for one (center, context, negatives) triple."""
    z_pos = float(context @ center)
    z_neg = negatives @ center
    return float(np.logaddexp(0.0, -z_pos) + np.logaddexp(0.0, z_neg).sum())


def sgns_pair_gradients(
    center: np.ndarray, context: np.ndarray, negatives: np.ndarray
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Analytic gradients of sgns_pair_loss w.r.t. (center, context, negatives)."""
    from scipy.special import expit

    p_pos = expit(float(context @ center))
    p_neg = expit(negatives @ center)
    g_context = (p_pos - 1.0) * center
    g_negatives = p_neg[:, None] * center[None, :]
    g_center = (p_pos - 1.0) * context + p_neg @ negatives
    return g_center, g_context, g_negatives


def save_table(table: EmbeddingTable, path: str | Path) -> None:
    """Write the text format; values use shortest round-trip decimal form."""
    path = Path(path)
    bad = [t for t in table.vocab if not t or any(c.isspace() for c in t)]
    if bad:
        raise ValueError(f"tokens may not contain whitespace: {bad[:3]}")
    with path.open("w", encoding="utf-8") as fh:
        fh.write(f"{len(table.vocab)} {table.dim}\n")
        for token, row in zip(table.vocab, table.vectors):
            fh.write(token + " " + " ".join(repr(float(x)) for x in row) + "\n")


def load_table(path: str | Path) -> EmbeddingTable:
    path = Path(path)
    if not path.is_file():
        raise ConfigError(f"embedding file not found: {path}")
    with path.open(encoding="utf-8") as fh:
        header = fh.readline()
        parts = header.split()
        if len(parts) != 2:
            raise ParseError(path, 1, f"expected '<vocab_size> <dim>' header, got {header.strip()!r}")
        try:
            vocab_size, dim = int(parts[0]), int(parts[1])
        except ValueError:
            raise ParseError(path, 1, f"non-integer header fields: {header.strip()!r}") from None
        if vocab_size < 0 or dim < 1:
            raise ParseError(path, 1, f"invalid header values {vocab_size} {dim}")
        vocab: list[str] = []
        seen: set[str] = set()
        vectors = np.empty((vocab_size, dim))
        line_no = 1
        for line_no, line in enumerate(fh, start=2):
            if not line.strip():
                continue
            row_idx = len(vocab)
            if row_idx >= vocab_size:
                raise ParseError(path, line_no, f"more rows than header vocab_size {vocab_size}")
            fields = line.split()
            if len(fields) != dim + 1:
                raise ParseError(
                    path, line_no, f"expected 1 token + {dim} values, got {len(fields)} fields"
                )
            token = fields[0]
            if token in seen:
                raise ParseError(path, line_no, f"duplicate token {token!r}")
            seen.add(token)
            try:
                vectors[row_idx] = [float(x) for x in fields[1:]]
            except ValueError:
                raise ParseError(path, line_no, "non-numeric vector entry") from None
            vocab.append(token)
        if len(vocab) != vocab_size:
            raise ParseError(
                path, line_no, f"header promises {vocab_size} rows, file has {len(vocab)}"
            )
    return EmbeddingTable(dim, tuple(vocab), vectors)
