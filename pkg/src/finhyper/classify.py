"""Label-inclusion split, unsupervised label rankers, and supervised classifiers.

Every ranker returns a complete ordering of the label set with scores
monotone non-increasing in rank order; ties always break by the fixed
LabelSet order, which makes all rankings deterministic.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np
from scipy.special import expit

from .corpus import StopwordSet, EMPTY_STOPWORDS, normalize, tokenize, _iter_content_lines
from .errors import ConfigError, DataError, ParseError
from .termrep import TermRecord, TermVector

logger = logging.getLogger(__name__)

UNSUPERVISED_MEASURES = ("cosine", "l1", "l2")


@dataclass(frozen=True)
class Label:
    name: str
    tokens: tuple[str, ...]


class LabelSet:
    """The fixed, ordered set of mutually exclusive class labels.

    The order is the tie-breaking authority for every ranking produced in a
    run, so it must not change for the lifetime of the run.
    """

    def __init__(self, labels: Sequence[Label]):
        if not labels:
            raise ConfigError("label set is empty")
        names = [lab.name for lab in labels]
        if len(set(names)) != len(names):
            raise ConfigError(f"duplicate label names: {names}")
        token_seqs = [lab.tokens for lab in labels]
        if len(set(token_seqs)) != len(token_seqs):
            raise ConfigError("two labels normalize to the same token sequence")
        if any(not lab.tokens for lab in labels):
            empty = [lab.name for lab in labels if not lab.tokens]
            raise ConfigError(f"labels normalize to no tokens: {empty}")
        self.labels: tuple[Label, ...] = tuple(labels)
        self._by_name = {lab.name: i for i, lab in enumerate(self.labels)}
        self._by_tokens = {lab.tokens: lab.name for lab in self.labels}

    def __len__(self) -> int:
        return len(self.labels)

    def __iter__(self):
        return iter(self.labels)

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(lab.name for lab in self.labels)

    def index(self, name: str) -> int:
        return self._by_name[name]

    def canonical(self, surface: str, stopwords: StopwordSet = EMPTY_STOPWORDS) -> str | None:
        """Map a gold-label surface string onto a configured label name."""
        if surface in self._by_name:
            return surface
        tokens = normalize(tokenize(surface), stopwords).tokens
        return self._by_tokens.get(tokens)

    @classmethod
    def from_surfaces(cls, surfaces: Iterable[str], stopwords: StopwordSet = EMPTY_STOPWORDS) -> "LabelSet":
        labels = [
            Label(name=s, tokens=normalize(tokenize(s), stopwords).tokens) for s in surfaces
        ]
        return cls(labels)


def load_labels(path: str | Path, stopwords: StopwordSet = EMPTY_STOPWORDS) -> LabelSet:
    """Labels file: one label per line, '#' comments allowed; file order is rank-tie order."""
    path = Path(path)
    if not path.is_file():
        raise ConfigError(f"labels file not found: {path}")
    surfaces = [line for _, line in _iter_content_lines(path)]
    if not surfaces:
        raise ConfigError(f"labels file {path} contains no labels")
    return LabelSet.from_surfaces(surfaces, stopwords)


@dataclass(frozen=True)
class SplitResult:
    """Partition of input terms by how many label token sequences they contain."""

    subset1: tuple[TermRecord, ...]
    subset2: tuple[TermRecord, ...]
    terms: tuple[TermRecord, ...]         # the input, original order
    matches: tuple[tuple[str, ...], ...]  # matched label names per input term, input order

    def match_histogram(self) -> dict[str, int]:
        counts = {"0": 0, "1": 0, "2+": 0}
        for m in self.matches:
            key = str(len(m)) if len(m) < 2 else "2+"
            counts[key] += 1
        return counts

    def rule_labels(self) -> dict[TermRecord, str]:
        """The single matched label for every subset-1 term."""
        return {
            term: matched[0]
            for term, matched in zip(self.terms, self.matches)
            if len(matched) == 1
        }


def contains_contiguous(haystack: Sequence[str], needle: Sequence[str]) -> bool:
    needle = tuple(needle)
    haystack = tuple(haystack)
    if not needle or len(needle) > len(haystack):
        return False
    return any(
        haystack[i : i + len(needle)] == needle
        for i in range(len(haystack) - len(needle) + 1)
    )


def split_terms(terms: Sequence[TermRecord], labels: LabelSet) -> SplitResult:
    """Route terms by the number of distinct labels contained in their token sequence.

    A label matches iff its full normalized token sequence occurs contiguously
    in the term's tokens (shared stemming makes "Covered Bond" match "Bonds").
    """
    subset1: list[TermRecord] = []
    subset2: list[TermRecord] = []
    matches: list[tuple[str, ...]] = []
    for term in terms:
        matched = tuple(
            lab.name for lab in labels if contains_contiguous(term.tokens, lab.tokens)
        )
        matches.append(matched)
        if len(matched) == 1:
            subset1.append(term)
        else:
            subset2.append(term)
    return SplitResult(
        subset1=tuple(subset1),
        subset2=tuple(subset2),
        terms=tuple(terms),
        matches=tuple(matches),
    )


@dataclass(frozen=True)
class RankedPrediction:
    """Complete ordering of all labels for one term, scores aligned to ranking."""

    term: TermRecord
    ranking: tuple[str, ...]
    scores: tuple[float, ...]


def _ranked(term: TermRecord, names: Sequence[str], scores: np.ndarray) -> RankedPrediction:
    """Sort descending by score, ties broken by the given (LabelSet) order."""
    order = sorted(range(len(names)), key=lambda i: (-scores[i], i))
    return RankedPrediction(
        term=term,
        ranking=tuple(names[i] for i in order),
        scores=tuple(float(scores[i]) for i in order),
    )


def cosine_similarity(a: np.ndarray, b: np.ndarray) -> float:
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch: {a.shape} vs {b.shape}")
    norm = np.linalg.norm(a) * np.linalg.norm(b)
    if norm == 0.0:
        return 0.0
    return float(a @ b / norm)


def rank_unsupervised(
    term_vec: TermVector,
    label_vecs: Sequence[tuple[str, np.ndarray]],
    measure: str,
) -> RankedPrediction:
    """Rank labels by cosine similarity (descending) or L1/L2 distance (ascending).

    Distance scores are stored negated so scores are monotone non-increasing
    in rank order for every measure.
    """
    if measure not in UNSUPERVISED_MEASURES:
        raise ConfigError(f"unknown measure {measure!r}")
    names = [name for name, _ in label_vecs]
    x = np.asarray(term_vec.vector, dtype=float)
    scores = np.empty(len(label_vecs))
    for i, (_, vec) in enumerate(label_vecs):
        vec = np.asarray(vec, dtype=float)
        if vec.shape != x.shape:
            raise ValueError(f"dimension mismatch: {x.shape} vs {vec.shape} for label {names[i]!r}")
        if measure == "cosine":
            scores[i] = cosine_similarity(x, vec)
        elif measure == "l1":
            scores[i] = -float(np.sum(np.abs(x - vec)))
        else:
            scores[i] = -float(np.linalg.norm(x - vec))
    return _ranked(term_vec.term, names, scores)


def binarize(x: np.ndarray, threshold: float = 0.0) -> np.ndarray:
    """bit_j = 1 iff x_j > threshold (strict)."""
    return (np.asarray(x, dtype=float) > threshold).astype(np.uint8)


@dataclass
class NaiveBayesModel:
    labels: tuple[str, ...]
    class_log_prior: np.ndarray      # (L,)
    feature_log_prob1: np.ndarray    # (L, D), log P(x_j=1 | c)
    feature_log_prob0: np.ndarray    # (L, D), log P(x_j=0 | c)
    binarize_threshold: float = 0.0

    @property
    def dim(self) -> int:
        return self.feature_log_prob1.shape[1]


def train_bernoulli_nb(
    examples: Sequence[tuple[np.ndarray, str]],
    labels: LabelSet,
    alpha: float = 1.0,
    binarize_threshold: float = 0.0,
) -> NaiveBayesModel:
    """Laplace-smoothed Bernoulli Naive Bayes over binarized features.

    priors = (count_c + alpha) / (N + alpha * |labels|)
    P(x_j = 1 | c) = (count_cj + alpha) / (count_c + 2 * alpha)
    """
    if not examples:
        raise DataError("empty training set")
    if not alpha > 0:
        raise ConfigError(f"alpha={alpha!r} must be positive")
    dim = len(np.asarray(examples[0][0]).ravel())
    n_labels = len(labels)
    counts = np.zeros(n_labels)
    feature_counts = np.zeros((n_labels, dim))
    for bits, label in examples:
        bits = np.asarray(bits).ravel()
        if bits.shape[0] != dim:
            raise ValueError(f"dimension mismatch: {bits.shape[0]} vs {dim}")
        try:
            c = labels.index(label)
        except KeyError:
            raise DataError(f"example label {label!r} not in label set") from None
        counts[c] += 1
        feature_counts[c] += bits
    priors = (counts + alpha) / (len(examples) + alpha * n_labels)
    p1 = (feature_counts + alpha) / (counts[:, None] + 2.0 * alpha)
    return NaiveBayesModel(
        labels=labels.names,
        class_log_prior=np.log(priors),
        feature_log_prob1=np.log(p1),
        feature_log_prob0=np.log1p(-p1),
        binarize_threshold=binarize_threshold,
    )


def nb_rank(
    model: NaiveBayesModel, x: np.ndarray, term: TermRecord | None = None
) -> RankedPrediction:
    """Rank labels by log prior + log likelihood of the binarized input."""
    x = np.asarray(x, dtype=float).ravel()
    if x.shape[0] != model.dim:
        raise ValueError(f"dimension mismatch: {x.shape[0]} vs {model.dim}")
    bits = binarize(x, model.binarize_threshold).astype(float)
    scores = (
        model.class_log_prior
        + model.feature_log_prob1 @ bits
        + model.feature_log_prob0 @ (1.0 - bits)
    )
    return _ranked(term or TermRecord(surface="", tokens=()), model.labels, scores)


@dataclass
class LogisticRegressionModel:
    labels: tuple[str, ...]
    weights: np.ndarray     # (L, D)
    intercepts: np.ndarray  # (L,)
    l2: float = 1.0

    @property
    def dim(self) -> int:
        return self.weights.shape[1]


def logreg_objective(w: np.ndarray, b: float, X: np.ndarray, y: np.ndarray, l2: float) -> float:
    """L2-regularized negative log-likelihood; the intercept is not penalized."""
    z = X @ w + b
    nll = float(np.logaddexp(0.0, z).sum() - y @ z)
    return nll + 0.5 * l2 * float(w @ w)


def logreg_gradient(
    w: np.ndarray, b: float, X: np.ndarray, y: np.ndarray, l2: float
) -> tuple[np.ndarray, float]:
    p = expit(X @ w + b)
    return X.T @ (p - y) + l2 * w, float(np.sum(p - y))


def _fit_binary_logreg(
    X: np.ndarray, y: np.ndarray, l2: float, max_iters: int, tol: float
) -> tuple[np.ndarray, float]:
    """Full-batch gradient descent with Armijo backtracking, zero init."""
    w = np.zeros(X.shape[1])
    b = 0.0
    obj = logreg_objective(w, b, X, y, l2)
    for _ in range(max_iters):
        gw, gb = logreg_gradient(w, b, X, y, l2)
        gnorm_inf = max(float(np.max(np.abs(gw))) if gw.size else 0.0, abs(gb))
        if gnorm_inf < tol:
            break
        gsq = float(gw @ gw) + gb * gb
        step = 1.0
        for _ in range(60):
            w_new = w - step * gw
            b_new = b - step * gb
            obj_new = logreg_objective(w_new, b_new, X, y, l2)
            if obj_new <= obj - 1e-4 * step * gsq:
                break
            step *= 0.5
        else:
            break  # no productive step exists at float precision
        w, b, obj = w_new, b_new, obj_new
    return w, b


def train_logreg(
    examples: Sequence[tuple[np.ndarray, str]],
    labels: LabelSet,
    l2: float = 1.0,
    max_iters: int = 1000,
    tol: float = 1e-6,
) -> LogisticRegressionModel:
    """One-vs-rest logistic regression: one independent binary model per label."""
    if not examples:
        raise DataError("empty training set")
    if l2 < 0:
        raise ConfigError(f"l2={l2!r} must be non-negative")
    X = np.asarray([np.asarray(v, dtype=float).ravel() for v, _ in examples])
    if not np.all(np.isfinite(X)):
        raise DataError("non-finite feature values in training data")
    seen = {label for _, label in examples}
    if len(seen) < 2:
        raise DataError(f"training data contains a single class: {sorted(seen)}")
    unknown = seen - set(labels.names)
    if unknown:
        raise DataError(f"example labels not in label set: {sorted(unknown)}")
    y_names = [label for _, label in examples]
    weights = np.zeros((len(labels), X.shape[1]))
    intercepts = np.zeros(len(labels))
    for c, name in enumerate(labels.names):
        y = np.array([1.0 if lab == name else 0.0 for lab in y_names])
        weights[c], intercepts[c] = _fit_binary_logreg(X, y, l2, max_iters, tol)
    return LogisticRegressionModel(
        labels=labels.names, weights=weights, intercepts=intercepts, l2=l2
    )


def lr_rank(
    model: LogisticRegressionModel, x: np.ndarray, term: TermRecord | None = None
) -> RankedPrediction:
    """Rank labels by per-class sigmoid probability, descending."""
    x = np.asarray(x, dtype=float).ravel()
    if x.shape[0] != model.dim:
        raise ValueError(f"dimension mismatch: {x.shape[0]} vs {model.dim}")
    scores = expit(model.weights @ x + model.intercepts)
    return _ranked(term or TermRecord(surface="", tokens=()), model.labels, scores)


_MODEL_MAGIC = "finhyper-model"


def _write_matrix(fh, name: str, matrix: np.ndarray) -> None:
    fh.write(name + "\n")
    for row in np.atleast_2d(matrix):
        fh.write(" ".join(repr(float(x)) for x in row) + "\n")


def save_model(model: NaiveBayesModel | LogisticRegressionModel, path: str | Path) -> None:
    """Self-describing text file: model kind, labels, dim, then parameters."""
    path = Path(path)
    with path.open("w", encoding="utf-8") as fh:
        if isinstance(model, NaiveBayesModel):
            fh.write(f"{_MODEL_MAGIC} bernoulli_nb\n")
        elif isinstance(model, LogisticRegressionModel):
            fh.write(f"{_MODEL_MAGIC} logreg\n")
        else:
            raise TypeError(f"cannot persist {type(model).__name__}")
        fh.write(f"labels {len(model.labels)}\n")
        for name in model.labels:
            fh.write(name + "\n")
        fh.write(f"dim {model.dim}\n")
        if isinstance(model, NaiveBayesModel):
            fh.write(f"binarize_threshold {repr(float(model.binarize_threshold))}\n")
            _write_matrix(fh, "class_log_prior", model.class_log_prior)
            _write_matrix(fh, "feature_log_prob1", model.feature_log_prob1)
            _write_matrix(fh, "feature_log_prob0", model.feature_log_prob0)
        else:
            fh.write(f"l2 {repr(float(model.l2))}\n")
            _write_matrix(fh, "intercepts", model.intercepts)
            _write_matrix(fh, "weights", model.weights)


class _ModelReader:
    def __init__(self, path: Path):
        self.path = path
        self.lines = path.read_text(encoding="utf-8").splitlines()
        self.pos = 0

    def next_line(self, what: str) -> str:
        if self.pos >= len(self.lines):
            raise ParseError(self.path, self.pos + 1, f"unexpected end of file, expected {what}")
        line = self.lines[self.pos]
        self.pos += 1
        return line

    def keyword(self, key: str) -> str:
        line = self.next_line(key)
        if not line.startswith(key + " "):
            raise ParseError(self.path, self.pos, f"expected {key!r} line, got {line!r}")
        return line[len(key) + 1 :]

    def matrix(self, key: str, rows: int, cols: int) -> np.ndarray:
        line = self.next_line(key)
        if line != key:
            raise ParseError(self.path, self.pos, f"expected {key!r} section, got {line!r}")
        out = np.empty((rows, cols))
        for r in range(rows):
            fields = self.next_line(f"{key} row").split()
            if len(fields) != cols:
                raise ParseError(self.path, self.pos, f"expected {cols} values, got {len(fields)}")
            try:
                out[r] = [float(x) for x in fields]
            except ValueError:
                raise ParseError(self.path, self.pos, "non-numeric entry") from None
        return out


def load_model(path: str | Path) -> NaiveBayesModel | LogisticRegressionModel:
    path = Path(path)
    if not path.is_file():
        raise ConfigError(f"model file not found: {path}")
    reader = _ModelReader(path)
    header = reader.next_line("model header").split()
    if len(header) != 2 or header[0] != _MODEL_MAGIC:
        raise ParseError(path, 1, f"not a {_MODEL_MAGIC} file")
    kind = header[1]
    try:
        n_labels = int(reader.keyword("labels"))
    except ValueError:
        raise ParseError(path, reader.pos, "non-integer label count") from None
    names = tuple(reader.next_line("label name") for _ in range(n_labels))
    try:
        dim = int(reader.keyword("dim"))
    except ValueError:
        raise ParseError(path, reader.pos, "non-integer dim") from None
    if kind == "bernoulli_nb":
        threshold = float(reader.keyword("binarize_threshold"))
        prior = reader.matrix("class_log_prior", 1, n_labels)[0]
        p1 = reader.matrix("feature_log_prob1", n_labels, dim)
        p0 = reader.matrix("feature_log_prob0", n_labels, dim)
        return NaiveBayesModel(names, prior, p1, p0, binarize_threshold=threshold)
    if kind == "logreg":
        l2 = float(reader.keyword("l2"))
        intercepts = reader.matrix("intercepts", 1, n_labels)[0]
        weights = reader.matrix("weights", n_labels, dim)
        return LogisticRegressionModel(names, weights, intercepts, l2=l2)
    raise ParseError(path, 1, f"unknown model kind {kind!r}")


def augment_training(
    train: Sequence[TermRecord], subset1_predicted: Sequence[TermRecord]
) -> list[TermRecord]:
    """Self-training: append subset-1 terms carrying their predicted labels."""
    missing = [t.surface for t in subset1_predicted if t.gold_label is None]
    if missing:
        raise DataError(f"subset-1 terms lack predicted labels: {missing}")
    seen = {t.surface for t in train}
    dup = [t.surface for t in subset1_predicted if t.surface in seen]
    if dup:
        logger.warning("augmentation duplicates %d training surfaces: %s", len(dup), dup[:5])
    return list(train) + list(subset1_predicted)
