"""Mean rank / accuracy metrics and the composite system runner.

A system = embedding source + per-subset classifier choice + training-set
policy. run_system executes the full pipeline (embed, split, classify each
subset, optionally self-train, merge) and emits a plain-text report plus a
line-delimited prediction record stream.
"""

from __future__ import annotations

import json
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Callable, Sequence

import numpy as np

from . import classify, embedding, kernels, termrep
from .classify import LabelSet, RankedPrediction, SplitResult
from .corpus import Corpus
from .embedding import EmbeddingTable, TrainConfig
from .errors import ConfigError, DataError, FinhyperError
from .termrep import TermRecord, TermVector

logger = logging.getLogger(__name__)

CLASSIFIER_KINDS = ("cosine", "l1", "l2", "nb", "logreg")
TRAIN_POLICIES = ("original", "augmented")


@dataclass(frozen=True)
class Metrics:
    """mean_rank in [1, |labels|], accuracy in [0, 1], over n scored terms."""

    mean_rank: float
    accuracy: float
    n: int


def gold_rank(prediction: RankedPrediction, gold: str) -> int:
    """1-based position of the gold label in the ranking."""
    try:
        return prediction.ranking.index(gold) + 1
    except ValueError:
        raise ValueError(
            f"gold label {gold!r} missing from ranking {prediction.ranking}"
        ) from None


def mean_rank(predictions: Sequence[RankedPrediction], gold: Sequence[str]) -> float:
    """Mean over terms of the 1-based gold-label position."""
    if len(predictions) != len(gold):
        raise ValueError(f"{len(predictions)} predictions vs {len(gold)} gold labels")
    if not predictions:
        return math.nan
    return sum(gold_rank(p, g) for p, g in zip(predictions, gold)) / len(predictions)


def accuracy(predictions: Sequence[RankedPrediction], gold: Sequence[str]) -> float:
    """Fraction of terms whose gold label is ranked first."""
    if len(predictions) != len(gold):
        raise ValueError(f"{len(predictions)} predictions vs {len(gold)} gold labels")
    if not predictions:
        return math.nan
    return sum(1 for p, g in zip(predictions, gold) if gold_rank(p, g) == 1) / len(predictions)


def compute_metrics(predictions: Sequence[RankedPrediction], gold: Sequence[str]) -> Metrics:
    return Metrics(mean_rank(predictions, gold), accuracy(predictions, gold), len(predictions))


@dataclass(frozen=True)
class TrainedSource:
    """Train skip-gram embeddings on the run corpus."""

    config: TrainConfig


@dataclass(frozen=True)
class ExternalSource:
    """Load pre-composed per-term vectors from an embedding text file."""

    path: str
    dim: int | None = None  # declared dim to check against the file


@dataclass(frozen=True)
class SystemConfig:
    embedding_source: TrainedSource | ExternalSource
    subset1_classifier: str
    subset2_classifier: str
    subset2_train_policy: str = "augmented"

    def validate(self) -> None:
        for attr in ("subset1_classifier", "subset2_classifier"):
            kind = getattr(self, attr)
            if kind not in CLASSIFIER_KINDS:
                raise ConfigError(f"{attr}={kind!r} (expected one of {CLASSIFIER_KINDS})")
        if self.subset2_train_policy not in TRAIN_POLICIES:
            raise ConfigError(
                f"subset2_train_policy={self.subset2_train_policy!r} "
                f"(expected one of {TRAIN_POLICIES})"
            )
        if isinstance(self.embedding_source, TrainedSource):
            self.embedding_source.config.validate()

    def summary(self) -> str:
        if isinstance(self.embedding_source, TrainedSource):
            source = f"trained dim={self.embedding_source.config.dim}"
        else:
            source = f"external {self.embedding_source.path}"
        return (
            f"embedding={source} subset1={self.subset1_classifier} "
            f"subset2={self.subset2_classifier} train_policy={self.subset2_train_policy}"
        )


@dataclass
class SystemResult:
    config: SystemConfig
    seed: int
    backend: str
    subset1: Metrics | None
    subset2: Metrics | None
    combined: Metrics
    records: list[dict]
    rule_agreement: tuple[int, int]  # (agreeing subset-1 terms, scored subset-1 terms)
    embedding_info: str
    errors: list[str]


def canonicalize_gold(terms: Sequence[TermRecord], labels: LabelSet, where: str) -> list[TermRecord]:
    """Rewrite gold label surfaces onto configured label names; reject unknowns."""
    out = []
    for term in terms:
        if term.gold_label is None:
            out.append(term)
            continue
        name = labels.canonical(term.gold_label)
        if name is None:
            raise DataError(
                f"{where}: gold label {term.gold_label!r} of term {term.surface!r} "
                f"matches no configured label"
            )
        out.append(replace(term, gold_label=name))
    return out


def _label_vectors(labels: LabelSet, table: EmbeddingTable, external: bool) -> list[tuple[str, np.ndarray]]:
    pairs = []
    for lab in labels:
        if external:
            vec = table.get(termrep.term_key(lab.tokens))
            if vec is None:
                logger.warning("label %r has no row in the external table", lab.name)
                vec = np.zeros(table.dim)
        else:
            vec = termrep.embed_label(lab.tokens, table).vector
        pairs.append((lab.name, vec))
    return pairs


def _make_ranker(
    kind: str,
    labels: LabelSet,
    label_vecs: list[tuple[str, np.ndarray]],
    train_vectors: list[TermVector],
) -> Callable[[TermVector], RankedPrediction]:
    """Build a term-vector -> RankedPrediction function for one classifier spec."""
    if kind in classify.UNSUPERVISED_MEASURES:
        return lambda tv: classify.rank_unsupervised(tv, label_vecs, kind)
    examples = [(tv.vector, tv.term.gold_label) for tv in train_vectors]
    if kind == "nb":
        model = classify.train_bernoulli_nb(
            [(classify.binarize(vec), label) for vec, label in examples], labels
        )
        return lambda tv: classify.nb_rank(model, tv.vector, term=tv.term)
    if kind == "logreg":
        model = classify.train_logreg(examples, labels)
        return lambda tv: classify.lr_rank(model, tv.vector, term=tv.term)
    raise ConfigError(f"unknown classifier kind {kind!r}")


def _resolve_table(
    source: TrainedSource | ExternalSource,
    corpus: Corpus | None,
    workers: int,
    backend: str | None,
) -> tuple[EmbeddingTable, str, bool]:
    """Returns (table, human-readable info line, is_external)."""
    if isinstance(source, TrainedSource):
        if corpus is None:
            raise ConfigError("trained embedding source requires a corpus")
        table, losses = embedding.train_word2vec_stats(
            corpus, source.config, workers=workers, backend=backend
        )
        info = (
            f"trained dim={table.dim} vocab={len(table)} epochs={source.config.epochs} "
            f"final_loss={losses[-1]:.6f}"
        )
        return table, info, False
    table = embedding.load_table(source.path)
    if source.dim is not None and table.dim != source.dim:
        raise ConfigError(
            f"external embedding file has dim {table.dim} but config declares dim {source.dim}"
        )
    return table, f"external dim={table.dim} rows={len(table)} path={source.path}", True


def run_system(
    config: SystemConfig,
    train_terms: Sequence[TermRecord],
    test_terms: Sequence[TermRecord],
    corpus: Corpus | None,
    labels: LabelSet,
    seed: int | None = None,
    workers: int = 1,
    backend: str | None = None,
) -> SystemResult:
    """Execute one composite system and gather per-subset plus combined metrics.

    Component failures inside one subset are captured so the report still
    covers whatever succeeded.
    """
    config.validate()
    if seed is None:
        seed = (
            config.embedding_source.config.seed
            if isinstance(config.embedding_source, TrainedSource)
            else 0
        )
    backend_name = kernels.resolve_backend(backend)

    table, embedding_info, external = _resolve_table(
        config.embedding_source, corpus, workers, backend_name
    )

    def vectorize(term: TermRecord) -> TermVector:
        if external:
            return termrep.external_term_vector(term, table)
        return termrep.embed_term(term, table)

    train_terms = canonicalize_gold(train_terms, labels, "train")
    test_terms = canonicalize_gold(test_terms, labels, "test")
    unlabeled = [t.surface for t in train_terms if t.gold_label is None]
    if unlabeled:
        raise DataError(f"train terms lack gold labels: {unlabeled[:5]}")

    train_vectors = [vectorize(t) for t in train_terms]
    split = classify.split_terms(test_terms, labels)
    label_vecs = _label_vectors(labels, table, external)

    errors: list[str] = []

    def classify_subset(
        subset: Sequence[TermRecord], kind: str, train_set: list[TermVector], name: str
    ) -> list[RankedPrediction] | None:
        if not subset:
            return []
        try:
            ranker = _make_ranker(kind, labels, label_vecs, train_set)
            if workers > 1:
                # ranking calls are pure; order preserved by executor.map
                with ThreadPoolExecutor(max_workers=workers) as pool:
                    return list(pool.map(lambda t: ranker(vectorize(t)), subset))
            return [ranker(vectorize(term)) for term in subset]
        except FinhyperError as exc:
            errors.append(f"{name} ({kind}): {exc}")
            logger.error("subset %s failed: %s", name, exc)
            return None

    subset1_preds = classify_subset(split.subset1, config.subset1_classifier, train_vectors, "subset1")

    subset2_train = train_vectors
    if config.subset2_train_policy == "augmented" and split.subset1:
        if subset1_preds:
            pseudo = [
                replace(pred.term, gold_label=pred.ranking[0]) for pred in subset1_preds
            ]
            augmented = classify.augment_training(train_terms, pseudo)
            subset2_train = train_vectors + [vectorize(t) for t in augmented[len(train_terms):]]
        elif subset1_preds is None:
            errors.append("subset2: augmentation skipped because subset1 failed")

    subset2_preds = classify_subset(split.subset2, config.subset2_classifier, subset2_train, "subset2")

    records: list[dict] = []
    scored: dict[str, list[tuple[RankedPrediction, str]]] = {"subset1": [], "subset2": []}
    agree = scored_rule = 0
    it1 = iter(subset1_preds or [])
    it2 = iter(subset2_preds or [])
    for term, matched in zip(split.terms, split.matches):
        in_subset1 = len(matched) == 1
        source = subset1_preds if in_subset1 else subset2_preds
        if source is None:
            continue  # that subset's classifier failed; skip its terms
        pred = next(it1 if in_subset1 else it2)
        subset_name = "subset1" if in_subset1 else "subset2"
        rule_label = matched[0] if in_subset1 else None
        record = {
            "term": term.surface,
            "key": termrep.term_key(term.tokens),
            "subset": 1 if in_subset1 else 2,
            "gold": term.gold_label,
            "ranking": list(pred.ranking),
            "scores": [float(s) for s in pred.scores],
            "gold_rank": gold_rank(pred, term.gold_label) if term.gold_label else None,
            "rule_label": rule_label,
            "rule_agree": (pred.ranking[0] == rule_label) if rule_label else None,
        }
        records.append(record)
        if rule_label:
            scored_rule += 1
            agree += int(pred.ranking[0] == rule_label)
        if term.gold_label is not None:
            scored[subset_name].append((pred, term.gold_label))

    def metrics_of(name: str) -> Metrics | None:
        pairs = scored[name]
        if not pairs and not getattr(split, name):
            return None  # subset empty by construction
        preds = [p for p, _ in pairs]
        golds = [g for _, g in pairs]
        return compute_metrics(preds, golds)

    m1 = metrics_of("subset1")
    m2 = metrics_of("subset2")
    all_pairs = scored["subset1"] + scored["subset2"]
    combined = compute_metrics([p for p, _ in all_pairs], [g for _, g in all_pairs])

    return SystemResult(
        config=config,
        seed=seed,
        backend=backend_name,
        subset1=m1,
        subset2=m2,
        combined=combined,
        records=records,
        rule_agreement=(agree, scored_rule),
        embedding_info=embedding_info,
        errors=errors,
    )


def fmt_metric(x: float) -> str:
    return "-" if math.isnan(x) else f"{x:.4f}"


def format_report(result: SystemResult) -> str:
    lines = [
        "finhyper system report",
        "======================",
        f"seed: {result.seed}",
        f"backend: {result.backend}",
        f"embedding: {result.embedding_info}",
        f"classifiers: subset1={result.config.subset1_classifier} "
        f"subset2={result.config.subset2_classifier} "
        f"train_policy={result.config.subset2_train_policy}",
        "",
        f"{'subset':<10}{'n':>6}  {'mean_rank':>10}  {'accuracy':>10}",
    ]
    rows = [("subset1", result.subset1), ("subset2", result.subset2), ("combined", result.combined)]
    for name, metrics in rows:
        if metrics is None:
            lines.append(f"{name:<10}{0:>6}  {'-':>10}  {'-':>10}")
        else:
            lines.append(
                f"{name:<10}{metrics.n:>6}  {fmt_metric(metrics.mean_rank):>10}  {fmt_metric(metrics.accuracy):>10}"
            )
    agree, total = result.rule_agreement
    lines.append("")
    lines.append(f"subset1 rule agreement: {agree}/{total}")
    lines.append("errors: " + ("none" if not result.errors else "; ".join(result.errors)))
    return "\n".join(lines) + "\n"


def write_reports(result: SystemResult, out_dir: str | Path) -> tuple[Path, Path]:
    """Write report.txt and predictions.jsonl; byte-identical given identical results."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    report_path = out / "report.txt"
    report_path.write_text(format_report(result), encoding="utf-8")
    pred_path = out / "predictions.jsonl"
    with pred_path.open("w", encoding="utf-8") as fh:
        for record in result.records:
            fh.write(json.dumps(record, sort_keys=True) + "\n")
    return report_path, pred_path
