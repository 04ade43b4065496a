"""Fixed-dimension vector composition for terms and labels.

A term vector is the unweighted mean of its in-vocabulary token embeddings;
the contextual path averages per-sentence occurrence vectors instead. Both
carry a coverage fraction so downstream reports can surface terms the
vocabulary never defines (the acronym failure mode) rather than silently
scoring a zero vector.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import TYPE_CHECKING, Sequence

import numpy as np

if TYPE_CHECKING:
    from .embedding import EmbeddingTable

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class TermRecord:
    """A term surface string, its normalized tokens, and an optional gold label."""

    surface: str
    tokens: tuple[str, ...]
    gold_label: str | None = None


@dataclass(frozen=True)
class TermVector:
    term: TermRecord
    vector: np.ndarray
    coverage: float


def term_key(tokens: Sequence[str]) -> str:
    """Key used for externally supplied per-term vectors: tokens joined by '_'."""
    return "_".join(tokens)


def embed_term(term: TermRecord, table: "EmbeddingTable") -> TermVector:
    """Mean of the embeddings of the term's in-vocabulary tokens.

    Repeated tokens contribute once per occurrence. All tokens out of
    vocabulary yields the zero vector with coverage 0 (flagged, not an error).
    """
    rows = []
    for token in term.tokens:
        vec = table.get(token)
        if vec is not None:
            rows.append(vec)
    coverage = len(rows) / len(term.tokens) if term.tokens else 0.0
    if not rows:
        if term.tokens:
            logger.warning("no vocabulary coverage for term %r", term.surface)
        return TermVector(term, np.zeros(table.dim), 0.0)
    return TermVector(term, np.mean(rows, axis=0), coverage)


def embed_label(label_tokens: Sequence[str], table: "EmbeddingTable") -> TermVector:
    """Labels are just short terms; identical contract to embed_term."""
    record = TermRecord(surface=" ".join(label_tokens), tokens=tuple(label_tokens))
    return embed_term(record, table)


def embed_term_contextual(
    term: TermRecord,
    sentence_vectors: Sequence[Sequence[np.ndarray]],
    dim: int | None = None,
) -> TermVector:
    """Two-level unweighted mean: within each sentence occurrence, then across sentences.

    An empty sentence list mirrors the static OOV fallback: zero vector of
    ``dim`` entries (0 when unspecified) with coverage 0.
    """
    per_sentence = [np.mean(np.asarray(vectors, dtype=float), axis=0)
                    for vectors in sentence_vectors if len(vectors)]
    if not per_sentence:
        return TermVector(term, np.zeros(dim or 0), 0.0)
    return TermVector(term, np.mean(per_sentence, axis=0), 1.0)


def external_term_vector(term: TermRecord, table: "EmbeddingTable") -> TermVector:
    """Pre-composed per-term vector lookup by term key; OOV key falls back to zero."""
    vec = table.get(term_key(term.tokens))
    if vec is None:
        logger.warning("term key %r absent from external table", term_key(term.tokens))
        return TermVector(term, np.zeros(table.dim), 0.0)
    return TermVector(term, vec, 1.0)
