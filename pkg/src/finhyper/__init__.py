"""finhyper: classify financial terms into hypernym labels.

Pipeline pieces: corpus normalization, skip-gram embedding training (numba
kernels with a pure-numpy fallback, see finhyper.kernels), term/label vector
composition, a rule-based term split, unsupervised distance rankers,
Bernoulli Naive Bayes and one-vs-rest logistic regression, and an evaluation
harness reporting mean rank and accuracy.
"""

from .classify import (
    LabelSet,
    RankedPrediction,
    SplitResult,
    augment_training,
    binarize,
    cosine_similarity,
    load_labels,
    lr_rank,
    nb_rank,
    rank_unsupervised,
    split_terms,
    train_bernoulli_nb,
    train_logreg,
)
from .corpus import (
    Corpus,
    StopwordSet,
    TokenStream,
    extract_term_sentences,
    load_corpus,
    load_stopwords,
    load_terms,
    normalize,
    tokenize,
)
from .embedding import (
    EmbeddingTable,
    TrainConfig,
    load_table,
    lookup,
    save_table,
    train_word2vec,
)
from .errors import ConfigError, DataError, EmptyVocabularyError, FinhyperError, ParseError
from .evaluation import (
    ExternalSource,
    Metrics,
    SystemConfig,
    SystemResult,
    TrainedSource,
    accuracy,
    mean_rank,
    run_system,
    write_reports,
)
from .termrep import TermRecord, TermVector, embed_label, embed_term, embed_term_contextual

__version__ = "0.1.0"

__all__ = [
    "ConfigError",
    "Corpus",
    "DataError",
    "EmbeddingTable",
    "EmptyVocabularyError",
    "ExternalSource",
    "FinhyperError",
    "LabelSet",
    "Metrics",
    "ParseError",
    "RankedPrediction",
    "SplitResult",
    "StopwordSet",
    "SystemConfig",
    "SystemResult",
    "TermRecord",
    "TermVector",
    "TokenStream",
    "TrainConfig",
    "TrainedSource",
    "accuracy",
    "augment_training",
    "binarize",
    "cosine_similarity",
    "embed_label",
    "embed_term",
    "embed_term_contextual",
    "extract_term_sentences",
    "load_corpus",
    "load_labels",
    "load_stopwords",
    "load_table",
    "load_terms",
    "lookup",
    "lr_rank",
    "mean_rank",
    "nb_rank",
    "normalize",
    "rank_unsupervised",
    "run_system",
    "save_table",
    "split_terms",
    "tokenize",
    "train_bernoulli_nb",
    "train_logreg",
    "train_word2vec",
    "write_reports",
]
