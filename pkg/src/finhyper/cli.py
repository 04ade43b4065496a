"""Command-line entry point.

Subcommands: train-embeddings, split, run-system, evaluate, export-sentences.
Settings resolve in layers: built-in defaults < --system preset < --config
file < direct flags. Exit codes: 0 success, 2 config/input error, 3 data
error, 1 internal error.
"""

from __future__ import annotations

import argparse
import json
import sys
from importlib import resources
from pathlib import Path

from . import classify, corpus as corpus_mod, embedding, evaluation, kernels, termrep
from .embedding import TrainConfig
from .errors import ConfigError, DataError, FinhyperError, ParseError
from .evaluation import ExternalSource, SystemConfig, TrainedSource

EXIT_OK = 0
EXIT_INTERNAL = 1
EXIT_CONFIG = 2
EXIT_DATA = 3

_INT_KEYS = {"dim", "window", "negatives", "epochs", "min_count", "seed", "workers"}
_FLOAT_KEYS = {"learning_rate"}
_BOOL_KEYS = {"deterministic"}
_KNOWN_KEYS = _INT_KEYS | _FLOAT_KEYS | _BOOL_KEYS | {
    "corpus_dir", "train_file", "test_file", "labels_file", "stopwords_file",
    "embedding_file", "out_dir", "embedding_source",
    "subset1_classifier", "subset2_classifier", "subset2_train_policy",
}

DEFAULTS = {
    "dim": 100,
    "window": 5,
    "negatives": 5,
    "epochs": 5,
    "learning_rate": 0.025,
    "min_count": 2,
    "seed": 1,
    "workers": 1,
    "deterministic": False,
    "embedding_source": "trained",
    "subset1_classifier": "l2",
    "subset2_classifier": "nb",
    "subset2_train_policy": "augmented",
}

SYSTEM_PRESETS = ("system1", "system2", "system3")


def _data_path(relative: str):
    return resources.files("finhyper").joinpath("data").joinpath(relative)


def parse_config_text(text: str, origin: str) -> dict:
    """key = value lines with '#' comments; values typed by key."""
    settings: dict = {}
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ParseError(origin, line_no, f"expected 'key = value', got {line!r}")
        key, _, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if key not in _KNOWN_KEYS:
            raise ParseError(origin, line_no, f"unknown setting {key!r}")
        try:
            if key in _INT_KEYS:
                settings[key] = int(value)
            elif key in _FLOAT_KEYS:
                settings[key] = float(value)
            elif key in _BOOL_KEYS:
                if value.lower() not in ("true", "false", "1", "0", "yes", "no"):
                    raise ValueError(value)
                settings[key] = value.lower() in ("true", "1", "yes")
            else:
                settings[key] = value
        except ValueError:
            raise ParseError(origin, line_no, f"bad value {value!r} for {key}") from None
    return settings


def load_config_file(path: str | Path) -> dict:
    path = Path(path)
    if not path.is_file():
        raise ConfigError(f"config file not found: {path}")
    return parse_config_text(path.read_text(encoding="utf-8"), str(path))


def load_preset(name: str) -> dict:
    if name not in SYSTEM_PRESETS:
        raise ConfigError(f"unknown system {name!r} (available: {', '.join(SYSTEM_PRESETS)})")
    ref = _data_path(f"systems/{name}.cfg")
    return parse_config_text(ref.read_text(encoding="utf-8"), f"<preset {name}>")


_FLAG_TO_KEY = {
    "corpus": "corpus_dir",
    "train": "train_file",
    "test": "test_file",
    "labels": "labels_file",
    "stopwords": "stopwords_file",
    "embedding": "embedding_file",
    "out": "out_dir",
    "dim": "dim",
    "window": "window",
    "negatives": "negatives",
    "epochs": "epochs",
    "learning_rate": "learning_rate",
    "min_count": "min_count",
    "seed": "seed",
    "workers": "workers",
}


def resolve_settings(args) -> dict:
    settings = dict(DEFAULTS)
    if getattr(args, "system", None):
        settings.update(load_preset(args.system))
    if getattr(args, "config", None):
        settings.update(load_config_file(args.config))
    for flag, key in _FLAG_TO_KEY.items():
        value = getattr(args, flag, None)
        if value is not None:
            settings[key] = value
    if getattr(args, "deterministic", False):
        settings["deterministic"] = True
    if settings.get("deterministic"):
        settings["workers"] = 1
    return settings


def _require(settings: dict, key: str, hint: str) -> str:
    value = settings.get(key)
    if not value:
        raise ConfigError(f"missing {key} ({hint})")
    return str(value)


def _load_stopwords(settings: dict) -> corpus_mod.StopwordSet:
    path = settings.get("stopwords_file")
    if path:
        return corpus_mod.load_stopwords(path)
    ref = _data_path("stopwords_en.txt")
    with resources.as_file(ref) as real_path:
        return corpus_mod.load_stopwords(real_path)


def _train_config(settings: dict) -> TrainConfig:
    return TrainConfig(
        dim=settings["dim"],
        window=settings["window"],
        negatives=settings["negatives"],
        epochs=settings["epochs"],
        initial_learning_rate=settings["learning_rate"],
        min_count=settings["min_count"],
        seed=settings["seed"],
    )


def cmd_train_embeddings(args) -> int:
    settings = resolve_settings(args)
    stopwords = _load_stopwords(settings)
    corpus_dir = _require(settings, "corpus_dir", "--corpus")
    out_file = _require(settings, "out_dir", "--out FILE for the embedding table")
    corp = corpus_mod.load_corpus(corpus_dir, stopwords)
    config = _train_config(settings)
    table, losses = embedding.train_word2vec_stats(
        corp, config, workers=settings["workers"]
    )
    out_path = Path(out_file)
    if out_path.is_dir():
        out_path = out_path / "embeddings.txt"
    embedding.save_table(table, out_path)
    print(f"vocab_size: {len(table)}")
    print(f"dim: {table.dim}")
    print(f"epochs: {config.epochs}")
    print(f"final_avg_loss: {losses[-1]:.6f}")
    print(f"wrote {out_path}")
    return EXIT_OK


def cmd_split(args) -> int:
    settings = resolve_settings(args)
    stopwords = _load_stopwords(settings)
    labels = classify.load_labels(_require(settings, "labels_file", "--labels"), stopwords)
    terms = corpus_mod.load_terms(_require(settings, "test_file", "--test"), stopwords)
    split = classify.split_terms(terms, labels)
    hist = split.match_histogram()
    print(f"{'matches':<9}{'terms':>7}")
    for bucket in ("0", "1", "2+"):
        print(f"{bucket:<9}{hist[bucket]:>7}")
    print(f"{'total':<9}{len(terms):>7}")
    out_dir = settings.get("out_dir")
    if out_dir:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        path = out / "split.tsv"
        with path.open("w", encoding="utf-8") as fh:
            fh.write("term\tn_matches\tmatched_labels\tsubset\n")
            for term, matched in zip(split.terms, split.matches):
                subset = 1 if len(matched) == 1 else 2
                fh.write(f"{term.surface}\t{len(matched)}\t{','.join(matched)}\t{subset}\n")
        print(f"wrote {path}")
    return EXIT_OK


def _build_system_config(settings: dict) -> SystemConfig:
    source_kind = settings.get("embedding_source", "trained")
    if source_kind == "trained":
        source = TrainedSource(_train_config(settings))
    elif source_kind == "external":
        path = _require(settings, "embedding_file", "--embedding for external source")
        source = ExternalSource(path=path, dim=settings.get("dim"))
    else:
        raise ConfigError(f"embedding_source={source_kind!r} (expected trained or external)")
    return SystemConfig(
        embedding_source=source,
        subset1_classifier=settings["subset1_classifier"],
        subset2_classifier=settings["subset2_classifier"],
        subset2_train_policy=settings["subset2_train_policy"],
    )


def cmd_run_system(args) -> int:
    if args.list_systems:
        for name in SYSTEM_PRESETS:
            preset = load_preset(name)
            print(
                f"{name}: embedding={preset['embedding_source']} dim={preset['dim']} "
                f"subset1={preset['subset1_classifier']} subset2={preset['subset2_classifier']} "
                f"train_policy={preset['subset2_train_policy']}"
            )
        return EXIT_OK
    settings = resolve_settings(args)
    stopwords = _load_stopwords(settings)
    labels = classify.load_labels(_require(settings, "labels_file", "--labels"), stopwords)
    train_terms = corpus_mod.load_terms(_require(settings, "train_file", "--train"), stopwords)
    test_terms = corpus_mod.load_terms(_require(settings, "test_file", "--test"), stopwords)
    config = _build_system_config(settings)
    corp = None
    if isinstance(config.embedding_source, TrainedSource):
        corp = corpus_mod.load_corpus(_require(settings, "corpus_dir", "--corpus"), stopwords)
    result = evaluation.run_system(
        config,
        train_terms,
        test_terms,
        corp,
        labels,
        seed=settings["seed"],
        workers=settings["workers"],
    )
    out_dir = _require(settings, "out_dir", "--out")
    report_path, pred_path = evaluation.write_reports(result, out_dir)
    print(f"combined: n={result.combined.n} mean_rank={evaluation.fmt_metric(result.combined.mean_rank)} "
          f"accuracy={evaluation.fmt_metric(result.combined.accuracy)}")
    print(f"wrote {report_path}")
    print(f"wrote {pred_path}")
    if result.errors:
        for err in result.errors:
            print(f"error: {err}", file=sys.stderr)
        return EXIT_INTERNAL
    return EXIT_OK


def cmd_evaluate(args) -> int:
    path = Path(args.predictions)
    if not path.is_file():
        raise ConfigError(f"predictions file not found: {path}")
    ranks = []
    with path.open(encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                record = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ParseError(path, line_no, f"bad JSON: {exc}") from None
            gold = record.get("gold")
            if gold is None:
                continue
            ranking = record.get("ranking")
            if not isinstance(ranking, list) or gold not in ranking:
                raise DataError(f"{path}:{line_no}: gold {gold!r} missing from ranking")
            ranks.append(ranking.index(gold) + 1)
    if not ranks:
        raise DataError(f"{path}: no scored records")
    mr = sum(ranks) / len(ranks)
    acc = sum(1 for r in ranks if r == 1) / len(ranks)
    print(f"n: {len(ranks)}")
    print(f"mean_rank: {mr:.4f}")
    print(f"accuracy: {acc:.4f}")
    return EXIT_OK


def cmd_export_sentences(args) -> int:
    settings = resolve_settings(args)
    stopwords = _load_stopwords(settings)
    corp = corpus_mod.load_corpus(_require(settings, "corpus_dir", "--corpus"), stopwords)
    records = []
    for term_file in args.terms or []:
        records.extend(corpus_mod.load_terms(term_file, stopwords))
    if settings.get("labels_file"):
        labels = classify.load_labels(settings["labels_file"], stopwords)
        records.extend(
            termrep.TermRecord(surface=lab.name, tokens=lab.tokens) for lab in labels
        )
    if not records:
        raise ConfigError("no terms given (--terms and/or --labels)")
    out_file = Path(_require(settings, "out_dir", "--out FILE"))
    if out_file.is_dir():
        out_file = out_file / "sentences.tsv"
    seen: set[str] = set()
    n_lines = 0
    with out_file.open("w", encoding="utf-8") as fh:
        for record in records:
            key = termrep.term_key(record.tokens)
            if not key or key in seen:
                continue
            seen.add(key)
            texts = corpus_mod.extract_term_sentence_texts(corp, record, args.max_sentences)
            if not texts:
                fh.write(f"{key}\t\n")  # zero-sentence marker; exporter skips + records it
                continue
            for text in texts:
                fh.write(f"{key}\t{text}\n")
                n_lines += 1
    print(f"wrote {out_file} ({len(seen)} terms, {n_lines} sentences)")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="finhyper",
        description="Classify financial terms into hypernym labels.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, *, paths=True, hyper=True):
        p.add_argument("--config", help="key = value settings file")
        if paths:
            p.add_argument("--corpus", help="directory of .txt corpus documents")
            p.add_argument("--train", help="labeled term file (term<TAB>label)")
            p.add_argument("--test", help="term file to classify")
            p.add_argument("--labels", help="label list file, one per line")
            p.add_argument("--stopwords", help="stopword file (default: packaged list)")
            p.add_argument("--embedding", help="embedding table file (external source)")
            p.add_argument("--out", help="output directory (or file where noted)")
        if hyper:
            p.add_argument("--dim", type=int)
            p.add_argument("--window", type=int)
            p.add_argument("--negatives", type=int)
            p.add_argument("--epochs", type=int)
            p.add_argument("--learning-rate", dest="learning_rate", type=float)
            p.add_argument("--min-count", dest="min_count", type=int)
        p.add_argument("--seed", type=int)
        p.add_argument("--workers", type=int)
        p.add_argument("--deterministic", action="store_true",
                       help="force single-worker reproducible mode")

    p_train = sub.add_parser("train-embeddings", help="train skip-gram embeddings on a corpus")
    add_common(p_train)
    p_train.set_defaults(func=cmd_train_embeddings)

    p_split = sub.add_parser("split", help="report label-inclusion counts for a term file")
    add_common(p_split, hyper=False)
    p_split.set_defaults(func=cmd_split)

    p_run = sub.add_parser("run-system", help="run a full classification system")
    add_common(p_run)
    p_run.add_argument("--system", help=f"preset name ({', '.join(SYSTEM_PRESETS)})")
    p_run.add_argument("--list-systems", action="store_true", help="list presets and exit")
    p_run.set_defaults(func=cmd_run_system)

    p_eval = sub.add_parser("evaluate", help="metrics from an existing predictions file")
    p_eval.add_argument("--predictions", required=True, help="predictions.jsonl path")
    p_eval.set_defaults(func=cmd_evaluate)

    p_exp = sub.add_parser(
        "export-sentences",
        help="write term<TAB>sentence lines for the contextual-embedding exporter",
    )
    add_common(p_exp, hyper=False)
    p_exp.add_argument("--terms", action="append", help="term file (repeatable)")
    p_exp.add_argument("--max-sentences", type=int, default=5)
    p_exp.set_defaults(func=cmd_export_sentences)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, ParseError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except DataError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except FinhyperError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
