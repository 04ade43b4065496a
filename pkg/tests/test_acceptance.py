"""Acceptance suite: one test per criterion, each printing a PASS line.

Run with `pytest tests/test_acceptance.py -v -s` to see the per-criterion
lines. The exporter round-trip runs only when the TypeScript exporter under
exporter/ has been built (npm run build); everything else is self-contained.
"""

import itertools
import json
import shutil
import subprocess
import sys
import time
from pathlib import Path

import numpy as np
import pytest

import fixture_world
from finhyper.classify import (
    LabelSet,
    augment_training,
    nb_rank,
    rank_unsupervised,
    train_bernoulli_nb,
    train_logreg,
    logreg_gradient,
    logreg_objective,
    lr_rank,
    split_terms,
)
from finhyper.corpus import load_terms, normalize, tokenize
from finhyper.embedding import TrainConfig, load_table, train_word2vec_stats
from finhyper.evaluation import accuracy, mean_rank
from finhyper.termrep import TermRecord, TermVector

REPO_ROOT = Path(__file__).resolve().parent.parent


def _pass(name):
    print(f"\nACCEPTANCE {name}: PASS")


def test_split_rule_oracle(world):
    """12-term hand-built fixture routes exactly as the hand-computed table."""
    labels = LabelSet.from_surfaces(fixture_world.LABELS)
    terms = load_terms(world["test_file"])
    split = split_terms(terms, labels)

    expected_matches = tuple(matches for _, _, matches in fixture_world.TEST_TERMS)
    assert split.matches == expected_matches

    expected_subset1 = [s for s, _, m in fixture_world.TEST_TERMS if len(m) == 1]
    expected_subset2 = [s for s, _, m in fixture_world.TEST_TERMS if len(m) != 1]
    assert [t.surface for t in split.subset1] == expected_subset1
    assert [t.surface for t in split.subset2] == expected_subset2
    assert {"Debenture", "Unit Trust", "CDS"} <= set(expected_subset2)
    assert "Covered Bond" in expected_subset1
    assert "Bond Future" in expected_subset2

    # Table-1-shaped count report
    assert split.match_histogram() == {"0": 3, "1": 7, "2+": 2}
    _pass("split-rule oracle (12-term fixture, counts 3/7/2)")


def test_nb_brute_force_equivalence():
    """nb_rank ordering equals raw probability products on all 2^4 inputs."""
    labels = LabelSet.from_surfaces(["A", "B", "C"])
    examples = [
        (np.array([1, 1, 0, 0]), "A"),
        (np.array([1, 0, 0, 0]), "A"),
        (np.array([0, 1, 1, 0]), "B"),
        (np.array([0, 1, 1, 1]), "B"),
        (np.array([0, 0, 0, 1]), "C"),
    ]
    model = train_bernoulli_nb(examples, labels, alpha=1.0)

    def oracle(x):
        bits = [1 if v > 0 else 0 for v in x]
        scores = []
        for name in labels.names:
            members = [e for e, lab in examples if lab == name]
            prior = (len(members) + 1.0) / (len(examples) + 1.0 * len(labels))
            product = prior
            for j, bit in enumerate(bits):
                p1 = (sum(int(e[j]) for e in members) + 1.0) / (len(members) + 2.0)
                product *= p1 if bit else (1.0 - p1)
            scores.append(product)
        order = sorted(range(len(labels)), key=lambda i: (-scores[i], i))
        return tuple(labels.names[i] for i in order)

    matches = 0
    for bits in itertools.product([0, 1], repeat=4):
        x = np.array([1.0 if b else -1.0 for b in bits])
        if nb_rank(model, x).ranking == oracle(x):
            matches += 1
    assert matches == 16
    _pass("NB brute-force equivalence (16/16 orderings)")


def test_lr_gradient_check_and_separable_fixture():
    """Analytic vs central-difference gradients; perfect separable accuracy."""
    rng = np.random.default_rng(20200301)
    X = rng.normal(size=(15, 6))
    y = (rng.random(15) > 0.5).astype(float)
    l2 = 0.5
    h = 1e-5
    for _ in range(10):
        w = rng.normal(size=6)
        b = float(rng.normal())
        gw, gb = logreg_gradient(w, b, X, y, l2)
        num_w = np.zeros(6)
        for j in range(6):
            wp, wm = w.copy(), w.copy()
            wp[j] += h
            wm[j] -= h
            num_w[j] = (
                logreg_objective(wp, b, X, y, l2) - logreg_objective(wm, b, X, y, l2)
            ) / (2 * h)
        num_b = (
            logreg_objective(w, b + h, X, y, l2) - logreg_objective(w, b - h, X, y, l2)
        ) / (2 * h)
        denom_w = np.maximum.reduce([np.abs(gw), np.abs(num_w), np.full(6, 1e-3)])
        assert np.max(np.abs(gw - num_w) / denom_w) < 1e-4
        assert abs(gb - num_b) / max(abs(gb), abs(num_b), 1e-3) < 1e-4

    labels = LabelSet.from_surfaces(["A", "B"])
    examples = []
    for _ in range(25):
        examples.append((rng.normal(loc=[+2.0, +2.0], scale=0.4), "A"))
        examples.append((rng.normal(loc=[-2.0, -2.0], scale=0.4), "B"))
    model = train_logreg(examples, labels, l2=0.01, max_iters=1000)
    hits = sum(1 for vec, lab in examples if lr_rank(model, vec).ranking[0] == lab)
    assert hits == len(examples)
    _pass("LR gradient check (10 points, rel < 1e-4) + separable accuracy 1.0")


def test_ranking_identities():
    """Unit-norm labels: cosine == L2 ranking; cosine scale invariance. 100 trials."""
    rng = np.random.default_rng(314159)
    for _ in range(100):
        labels = rng.normal(size=(8, 12))
        labels /= np.linalg.norm(labels, axis=1, keepdims=True)
        pairs = [(f"L{i}", labels[i]) for i in range(8)]
        vec = rng.normal(size=12)
        term = TermVector(TermRecord("t", ("t",)), vec, 1.0)
        r_cos = rank_unsupervised(term, pairs, "cosine")
        r_l2 = rank_unsupervised(term, pairs, "l2")
        assert r_cos.ranking == r_l2.ranking
        scale = float(rng.uniform(0.01, 100.0))
        scaled = TermVector(term.term, vec * scale, 1.0)
        assert rank_unsupervised(scaled, pairs, "cosine").ranking == r_cos.ranking
    _pass("ranking identities (cosine==L2 on unit labels; scale invariance; 100 trials)")


def test_embedding_sanity(two_topic_corpus):
    """Two-topic skip-gram: topic separation >= 0.1, falling loss, < 60 s."""
    corp, topic_a, topic_b = two_topic_corpus
    config = TrainConfig(dim=50, window=5, negatives=5, epochs=5, min_count=2, seed=7)
    start = time.perf_counter()
    table, losses = train_word2vec_stats(corp, config, workers=1)
    elapsed = time.perf_counter() - start

    A = np.array([table.get(w) for w in topic_a if w in table])
    B = np.array([table.get(w) for w in topic_b if w in table])
    assert len(A) + len(B) >= 55  # vocab ~60
    An = A / np.linalg.norm(A, axis=1, keepdims=True)
    Bn = B / np.linalg.norm(B, axis=1, keepdims=True)
    intra_a = np.mean((An @ An.T)[np.triu_indices(len(An), k=1)])
    intra_b = np.mean((Bn @ Bn.T)[np.triu_indices(len(Bn), k=1)])
    intra = (intra_a + intra_b) / 2.0
    inter = float(np.mean(An @ Bn.T))

    assert intra - inter >= 0.1
    assert losses[4] < losses[0]
    assert elapsed < 60.0
    _pass(
        f"embedding sanity (gap={intra - inter:.3f} >= 0.1, "
        f"loss {losses[0]:.3f}->{losses[4]:.3f}, {elapsed:.1f}s < 60s)"
    )


def _run_cli(*argv):
    return subprocess.run(
        [sys.executable, "-m", "finhyper.cli", *argv],
        capture_output=True,
        text=True,
        cwd=REPO_ROOT,
    )


def test_end_to_end_determinism(world, tmp_path):
    """run-system twice with --deterministic --seed 7: byte-identical reports."""
    outs = []
    for name in ("run1", "run2"):
        out = tmp_path / name
        proc = _run_cli(
            "run-system",
            "--corpus", str(world["corpus_dir"]),
            "--train", str(world["train_file"]),
            "--test", str(world["test_file"]),
            "--labels", str(world["labels_file"]),
            "--out", str(out),
            "--dim", "50",
            "--seed", "7",
            "--deterministic",
        )
        assert proc.returncode == 0, proc.stderr
        outs.append(out)

    report1 = (outs[0] / "report.txt").read_bytes()
    report2 = (outs[1] / "report.txt").read_bytes()
    preds1 = (outs[0] / "predictions.jsonl").read_bytes()
    preds2 = (outs[1] / "predictions.jsonl").read_bytes()
    assert report1 == report2
    assert preds1 == preds2

    records = [json.loads(line) for line in preds1.decode().splitlines()]
    by_subset = {1: [], 2: []}
    for record in records:
        if record["gold_rank"] is not None:
            by_subset[record["subset"]].append(record["gold_rank"])
    all_ranks = by_subset[1] + by_subset[2]
    combined_mr = sum(all_ranks) / len(all_ranks)
    assert 1.0 <= combined_mr <= 8.0

    weighted = (
        len(by_subset[1]) * (sum(by_subset[1]) / len(by_subset[1]))
        + len(by_subset[2]) * (sum(by_subset[2]) / len(by_subset[2]))
    ) / len(all_ranks)
    assert abs(combined_mr - weighted) < 1e-12
    _pass(
        f"end-to-end determinism (byte-identical; MR={combined_mr:.4f} in [1,8]; "
        f"weighted-average identity < 1e-12)"
    )


def test_self_training_arithmetic():
    """100 train + 66 subset-1 pseudo-labeled = 166."""
    train = [TermRecord(f"t{i}", (f"t{i}",), "A") for i in range(100)]
    subset1 = [TermRecord(f"s{i}", (f"s{i}",), "B") for i in range(66)]
    merged = augment_training(train, subset1)
    assert len(merged) == 166
    assert augment_training(train, []) == train
    _pass("self-training arithmetic (100 + 66 = 166)")


def test_metric_identities():
    """accuracy == 1 iff mean_rank == 1; mean_rank([1,1,3]) = 1.6667 +/- 1e-9."""
    from finhyper.classify import RankedPrediction

    def pred(ranking):
        scores = tuple(float(len(ranking) - i) for i in range(len(ranking)))
        return RankedPrediction(TermRecord("t", ("t",)), tuple(ranking), scores)

    preds = [pred(["A", "B", "C"]), pred(["A", "B", "C"]), pred(["B", "C", "A"])]
    gold = ["A", "A", "A"]  # gold ranks 1, 1, 3
    assert abs(mean_rank(preds, gold) - 5.0 / 3.0) < 1e-9

    rng = np.random.default_rng(999)
    names = ["A", "B", "C", "D"]
    for _ in range(200):
        n = int(rng.integers(1, 12))
        batch, gold = [], []
        for _ in range(n):
            ranking = list(rng.permutation(names))
            batch.append(pred(ranking))
            gold.append(str(rng.choice(names)))
        acc = accuracy(batch, gold)
        mr = mean_rank(batch, gold)
        assert (acc == 1.0) == (mr == 1.0)
    _pass("metric identities (acc=1 iff MR=1 over 200 sets; MR([1,1,3])=1.6667)")


EXPORTER_DIR = REPO_ROOT / "exporter"
EXPORTER_CLI = EXPORTER_DIR / "dist" / "cli.js"


@pytest.mark.skipif(
    shutil.which("node") is None or not EXPORTER_CLI.is_file(),
    reason="secondary exporter not built (run npm install && npm run build in exporter/)",
)
def test_secondary_exporter_round_trip(tmp_path):
    """[SECONDARY] exporter output parses as a 768-dim table; debug vectors average."""
    sentences = tmp_path / "sentences.tsv"
    sentences.write_text(
        "\n".join(
            [
                "cover_bond\tThe covered bond pays principal at maturity.",
                "cover_bond\tEvery covered bond carries a coupon.",
                "credit_default_swap\tThe credit default swap references spread risk.",
                "bond\tThe bond is a debt security.",
                "futur\tEach future settles on the exchange.",
                "unit_trust\tThe unit trust pools investor money.",
                "ghost_term\t",
            ]
        )
        + "\n",
        encoding="utf-8",
    )
    out = tmp_path / "context_768.txt"
    proc = subprocess.run(
        [
            "node", str(EXPORTER_CLI),
            "--input", str(sentences),
            "--output", str(out),
            "--encoder", "test-768",
            "--max-sentences", "5",
            "--debug-per-sentence",
        ],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0, proc.stderr

    table = load_table(out)
    assert table.dim == 768
    assert len(table) == 5
    assert len(set(table.vocab)) == len(table.vocab)

    skip_file = out.with_suffix(out.suffix + ".skipped")
    assert skip_file.is_file()
    assert skip_file.read_text().split() == ["ghost_term"]

    debug_file = out.with_suffix(out.suffix + ".debug")
    assert debug_file.is_file()
    per_sentence: dict[str, list[np.ndarray]] = {}
    for line in debug_file.read_text().splitlines():
        fields = line.split()
        per_sentence.setdefault(fields[0], []).append(np.array([float(x) for x in fields[2:]]))
    for key in table.vocab:
        stacked = np.mean(per_sentence[key], axis=0)
        assert np.max(np.abs(stacked - table.get(key))) < 1e-5
    _pass("secondary exporter round-trip (dim 768, no duplicates, debug mean within 1e-5)")
