#!/usr/bin/env python3
"""Regenerate tests/data/external_768.txt.

A synthetic pre-composed 768-dim term-vector table covering every fixture
term key plus the label keys, with per-label cluster structure so supervised
runs on it behave sensibly. Deterministic; run from the repository root.
"""

import sys
from pathlib import Path

import numpy as np

ROOT = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(ROOT / "tests"))

import fixture_world  # noqa: E402
from finhyper.classify import LabelSet  # noqa: E402
from finhyper.corpus import normalize, tokenize  # noqa: E402
from finhyper.termrep import term_key  # noqa: E402

DIM = 768
OUT = ROOT / "tests" / "data" / "external_768.txt"


def main() -> None:
    rng = np.random.default_rng(768_2020)
    labels = LabelSet.from_surfaces(fixture_world.LABELS)
    centers = {lab.name: rng.normal(size=DIM) for lab in labels}

    rows: dict[str, np.ndarray] = {}
    for lab in labels:
        rows[term_key(lab.tokens)] = centers[lab.name]
    pairs = list(fixture_world.TRAIN_TERMS) + [
        (surface, gold) for surface, gold, _ in fixture_world.TEST_TERMS
    ]
    for surface, gold in pairs:
        key = term_key(normalize(tokenize(surface)).tokens)
        if key not in rows:
            rows[key] = centers[gold] + 0.35 * rng.normal(size=DIM)

    OUT.parent.mkdir(parents=True, exist_ok=True)
    with OUT.open("w", encoding="utf-8") as fh:
        fh.write(f"{len(rows)} {DIM}\n")
        for key, vec in rows.items():
            fh.write(key + " " + " ".join(f"{x:.6f}" for x in vec) + "\n")
    print(f"wrote {OUT} ({len(rows)} rows)")


if __name__ == "__main__":
    main()
