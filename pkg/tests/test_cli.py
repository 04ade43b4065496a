import json

import numpy as np
import pytest

import fixture_world
from finhyper.cli import main
from finhyper.embedding import EmbeddingTable, load_table, save_table


def run_cli(*argv):
    return main(list(argv))


class TestTrainEmbeddings:
    def test_writes_table_and_prints_stats(self, world, tmp_path, capsys):
        out = tmp_path / "emb.txt"
        code = run_cli(
            "train-embeddings", "--corpus", str(world["corpus_dir"]),
            "--out", str(out), "--dim", "50", "--epochs", "2", "--seed", "5",
        )
        assert code == 0
        header = out.read_text().splitlines()[0]
        assert header.split()[1] == "50"
        stdout = capsys.readouterr().out
        assert "vocab_size:" in stdout
        assert "final_avg_loss:" in stdout

    def test_same_seed_identical_files(self, world, tmp_path):
        args = [
            "train-embeddings", "--corpus", str(world["corpus_dir"]),
            "--dim", "50", "--epochs", "2", "--seed", "9", "--deterministic",
        ]
        out1, out2 = tmp_path / "a.txt", tmp_path / "b.txt"
        assert run_cli(*args, "--out", str(out1)) == 0
        assert run_cli(*args, "--out", str(out2)) == 0
        assert out1.read_bytes() == out2.read_bytes()

    def test_missing_corpus_dir_exit_2(self, tmp_path, capsys):
        missing = tmp_path / "nope"
        code = run_cli("train-embeddings", "--corpus", str(missing), "--out", str(tmp_path / "e.txt"))
        assert code == 2
        assert str(missing) in capsys.readouterr().err

    def test_empty_corpus_exit_3(self, tmp_path):
        empty = tmp_path / "empty"
        empty.mkdir()
        code = run_cli("train-embeddings", "--corpus", str(empty), "--out", str(tmp_path / "e.txt"))
        assert code == 3

    def test_bad_dim_exit_2(self, world, tmp_path):
        code = run_cli(
            "train-embeddings", "--corpus", str(world["corpus_dir"]),
            "--out", str(tmp_path / "e.txt"), "--dim", "5",
        )
        assert code == 2


class TestSplit:
    def test_paper_shaped_counts(self, tmp_path, capsys):
        test_file = tmp_path / "terms.tsv"
        test_file.write_text("Debenture\nCovered Bond\nBond Future\n", encoding="utf-8")
        labels_file = tmp_path / "labels.txt"
        labels_file.write_text("Bonds\nFuture\n", encoding="utf-8")
        code = run_cli("split", "--test", str(test_file), "--labels", str(labels_file),
                       "--out", str(tmp_path / "out"))
        assert code == 0
        out = capsys.readouterr().out
        assert "0" in out and "1" in out and "2+" in out
        lines = [l.split() for l in out.splitlines() if l and l[0].isdigit() or l.startswith("2+")]
        counts = {row[0]: int(row[1]) for row in lines}
        assert counts == {"0": 1, "1": 1, "2+": 1}
        tsv = (tmp_path / "out" / "split.tsv").read_text().splitlines()
        assert tsv[0] == "term\tn_matches\tmatched_labels\tsubset"
        assert "Covered Bond\t1\tBonds\t1" in tsv
        assert "Bond Future\t2\tBonds,Future\t2" in tsv

    def test_empty_term_file(self, tmp_path, capsys):
        test_file = tmp_path / "terms.tsv"
        test_file.write_text("", encoding="utf-8")
        labels_file = tmp_path / "labels.txt"
        labels_file.write_text("Bonds\n", encoding="utf-8")
        assert run_cli("split", "--test", str(test_file), "--labels", str(labels_file)) == 0
        out = capsys.readouterr().out
        assert "total            0" not in out  # formatting-agnostic check below
        counts = [int(line.split()[-1]) for line in out.splitlines()[1:]]
        assert counts == [0, 0, 0, 0]

    def test_term_equal_to_label(self, tmp_path, capsys):
        (tmp_path / "terms.tsv").write_text("Bonds\n", encoding="utf-8")
        (tmp_path / "labels.txt").write_text("Bonds\n", encoding="utf-8")
        assert run_cli("split", "--test", str(tmp_path / "terms.tsv"),
                       "--labels", str(tmp_path / "labels.txt")) == 0
        out = capsys.readouterr().out
        row = [l for l in out.splitlines() if l.startswith("1 ")][0]
        assert row.split() == ["1", "1"]

    def test_malformed_file_exit_2(self, tmp_path, capsys):
        (tmp_path / "terms.tsv").write_text("a\tb\tc\n", encoding="utf-8")
        (tmp_path / "labels.txt").write_text("Bonds\n", encoding="utf-8")
        code = run_cli("split", "--test", str(tmp_path / "terms.tsv"),
                       "--labels", str(tmp_path / "labels.txt"))
        assert code == 2
        assert ":1:" in capsys.readouterr().err


def world_run_args(world, out_dir, *extra):
    return [
        "run-system",
        "--corpus", str(world["corpus_dir"]),
        "--train", str(world["train_file"]),
        "--test", str(world["test_file"]),
        "--labels", str(world["labels_file"]),
        "--out", str(out_dir),
        *extra,
    ]


class TestRunSystem:
    def test_system1_smoke(self, world, tmp_path, capsys):
        code = run_cli(*world_run_args(world, tmp_path / "out", "--system", "system1",
                                       "--dim", "50", "--seed", "7", "--deterministic"))
        assert code == 0
        assert (tmp_path / "out" / "report.txt").is_file()
        assert (tmp_path / "out" / "predictions.jsonl").is_file()
        stdout = capsys.readouterr().out
        assert "combined:" in stdout and "mean_rank=" in stdout

    def test_external_dim_mismatch_exit_2(self, world, tmp_path, capsys):
        table = EmbeddingTable(24, ("bond",), np.ones((1, 24)))
        ext = tmp_path / "ext.txt"
        save_table(table, ext)
        code = run_cli(*world_run_args(world, tmp_path / "out", "--system", "system3",
                                       "--embedding", str(ext)))
        assert code == 2
        err = capsys.readouterr().err
        assert "24" in err and "768" in err

    def test_list_systems(self, capsys):
        assert run_cli("run-system", "--list-systems") == 0
        out = capsys.readouterr().out
        for name in ("system1", "system2", "system3"):
            assert name in out
        assert "dim=100" in out and "dim=300" in out and "dim=768" in out

    def test_config_file_with_flag_override(self, world, tmp_path):
        config = tmp_path / "run.cfg"
        config.write_text(
            "\n".join(
                [
                    "# experiment file",
                    f"corpus_dir = {world['corpus_dir']}",
                    f"train_file = {world['train_file']}",
                    f"test_file = {world['test_file']}",
                    f"labels_file = {world['labels_file']}",
                    "dim = 50",
                    "epochs = 2",
                    "seed = 3",
                    "subset1_classifier = cosine",
                ]
            )
            + "\n",
            encoding="utf-8",
        )
        out = tmp_path / "out"
        assert run_cli("run-system", "--config", str(config), "--out", str(out), "--seed", "11") == 0
        report = (out / "report.txt").read_text()
        assert "seed: 11" in report         # flag beats config file
        assert "subset1=cosine" in report   # config beats default
        assert "dim=50" in report

    def test_unknown_system_exit_2(self, world, tmp_path):
        assert run_cli(*world_run_args(world, tmp_path, "--system", "system9")) == 2

    def test_unknown_config_key_exit_2(self, tmp_path):
        config = tmp_path / "run.cfg"
        config.write_text("dimension = 100\n", encoding="utf-8")
        assert run_cli("run-system", "--config", str(config), "--out", str(tmp_path)) == 2


class TestEvaluate:
    def test_metrics_from_predictions(self, world, tmp_path, capsys):
        out = tmp_path / "out"
        assert run_cli(*world_run_args(world, out, "--dim", "50", "--epochs", "2",
                                       "--seed", "7", "--deterministic")) == 0
        capsys.readouterr()
        assert run_cli("evaluate", "--predictions", str(out / "predictions.jsonl")) == 0
        stdout = capsys.readouterr().out
        assert "n: 12" in stdout
        assert "mean_rank:" in stdout and "accuracy:" in stdout

    def test_matches_report_numbers(self, world, tmp_path, capsys):
        out = tmp_path / "out"
        assert run_cli(*world_run_args(world, out, "--dim", "50", "--epochs", "2",
                                       "--seed", "7", "--deterministic")) == 0
        combined_line = [
            l for l in (out / "report.txt").read_text().splitlines() if l.startswith("combined")
        ][0]
        capsys.readouterr()
        run_cli("evaluate", "--predictions", str(out / "predictions.jsonl"))
        stdout = capsys.readouterr().out
        mr = [l.split()[-1] for l in stdout.splitlines() if l.startswith("mean_rank")][0]
        assert mr in combined_line

    def test_missing_file_exit_2(self, tmp_path):
        assert run_cli("evaluate", "--predictions", str(tmp_path / "none.jsonl")) == 2

    def test_no_gold_exit_3(self, tmp_path):
        path = tmp_path / "p.jsonl"
        path.write_text(json.dumps({"term": "x", "ranking": ["A"], "gold": None}) + "\n")
        assert run_cli("evaluate", "--predictions", str(path)) == 3


class TestExportSentences:
    def test_writes_key_tab_sentence(self, world, tmp_path):
        out = tmp_path / "sentences.tsv"
        code = run_cli(
            "export-sentences", "--corpus", str(world["corpus_dir"]),
            "--terms", str(world["test_file"]), "--labels", str(world["labels_file"]),
            "--max-sentences", "5", "--out", str(out),
        )
        assert code == 0
        lines = out.read_text().splitlines()
        assert lines
        keys = set()
        per_key = {}
        for line in lines:
            key, _, sentence = line.partition("\t")
            keys.add(key)
            if sentence:
                per_key[key] = per_key.get(key, 0) + 1
        assert "cover_bond" in keys
        assert "bond" in keys  # label row
        assert max(per_key.values()) <= 5
        # "cds" stems to "cd"; it appears in few corpus sentences
        assert per_key.get("cd", 0) >= 1

    def test_absent_term_gets_empty_marker(self, world, tmp_path):
        terms = tmp_path / "t.tsv"
        terms.write_text("Quux Gadget\n", encoding="utf-8")
        out = tmp_path / "s.tsv"
        assert run_cli("export-sentences", "--corpus", str(world["corpus_dir"]),
                       "--terms", str(terms), "--out", str(out)) == 0
        assert out.read_text() == "quux_gadget\t\n"

    def test_requires_terms(self, world, tmp_path):
        assert run_cli("export-sentences", "--corpus", str(world["corpus_dir"]),
                       "--out", str(tmp_path / "s.tsv")) == 2


class TestDeterminism:
    def test_run_system_byte_identical(self, world, tmp_path):
        outs = []
        for name in ("r1", "r2"):
            out = tmp_path / name
            assert run_cli(*world_run_args(world, out, "--dim", "50", "--epochs", "2",
                                           "--seed", "7", "--deterministic")) == 0
            outs.append(out)
        assert (outs[0] / "report.txt").read_bytes() == (outs[1] / "report.txt").read_bytes()
        assert (outs[0] / "predictions.jsonl").read_bytes() == (outs[1] / "predictions.jsonl").read_bytes()
