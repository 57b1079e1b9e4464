"""Exit codes, config layering, language routing, and stage wiring."""

import json
import socket

import pytest

from finsift.cli import (
    EXIT_OK,
    EXIT_RUNTIME,
    EXIT_USAGE,
    load_config_file,
    main,
    route_language,
    sinhala_ratio,
)

from conftest import FIXTURES


def write_corpus(path, texts):
    with open(path, "w", encoding="utf-8") as handle:
        for i, text in enumerate(texts):
            row = {"id": f"c{i}", "source": "test", "text": text}
            handle.write(json.dumps(row, ensure_ascii=False) + "\n")
    return path


BANK_TEXTS = [
    "the savings account interest rate dropped again",
    "mobile banking app keeps crashing on login",
    "nice video thanks for sharing",
    "loan approval took three weeks at the branch",
]


class TestParsing:
    def test_unknown_flag_is_usage_error(self, capsys):
        assert main(["extract", "--bogus", "x"]) == EXIT_USAGE
        assert "error" in capsys.readouterr().err

    def test_unknown_subcommand_is_usage_error(self, capsys):
        assert main(["frobnicate"]) == EXIT_USAGE

    def test_missing_required_flag(self, capsys):
        assert main(["filter", "--out", "x.jsonl"]) == EXIT_USAGE
        assert "--corpus" in capsys.readouterr().err

    def test_missing_corpus_file(self, tmp_path, capsys):
        rc = main(
            ["filter", "--corpus", str(tmp_path / "nope.jsonl"), "--out", "x"]
        )
        assert rc == EXIT_USAGE
        assert "no such file" in capsys.readouterr().err


class TestConfigFile:
    def test_values_parsed(self, tmp_path):
        path = tmp_path / "run.cfg"
        path.write_text("top-k = 3\nlang = en  # trailing comment\n\n")
        assert load_config_file(path) == {"top-k": "3", "lang": "en"}

    def test_bad_line_rejected(self, tmp_path):
        path = tmp_path / "run.cfg"
        path.write_text("just words\n")
        from finsift.errors import ConfigError

        with pytest.raises(ConfigError, match="line 1"):
            load_config_file(path)

    def test_file_value_applies(self, tmp_path, capsys):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("top-k = 2\n")
        rc = main(
            ["extract", "--text", "savings account interest rates at the bank",
             "--config", str(cfg)]
        )
        assert rc == EXIT_OK
        lines = capsys.readouterr().out.strip().splitlines()
        assert len(lines) == 2

    def test_flag_overrides_file(self, tmp_path, capsys):
        """Precedence: flags beat the config file."""
        cfg = tmp_path / "run.cfg"
        cfg.write_text("top-k = 2\n")
        rc = main(
            ["extract", "--text", "savings account interest rates at the bank",
             "--config", str(cfg), "--top-k", "1"]
        )
        assert rc == EXIT_OK
        assert len(capsys.readouterr().out.strip().splitlines()) == 1


class TestRouting:
    def test_pure_english_ratio_zero(self):
        assert sinhala_ratio("the loan approval took weeks") == 0.0

    def test_pure_sinhala_ratio_one(self):
        assert sinhala_ratio("ණය අයදුම්පත ප්‍රමාදයි") == 1.0

    def test_digits_are_not_letter_tokens(self):
        # 2 letter tokens, 1 sinhala; digits excluded from the denominator
        assert sinhala_ratio("ණය bank 12345") == pytest.approx(0.5)

    def test_threshold_is_strict(self):
        text = "ණය one two three four five six seven"  # 1 of 8
        assert route_language(text, "auto", threshold=0.125) == "en"
        assert route_language(text, "auto", threshold=0.124) == "si"

    def test_forced_language_skips_detection(self):
        assert route_language("ණය අයදුම්පත", "en") == "en"
        assert route_language("plain english", "si") == "si"

    def test_default_threshold_routes_mixed_comment(self):
        assert route_language("මගේ savings account එක lock වුනා", "auto") == "si"


class TestExtract:
    def test_example_sentence_top_keywords(self, capsys):
        rc = main(["extract", "--text", "Customer support delayed my loan approval"])
        assert rc == EXIT_OK
        assert "customer support" in capsys.readouterr().out

    def test_corpus_rows_carry_lang_and_keywords(self, tmp_path):
        corpus = write_corpus(tmp_path / "c.jsonl", BANK_TEXTS)
        out = tmp_path / "kw.jsonl"
        rc = main(["extract", "--corpus", str(corpus), "--out", str(out)])
        assert rc == EXIT_OK
        rows = [json.loads(l) for l in out.read_text().splitlines()]
        assert [r["doc_id"] for r in rows] == ["c0", "c1", "c2", "c3"]
        assert all(r["lang"] == "en" for r in rows)
        assert all("keywords" in r for r in rows)

    def test_jobs_do_not_change_output(self, tmp_path):
        """Order-preserving collector: --jobs 4 equals --jobs 1 byte for byte."""
        corpus = write_corpus(tmp_path / "c.jsonl", BANK_TEXTS * 3)
        outs = []
        for jobs in ("1", "4"):
            out = tmp_path / f"kw{jobs}.jsonl"
            assert main(
                ["extract", "--corpus", str(corpus), "--jobs", jobs,
                 "--out", str(out)]
            ) == EXIT_OK
            outs.append(out.read_bytes())
        assert outs[0] == outs[1]

    def test_corpus_mode_requires_out(self, tmp_path, capsys):
        corpus = write_corpus(tmp_path / "c.jsonl", BANK_TEXTS)
        assert main(["extract", "--corpus", str(corpus)]) == EXIT_USAGE


class TestFilter:
    def test_counts_and_quarantine(self, tmp_path, capsys):
        corpus = write_corpus(tmp_path / "c.jsonl", BANK_TEXTS)
        out = tmp_path / "kept.jsonl"
        q = tmp_path / "removed.jsonl"
        rc = main(
            ["filter", "--corpus", str(corpus), "--out", str(out),
             "--quarantine", str(q)]
        )
        assert rc == EXIT_OK
        assert "kept 3  removed 1  total 4" in capsys.readouterr().out
        kept_ids = [json.loads(l)["id"] for l in out.read_text().splitlines()]
        assert kept_ids == ["c0", "c1", "c3"]
        removed = [json.loads(l) for l in q.read_text().splitlines()]
        assert [r["id"] for r in removed] == ["c2"]
        assert removed[0]["removed_by"] == "lexicon"


class TestClassify:
    def test_rows_use_canonical_labels(self, tmp_path):
        corpus = write_corpus(tmp_path / "c.jsonl", BANK_TEXTS)
        out = tmp_path / "asp.jsonl"
        assert main(["classify", "--corpus", str(corpus), "--out", str(out)]) == EXIT_OK
        rows = [json.loads(l) for l in out.read_text().splitlines()]
        assert len(rows) == 4
        from finsift.aspects import ASPECT_CLASSES

        for row in rows:
            assert row["aspect"] in ASPECT_CLASSES + ("Unclassified",)

    def test_unknown_strategy_rejected(self, tmp_path, capsys):
        corpus = write_corpus(tmp_path / "c.jsonl", BANK_TEXTS)
        rc = main(
            ["classify", "--corpus", str(corpus), "--out", str(tmp_path / "o"),
             "--strategy-aspect", "bogus"]
        )
        assert rc == EXIT_USAGE


class TestEval:
    def make_labels(self, path, labels):
        with open(path, "w", encoding="utf-8") as handle:
            for i, label in enumerate(labels):
                handle.write(json.dumps({"id": f"c{i}", "aspect": label}) + "\n")
        return path

    def test_identical_files_are_perfect(self, tmp_path, capsys):
        gold = self.make_labels(tmp_path / "g.jsonl", ["Transactions", "Digital Banking"])
        rc = main(["eval", "--gold", str(gold), "--pred", str(gold), "--task", "aspect"])
        assert rc == EXIT_OK
        assert "100.0" in capsys.readouterr().out

    def test_disagreement_lowers_accuracy(self, tmp_path, capsys):
        gold = self.make_labels(tmp_path / "g.jsonl", ["Transactions"] * 4)
        pred = self.make_labels(tmp_path / "p.jsonl", ["Transactions"] * 3 + ["Digital Banking"])
        assert main(["eval", "--gold", str(gold), "--pred", str(pred), "--task", "aspect"]) == EXIT_OK
        assert "75.0" in capsys.readouterr().out

    def test_csv_written(self, tmp_path):
        gold = self.make_labels(tmp_path / "g.jsonl", ["Transactions"])
        out = tmp_path / "report.csv"
        main(["eval", "--gold", str(gold), "--pred", str(gold), "--task", "aspect",
              "--out", str(out)])
        assert out.read_text().startswith("name,accuracy")

    def test_missing_prediction_is_usage_error(self, tmp_path, capsys):
        gold = self.make_labels(tmp_path / "g.jsonl", ["Transactions", "Transactions"])
        pred = self.make_labels(tmp_path / "p.jsonl", ["Transactions"])
        rc = main(["eval", "--gold", str(gold), "--pred", str(pred), "--task", "aspect"])
        assert rc == EXIT_USAGE
        assert "c1" in capsys.readouterr().err

    def test_unknown_task_rejected(self, tmp_path):
        gold = self.make_labels(tmp_path / "g.jsonl", ["Transactions"])
        assert main(["eval", "--gold", str(gold), "--pred", str(gold),
                     "--task", "sentiment"]) == EXIT_USAGE


class TestIngestCommand:
    def test_summary_counts(self, tmp_path, capsys):
        out = tmp_path / "corpus.jsonl"
        rc = main(
            ["ingest", "--query", "banking", "--pages",
             str(FIXTURES / "pages3.jsonl"), "--out", str(out)]
        )
        assert rc == EXIT_OK
        assert "persisted 22" in capsys.readouterr().out
        assert len(out.read_text().splitlines()) == 22

    def test_query_required(self, tmp_path, capsys):
        rc = main(
            ["ingest", "--pages", str(FIXTURES / "pages3.jsonl"),
             "--out", str(tmp_path / "o.jsonl")]
        )
        assert rc == EXIT_USAGE


class TestPipeline:
    FLAGS = ["--lang", "auto", "--provider", "hash"]

    def run_into(self, out_dir, extra=()):
        rc = main(
            ["pipeline", "--corpus", str(FIXTURES / "comments100.jsonl"),
             "--out", str(out_dir), *self.FLAGS, *extra]
        )
        assert rc == EXIT_OK
        return out_dir

    def test_writes_all_artifacts(self, tmp_path, capsys):
        out = self.run_into(tmp_path / "run")
        for name in ("kept.jsonl", "keywords.jsonl", "aspects.jsonl", "report.json"):
            assert (out / name).exists()
        report = json.loads((out / "report.json").read_text())
        assert report["kept"] + report["removed"] == report["total"] == 100

    def test_byte_identical_across_runs(self, tmp_path):
        first = self.run_into(tmp_path / "a")
        second = self.run_into(tmp_path / "b")
        for name in ("kept.jsonl", "keywords.jsonl", "aspects.jsonl",
                     "report.json", "quarantine.jsonl"):
            assert (first / name).read_bytes() == (second / name).read_bytes()

    def test_parallel_run_identical(self, tmp_path):
        first = self.run_into(tmp_path / "a")
        parallel = self.run_into(tmp_path / "p", extra=["--jobs", "4"])
        assert (first / "keywords.jsonl").read_bytes() == (
            parallel / "keywords.jsonl"
        ).read_bytes()

    def test_hash_provider_needs_no_network(self, tmp_path, monkeypatch):
        """Local providers never open a socket."""
        def deny(*args, **kwargs):
            raise AssertionError("network touched")

        monkeypatch.setattr(socket, "socket", deny)
        self.run_into(tmp_path / "offline")

    def test_pages_input_runs_ingest_stage(self, tmp_path):
        out = tmp_path / "run"
        rc = main(
            ["pipeline", "--pages", str(FIXTURES / "pages3.jsonl"),
             "--query", "banking", "--out", str(out), *self.FLAGS]
        )
        assert rc == EXIT_OK
        assert (out / "corpus.jsonl").exists()
        assert len((out / "corpus.jsonl").read_text().splitlines()) == 22


class TestLinearStrategies:
    RELEVANT = [
        "my loan payment failed again",
        "savings account interest rate dropped",
        "bank transfer was delayed two days",
    ]
    IRRELEVANT = [
        "nice video bro",
        "first comment here",
        "great weather today",
    ]

    def saved_model(self, tmp_path):
        from finsift.linear import save_model, train
        from finsift.providers import hash_provider
        from finsift.relevance import RELEVANCE_CLASSES
        from finsift.textnorm import normalize_text

        provider = hash_provider(64, 0)
        texts = self.RELEVANT + self.IRRELEVANT
        labels = [0] * 3 + [1] * 3
        vectors = provider.embed([normalize_text(t) for t in texts])
        model = train(
            list(zip(vectors, labels)), 2,
            class_names=RELEVANCE_CLASSES, provider_id=provider.id(),
        )
        path = tmp_path / "relevance.json"
        save_model(model, path)
        return path

    def test_filter_with_saved_model(self, tmp_path, capsys):
        model = self.saved_model(tmp_path)
        corpus = write_corpus(tmp_path / "c.jsonl", self.RELEVANT + self.IRRELEVANT)
        out = tmp_path / "kept.jsonl"
        rc = main(
            ["filter", "--corpus", str(corpus), "--strategy-filter", "linear",
             "--model", str(model), "--provider", "hash:64:0", "--out", str(out)]
        )
        assert rc == EXIT_OK
        assert "kept 3  removed 3  total 6" in capsys.readouterr().out

    def test_provider_mismatch_is_usage_error(self, tmp_path, capsys):
        # model trained against hash:64:0 cannot load under hash:32:0
        model = self.saved_model(tmp_path)
        corpus = write_corpus(tmp_path / "c.jsonl", self.RELEVANT)
        rc = main(
            ["filter", "--corpus", str(corpus), "--strategy-filter", "linear",
             "--model", str(model), "--provider", "hash:32:0",
             "--out", str(tmp_path / "o")]
        )
        assert rc == EXIT_USAGE

    def test_linear_needs_model_flag(self, tmp_path, capsys):
        corpus = write_corpus(tmp_path / "c.jsonl", self.RELEVANT)
        rc = main(
            ["filter", "--corpus", str(corpus), "--strategy-filter", "linear",
             "--out", str(tmp_path / "o")]
        )
        assert rc == EXIT_USAGE
        assert "--model" in capsys.readouterr().err


class TestRuntimeErrors:
    def test_unreachable_endpoint_is_runtime_error(self, tmp_path, capsys):
        corpus = write_corpus(tmp_path / "c.jsonl", BANK_TEXTS[:1])
        rc = main(
            ["filter", "--corpus", str(corpus), "--out", str(tmp_path / "o"),
             "--strategy-filter", "external", "--endpoint", "http://127.0.0.1:9"]
        )
        assert rc == EXIT_RUNTIME
