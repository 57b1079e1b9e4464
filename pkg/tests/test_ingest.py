"""Pagination, cleaning, dedup, and persistence bookkeeping."""

import json

import pytest

from finsift.errors import ArgumentError, ConfigError, SourceError, ValidationError
from finsift.ingest import (
    FileSource,
    IngestConfig,
    IngestReport,
    dedup,
    file_source,
    ingest,
    read_comments,
    write_comments,
    youtube_source,
)
from finsift.model import Comment

from conftest import FIXTURES


def comment(i, text):
    return Comment(f"t{i}", "test", text)


class TestDedup:
    def test_first_occurrence_kept(self):
        batch = [comment(0, "a"), comment(1, "b"), comment(2, "a")]
        assert [c.id for c in dedup(batch)] == ["t0", "t1"]

    def test_all_distinct_is_identity(self):
        batch = [comment(i, f"text {i}") for i in range(5)]
        assert dedup(batch) == batch

    def test_idempotent(self):
        batch = [comment(i, t) for i, t in enumerate("aabcbc")]
        once = dedup(batch)
        assert dedup(once) == once

    def test_planted_duplicates_fixture(self):
        src = file_source(FIXTURES / "ingest_pages100.jsonl")
        _, report = ingest(src, "banking")
        assert report.fetched == 100
        assert report.duplicates_removed == 17
        assert report.persisted == 83


class TestFileSource:
    def test_three_pages_to_exhaustion(self):
        src = file_source(FIXTURES / "pages3.jsonl")
        fetches = 0
        token = None
        while True:
            batch, token = src.fetch("banking", token)
            fetches += 1
            assert batch
            if token is None:
                break
        assert fetches == 3

    def test_single_page_has_no_next(self, tmp_path):
        path = tmp_path / "one.jsonl"
        path.write_text(
            json.dumps({"comments": [{"id": "a", "source": "t", "text": "x"}]}) + "\n"
        )
        batch, token = file_source(path).fetch("q")
        assert len(batch) == 1 and token is None

    def test_missing_file_is_open_error(self, tmp_path):
        with pytest.raises(OSError):
            file_source(tmp_path / "absent.jsonl")

    def test_bad_page_line_names_line(self, tmp_path):
        path = tmp_path / "bad.jsonl"
        path.write_text('{"comments": []}\nnot json\n')
        with pytest.raises(SourceError, match="line 2"):
            file_source(path)

    def test_page_must_hold_comment_list(self, tmp_path):
        path = tmp_path / "bad.jsonl"
        path.write_text('{"items": []}\n')
        with pytest.raises(SourceError):
            file_source(path)

    def test_malformed_comments_skipped_with_count(self):
        src = file_source(FIXTURES / "pages_malformed.jsonl")
        assert src.malformed_skipped == 2
        batch, _ = src.fetch("q")
        assert [c.id for c in batch] == ["m1", "m3"]

    def test_unknown_token_rejected(self):
        src = file_source(FIXTURES / "pages3.jsonl")
        with pytest.raises(SourceError):
            src.fetch("q", "99")

    def test_empty_query_rejected(self):
        src = file_source(FIXTURES / "pages3.jsonl")
        with pytest.raises(ArgumentError):
            src.fetch("")


class TestIngest:
    def test_fixture_counts(self):
        _, report = ingest(file_source(FIXTURES / "pages3.jsonl"), "banking")
        assert report.fetched == 25
        assert report.empty_removed == 1  # emoji-only comment
        assert report.duplicates_removed == 2  # one exact, one case-folded
        assert report.persisted == 22

    def test_report_arithmetic_enforced(self):
        with pytest.raises(ValidationError):
            IngestReport(fetched=10, duplicates_removed=1, empty_removed=1, persisted=9)

    def test_texts_are_normalized(self):
        comments, _ = ingest(file_source(FIXTURES / "pages3.jsonl"), "q")
        assert all(c.text == c.text.strip() for c in comments)
        by_id = {c.id: c for c in comments}
        assert by_id["p01"].text == "the loan approval took three weeks"

    def test_max_pages_limits_fetch(self):
        src = file_source(FIXTURES / "pages3.jsonl")
        _, report = ingest(src, "q", IngestConfig(max_pages=1))
        assert report.fetched == 9

    def test_empty_query_rejected(self):
        with pytest.raises(ArgumentError):
            ingest(file_source(FIXTURES / "pages3.jsonl"), "")

    def test_malformed_count_surfaces_in_report(self):
        src = file_source(FIXTURES / "pages_malformed.jsonl")
        _, report = ingest(src, "q")
        assert report.malformed_skipped == 2

    def test_source_error_keeps_partial_results(self):
        class FlakySource:
            def fetch(self, query, page_token=None):
                if page_token is None:
                    return [comment(0, "loan delayed")], "1"
                raise SourceError("quota exhausted")

        kept, report = ingest(FlakySource(), "q")
        assert len(kept) == 1
        assert report.source_errors == ("quota exhausted",)

    def test_idempotent_over_unchanged_source(self, tmp_path):
        out = tmp_path / "corpus.jsonl"
        config = IngestConfig(out_path=out)
        ingest(file_source(FIXTURES / "ingest_pages100.jsonl"), "q", config)
        first = out.read_bytes()
        ingest(file_source(FIXTURES / "ingest_pages100.jsonl"), "q", config)
        assert out.read_bytes() == first

    def test_manifest_written(self, tmp_path):
        out = tmp_path / "corpus.jsonl"
        _, report = ingest(
            file_source(FIXTURES / "pages3.jsonl"), "loan OR bank", IngestConfig(out_path=out)
        )
        manifest = json.loads((tmp_path / "corpus.jsonl.manifest.json").read_text())
        assert manifest["query"] == "loan OR bank"
        assert manifest["persisted"] == report.persisted
        assert "timestamp" in manifest

    def test_round_trip_through_file(self, tmp_path):
        out = tmp_path / "corpus.jsonl"
        kept, _ = ingest(
            file_source(FIXTURES / "pages3.jsonl"), "q", IngestConfig(out_path=out)
        )
        assert read_comments(out) == kept

    def test_write_preserves_unicode(self, tmp_path):
        out = tmp_path / "si.jsonl"
        write_comments(out, [comment(0, "ණය අයදුම්පත")])
        assert "ණය" in out.read_text(encoding="utf-8")  # not \u escaped

    def test_read_rejects_bad_line(self, tmp_path):
        path = tmp_path / "bad.jsonl"
        path.write_text('{"id": "a", "source": "s", "text": "x"}\n{broken\n')
        with pytest.raises(SourceError, match="line 2"):
            read_comments(path)


class TestIngestConfig:
    def test_max_pages_validation(self):
        with pytest.raises(ConfigError):
            IngestConfig(max_pages=0)


class TestLiveSource:
    def test_needs_api_key(self, monkeypatch):
        monkeypatch.delenv("FINSIFT_API_KEY", raising=False)
        with pytest.raises(ConfigError):
            youtube_source()

    def test_key_from_env_accepted(self, monkeypatch):
        monkeypatch.setenv("FINSIFT_API_KEY", "k-123")
        src = youtube_source()
        assert src.malformed_skipped == 0  # constructed, no network yet
