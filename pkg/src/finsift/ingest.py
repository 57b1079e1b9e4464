"""Comment acquisition: paginated sources, cleaning, dedup, persistence.

Sources implement ``fetch(query, page_token) -> (comments, next_page)``.
Tests run entirely against the file-backed source; the live video-comment
source needs an API key from the environment and is only reachable through
an explicit flag.
"""

from __future__ import annotations

import dataclasses
import hashlib
import json
import os
import time
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path
from typing import Protocol, Sequence

import requests

from .errors import ArgumentError, ConfigError, FinsiftError, SourceError, ValidationError
from .model import Comment
from .textnorm import normalize_text

API_KEY_ENV = "FINSIFT_API_KEY"


class CommentSource(Protocol):
    def fetch(
        self, query: str, page_token: str | None = None
    ) -> tuple[list[Comment], str | None]: ...


@dataclass(frozen=True)
class IngestConfig:
    max_pages: int | None = None
    out_path: str | os.PathLike | None = None
    manifest_path: str | os.PathLike | None = None

    def __post_init__(self):
        if self.max_pages is not None and self.max_pages < 1:
            raise ConfigError("max_pages must be at least 1 when set")


@dataclass(frozen=True)
class IngestReport:
    fetched: int
    duplicates_removed: int
    empty_removed: int
    persisted: int
    malformed_skipped: int = 0
    source_errors: tuple[str, ...] = ()

    def __post_init__(self):
        if self.persisted != self.fetched - self.duplicates_removed - self.empty_removed:
            raise ValidationError(
                "persisted must equal fetched - duplicates_removed - empty_removed"
            )


def _text_digest(text: str) -> str:
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


def dedup(comments: Sequence[Comment]) -> list[Comment]:
    """Drop exact duplicates of normalized text; first occurrence wins."""
    seen: set = set()
    out: list[Comment] = []
    for comment in comments:
        digest = _text_digest(comment.text)
        if digest not in seen:
            seen.add(digest)
            out.append(comment)
    return out


def ingest(
    source: CommentSource, query: str, config: IngestConfig | None = None
) -> tuple[list[Comment], IngestReport]:
    """Paginate to exhaustion (or max_pages), clean, dedup, persist."""
    config = config or IngestConfig()
    if not query:
        raise ArgumentError("query must be non-empty")
    fetched: list[Comment] = []
    source_errors: list[str] = []
    token: str | None = None
    pages = 0
    while True:
        try:
            batch, token = source.fetch(query, token)
        except SourceError as exc:
            source_errors.append(str(exc))
            break
        fetched.extend(batch)
        pages += 1
        if token is None:
            break
        if config.max_pages is not None and pages >= config.max_pages:
            break

    cleaned: list[Comment] = []
    empty_removed = 0
    for comment in fetched:
        text = normalize_text(comment.text)
        if not text:
            empty_removed += 1
            continue
        cleaned.append(dataclasses.replace(comment, text=text))
    unique = dedup(cleaned)
    report = IngestReport(
        fetched=len(fetched),
        duplicates_removed=len(cleaned) - len(unique),
        empty_removed=empty_removed,
        persisted=len(unique),
        malformed_skipped=getattr(source, "malformed_skipped", 0),
        source_errors=tuple(source_errors),
    )
    if config.out_path is not None:
        write_comments(config.out_path, unique)
        manifest_path = config.manifest_path
        if manifest_path is None:
            manifest_path = str(config.out_path) + ".manifest.json"
        _write_manifest(manifest_path, query, report)
    return unique, report


def write_comments(path, comments: Sequence[Comment]) -> None:
    with open(path, "w", encoding="utf-8") as handle:
        for comment in comments:
            handle.write(json.dumps(comment.to_json_dict(), ensure_ascii=False) + "\n")


def read_comments(path) -> list[Comment]:
    """Comment JSON-lines reader; raises with line numbers on bad rows."""
    out = []
    for line_no, line in enumerate(
        Path(path).read_text(encoding="utf-8").splitlines(), 1
    ):
        if not line.strip():
            continue
        try:
            obj = json.loads(line)
            out.append(Comment.from_json_dict(obj))
        except (json.JSONDecodeError, FinsiftError, TypeError) as exc:
            raise SourceError(f"{path} line {line_no}: {exc}") from exc
    return out


def _write_manifest(path, query: str, report: IngestReport) -> None:
    manifest = {
        "query": query,
        "timestamp": datetime.now(timezone.utc).isoformat(),
        "fetched": report.fetched,
        "duplicates_removed": report.duplicates_removed,
        "empty_removed": report.empty_removed,
        "persisted": report.persisted,
        "malformed_skipped": report.malformed_skipped,
        "source_errors": list(report.source_errors),
    }
    Path(path).write_text(
        json.dumps(manifest, ensure_ascii=False, indent=2) + "\n", encoding="utf-8"
    )


class FileSource:
    """Replays a JSON-lines file of pages; each line is
    ``{"comments": [comment objects]}``.  Malformed comment entries are
    skipped and counted; malformed page lines are hard errors."""

    def __init__(self, path):
        self.malformed_skipped = 0
        self._pages: list[list[Comment]] = []
        text = Path(path).read_text(encoding="utf-8")
        for line_no, line in enumerate(text.splitlines(), 1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise SourceError(f"line {line_no}: invalid page JSON: {exc}") from exc
            if not isinstance(obj, dict) or not isinstance(obj.get("comments"), list):
                raise SourceError(
                    f"line {line_no}: page must be an object with a comments list"
                )
            page = []
            for item in obj["comments"]:
                try:
                    page.append(Comment.from_json_dict(item))
                except (FinsiftError, TypeError, AttributeError):
                    self.malformed_skipped += 1
            self._pages.append(page)

    @property
    def page_count(self) -> int:
        return len(self._pages)

    def fetch(
        self, query: str, page_token: str | None = None
    ) -> tuple[list[Comment], str | None]:
        if not query:
            raise ArgumentError("query must be non-empty")
        if not self._pages:
            return [], None
        index = 0 if page_token is None else int(page_token)
        if not 0 <= index < len(self._pages):
            raise SourceError(f"unknown page token {page_token!r}")
        next_token = str(index + 1) if index + 1 < len(self._pages) else None
        return list(self._pages[index]), next_token


def file_source(path) -> FileSource:
    return FileSource(path)


class YouTubeSource:
    """Live comment-thread source over the public data API v3.

    A query selects videos; all top-level comments of each hit are fetched.
    Page tokens encode (video index, upstream token).  Plain GETs retry
    three times with doubling backoff.
    """

    SEARCH_URL = "https://www.googleapis.com/youtube/v3/search"
    THREADS_URL = "https://www.googleapis.com/youtube/v3/commentThreads"

    def __init__(self, api_key: str | None = None, max_videos: int = 5, timeout: float = 15.0):
        key = api_key or os.environ.get(API_KEY_ENV)
        if not key:
            raise ConfigError(
                f"live source needs an API key ({API_KEY_ENV} or api_key argument)"
            )
        self._key = key
        self._max_videos = max_videos
        self._timeout = timeout
        self._video_ids: list[str] | None = None
        self.malformed_skipped = 0

    def _get(self, url: str, params: dict) -> dict:
        last: Exception | None = None
        for attempt in range(3):
            try:
                resp = requests.get(
                    url, params={**params, "key": self._key}, timeout=self._timeout
                )
                resp.raise_for_status()
                return resp.json()
            except (requests.RequestException, ValueError) as exc:
                last = exc
                time.sleep(0.5 * 2**attempt)
        raise SourceError(f"request to {url} failed after 3 attempts: {last}")

    def _search_videos(self, query: str) -> list[str]:
        payload = self._get(
            self.SEARCH_URL,
            {"part": "id", "q": query, "type": "video", "maxResults": self._max_videos},
        )
        return [
            item["id"]["videoId"]
            for item in payload.get("items", [])
            if item.get("id", {}).get("videoId")
        ]

    def fetch(
        self, query: str, page_token: str | None = None
    ) -> tuple[list[Comment], str | None]:
        if not query:
            raise ArgumentError("query must be non-empty")
        if self._video_ids is None:
            self._video_ids = self._search_videos(query)
        if page_token is None:
            video_index, upstream = 0, None
        else:
            head, _, upstream = page_token.partition(":")
            video_index, upstream = int(head), upstream or None
        if video_index >= len(self._video_ids):
            return [], None
        params = {
            "part": "snippet",
            "videoId": self._video_ids[video_index],
            "maxResults": 100,
            "textFormat": "plainText",
        }
        if upstream:
            params["pageToken"] = upstream
        payload = self._get(self.THREADS_URL, params)
        comments = []
        for item in payload.get("items", []):
            try:
                snippet = item["snippet"]["topLevelComment"]["snippet"]
                comments.append(
                    Comment(
                        id=str(item["id"]),
                        source="youtube",
                        text=str(snippet["textOriginal"]),
                        timestamp=snippet.get("publishedAt"),
                    )
                )
            except (KeyError, TypeError, FinsiftError):
                self.malformed_skipped += 1
        next_upstream = payload.get("nextPageToken")
        if next_upstream:
            return comments, f"{video_index}:{next_upstream}"
        if video_index + 1 < len(self._video_ids):
            return comments, f"{video_index + 1}:"
        return comments, None


def youtube_source(api_key: str | None = None, **kwargs) -> YouTubeSource:
    return YouTubeSource(api_key, **kwargs)
