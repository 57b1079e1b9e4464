"""HTTP client for an external text-classification service.

Wire protocol: POST ``{endpoint}/classify`` with body
``{"task": "relevance" | "aspect", "texts": [...]}``; the service answers
``{"labels": [...]}`` plus an optional parallel ``"confidences"`` list.
Responses are validated strictly; anything off-protocol raises RemoteError
rather than being coerced into a guess.
"""

from __future__ import annotations

import requests

from .errors import ArgumentError, RemoteError

KNOWN_TASKS = ("relevance", "aspect")


class ClassifierClient:
    def __init__(self, endpoint: str, timeout: float = 10.0):
        if not endpoint:
            raise ArgumentError("endpoint must be non-empty")
        self._endpoint = endpoint.rstrip("/")
        self._timeout = timeout

    @property
    def endpoint(self) -> str:
        return self._endpoint

    def classify(self, task: str, texts: list[str]) -> list[tuple[str, float | None]]:
        """Label (and optional confidence) for each text, in input order."""
        if task not in KNOWN_TASKS:
            raise ArgumentError(f"unknown task {task!r}; expected one of {KNOWN_TASKS}")
        if not texts:
            return []
        url = f"{self._endpoint}/classify"
        try:
            resp = requests.post(
                url, json={"task": task, "texts": list(texts)}, timeout=self._timeout
            )
            resp.raise_for_status()
            payload = resp.json()
        except requests.RequestException as exc:
            raise RemoteError(f"classifier request to {url} failed: {exc}") from exc
        except ValueError as exc:
            raise RemoteError(f"classifier at {url} returned invalid JSON") from exc
        return self._validate(url, payload, len(texts))

    @staticmethod
    def _validate(url, payload, expected: int) -> list[tuple[str, float | None]]:
        if not isinstance(payload, dict) or "labels" not in payload:
            raise RemoteError(f"classifier at {url} returned no labels field")
        labels = payload["labels"]
        if not isinstance(labels, list) or len(labels) != expected:
            raise RemoteError(
                f"classifier at {url} returned {len(labels) if isinstance(labels, list) else 'non-list'} "
                f"labels for {expected} texts"
            )
        if not all(isinstance(lbl, str) for lbl in labels):
            raise RemoteError(f"classifier at {url} returned non-string labels")
        confidences = payload.get("confidences")
        if confidences is None:
            return [(lbl, None) for lbl in labels]
        if not isinstance(confidences, list) or len(confidences) != expected:
            raise RemoteError(f"classifier at {url} returned mismatched confidences")
        out = []
        for lbl, conf in zip(labels, confidences):
            if not isinstance(conf, (int, float)) or not 0.0 <= conf <= 1.0:
                raise RemoteError(
                    f"classifier at {url} returned confidence {conf!r} outside [0, 1]"
                )
            out.append((lbl, float(conf)))
        return out
