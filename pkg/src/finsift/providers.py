"""Pluggable embedding providers.

Three implementations cover every execution mode: a seeded-hash provider
for offline and test runs, a fixture-file provider serving exact vectors,
and a remote provider speaking the embedding wire protocol.  All of them
return unit-length float64 vectors and are safe to call concurrently.
"""

from __future__ import annotations

import abc
import hashlib
import json
import pathlib
import threading

import numpy as np
import requests

from .errors import MissingVectorError, ProviderError, RemoteError, ValidationError
from .model import EmbeddingVector
from .textnorm import normalize_text, tokenize

REMOTE_BATCH_LIMIT = 64


class EmbeddingProvider(abc.ABC):
    """Deterministic text-to-vector mapping with a fixed dimensionality."""

    @abc.abstractmethod
    def embed(self, texts: list[str]) -> list[EmbeddingVector]: ...

    @abc.abstractmethod
    def dims(self) -> int: ...

    @abc.abstractmethod
    def id(self) -> str: ...


def _unit(vec: np.ndarray) -> EmbeddingVector:
    norm = float(np.linalg.norm(vec))
    if norm == 0.0:
        # all-zero accumulations get a fixed direction instead of NaN
        vec = np.zeros_like(vec)
        vec[0] = 1.0
        norm = 1.0
    return EmbeddingVector(vec / norm)


class HashProvider(EmbeddingProvider):
    """Pseudo-embeddings from seeded per-token hashes.

    Each normalized token maps to a fixed Gaussian vector derived from a
    keyed digest, and a text embeds as the unit-normalized mean of its
    token vectors, so texts sharing tokens get higher cosine.  Independent
    of PYTHONHASHSEED.
    """

    def __init__(self, dims: int = 64, seed: int = 0):
        if dims < 8:
            raise ValidationError("hash provider needs dims >= 8")
        self._dims = dims
        self._seed = seed
        self._cache: dict[str, np.ndarray] = {}
        self._lock = threading.Lock()

    def _token_vector(self, token: str) -> np.ndarray:
        with self._lock:
            cached = self._cache.get(token)
        if cached is not None:
            return cached
        digest = hashlib.blake2b(
            f"{self._seed}:{token}".encode("utf-8"), digest_size=8
        ).digest()
        rng = np.random.default_rng(int.from_bytes(digest, "big"))
        vec = rng.normal(size=self._dims)
        with self._lock:
            self._cache[token] = vec
        return vec

    def embed(self, texts: list[str]) -> list[EmbeddingVector]:
        out = []
        for text in texts:
            tokens = [t.normalized for t in tokenize(normalize_text(text))]
            if not tokens:
                tokens = ["<empty>"]
            acc = np.zeros(self._dims)
            for tok in tokens:
                acc += self._token_vector(tok)
            out.append(_unit(acc / len(tokens)))
        return out

    def dims(self) -> int:
        return self._dims

    def id(self) -> str:
        return f"hash:{self._dims}:{self._seed}"


class FileProvider(EmbeddingProvider):
    """Exact vectors from a JSON-lines fixture keyed by normalized text."""

    def __init__(self, path: str | pathlib.Path):
        path = pathlib.Path(path)
        self._path = path
        self._vectors: dict[str, EmbeddingVector] = {}
        dims = None
        with path.open(encoding="utf-8") as fh:
            for line_no, line in enumerate(fh, start=1):
                line = line.strip()
                if not line:
                    continue
                try:
                    record = json.loads(line)
                    vec = EmbeddingVector(np.asarray(record["vector"], dtype=np.float64))
                    key = normalize_text(record["text"])
                except (KeyError, TypeError, ValueError) as exc:
                    raise ProviderError(f"{path}:{line_no}: bad vector record: {exc}")
                if dims is None:
                    dims = vec.dims
                elif vec.dims != dims:
                    raise ProviderError(
                        f"{path}:{line_no}: dims {vec.dims} != {dims}"
                    )
                self._vectors[key] = vec
        if dims is None:
            raise ProviderError(f"{path}: no vectors")
        self._dims = dims

    def embed(self, texts: list[str]) -> list[EmbeddingVector]:
        out = []
        for text in texts:
            key = normalize_text(text)
            if key not in self._vectors:
                raise MissingVectorError(key)
            out.append(self._vectors[key])
        return out

    def dims(self) -> int:
        return self._dims

    def id(self) -> str:
        return f"file:{self._path.name}"


class RemoteProvider(EmbeddingProvider):
    """Client for the embedding wire protocol.

    POSTs {"texts": [...]} to <endpoint>/embed in batches of at most 64
    and expects {"vectors": [[...]], "dims": n, "model": "..."}.  The
    endpoint is probed once at construction via GET /health.
    """

    def __init__(self, endpoint: str, model: str | None = None, timeout: float = 10.0):
        self._endpoint = endpoint.rstrip("/")
        self._model = model
        self._timeout = timeout
        health = self._request("GET", "/health")
        if health.get("status") != "ok":
            raise RemoteError(f"{self._endpoint}: unhealthy: {health!r}")
        self._dims = int(health["dims"])
        self._remote_model = str(health.get("model", ""))

    def _request(self, method: str, path: str, payload: dict | None = None) -> dict:
        url = self._endpoint + path
        try:
            if method == "GET":
                resp = requests.get(url, timeout=self._timeout)
            else:
                resp = requests.post(url, json=payload, timeout=self._timeout)
        except requests.RequestException as exc:
            raise RemoteError(f"{url}: {exc}")
        if resp.status_code != 200:
            raise RemoteError(f"{url}: HTTP {resp.status_code}: {resp.text[:200]}")
        try:
            return resp.json()
        except ValueError as exc:
            raise RemoteError(f"{url}: non-JSON response: {exc}")

    def embed(self, texts: list[str]) -> list[EmbeddingVector]:
        out: list[EmbeddingVector] = []
        for start in range(0, len(texts), REMOTE_BATCH_LIMIT):
            batch = texts[start : start + REMOTE_BATCH_LIMIT]
            payload: dict = {"texts": batch}
            if self._model is not None:
                payload["model"] = self._model
            body = self._request("POST", "/embed", payload)
            try:
                vectors = body["vectors"]
            except (KeyError, TypeError):
                raise RemoteError(f"{self._endpoint}/embed: missing 'vectors'")
            if len(vectors) != len(batch):
                raise RemoteError(
                    f"{self._endpoint}/embed: got {len(vectors)} vectors "
                    f"for {len(batch)} texts"
                )
            for row in vectors:
                vec = EmbeddingVector(np.asarray(row, dtype=np.float64))
                if vec.dims != self._dims:
                    raise RemoteError(
                        f"{self._endpoint}/embed: dims {vec.dims} != {self._dims}"
                    )
                out.append(vec)
        return out

    def dims(self) -> int:
        return self._dims

    def id(self) -> str:
        return f"remote:{self._endpoint}:{self._remote_model}"


def hash_provider(dims: int = 64, seed: int = 0) -> EmbeddingProvider:
    return HashProvider(dims, seed)


def file_provider(path: str | pathlib.Path) -> EmbeddingProvider:
    return FileProvider(path)


def remote_provider(
    endpoint: str, model: str | None = None, timeout: float = 10.0
) -> EmbeddingProvider:
    return RemoteProvider(endpoint, model, timeout)
