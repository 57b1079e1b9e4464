"""Embedding backends behind the /embed endpoint.

Every backend is deterministic per (model, text) for the lifetime of the
process.  The hash backend needs no model download, so the service can
run fully offline; transformer-backed models load lazily through
sentence-transformers when their weights are reachable.
"""

import hashlib
import re
from typing import Protocol

import numpy as np

from .errors import ConfigError

_HASH_ID = re.compile(r"^hash-(\d+)$")


class Backend(Protocol):
    name: str
    dims: int

    def encode(self, texts: list[str]) -> list[list[float]]: ...


class HashBackend:
    """Seeded-Gaussian embedder: sha256(model:text) drives the draw."""

    def __init__(self, name: str, dims: int, normalize: bool = True):
        if dims < 1:
            raise ConfigError(f"dims must be >= 1, got {dims}")
        self.name = name
        self.dims = dims
        self._normalize = normalize

    def _vector(self, text: str) -> np.ndarray:
        digest = hashlib.sha256(f"{self.name}:{text}".encode("utf-8")).digest()
        seed = int.from_bytes(digest[:8], "big")
        vec = np.random.default_rng(seed).normal(size=self.dims)
        if self._normalize:
            norm = np.linalg.norm(vec)
            if norm > 0:
                vec = vec / norm
        return vec

    def encode(self, texts: list[str]) -> list[list[float]]:
        return [self._vector(t).tolist() for t in texts]


class SentenceTransformerBackend:
    """Wraps a sentence-transformers model; pooling stays the model default."""

    def __init__(self, name: str, normalize: bool = True):
        try:
            from sentence_transformers import SentenceTransformer
        except ImportError as exc:
            raise ConfigError(
                f"model {name!r} needs the sentence-transformers extra"
            ) from exc
        try:
            self._model = SentenceTransformer(name)
        except Exception as exc:
            raise ConfigError(f"could not load model {name!r}: {exc}") from exc
        self.name = name
        self.dims = int(self._model.get_sentence_embedding_dimension())
        self._normalize = normalize

    def encode(self, texts: list[str]) -> list[list[float]]:
        vectors = self._model.encode(
            texts, normalize_embeddings=self._normalize, convert_to_numpy=True
        )
        return [row.tolist() for row in np.atleast_2d(vectors)]


def load_backend(model: str, normalize: bool = True) -> Backend:
    """hash-<dims> always works; anything else is a sentence-transformers id."""
    match = _HASH_ID.match(model)
    if match:
        return HashBackend(model, int(match.group(1)), normalize)
    return SentenceTransformerBackend(model, normalize)
