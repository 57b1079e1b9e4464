"""Embedding-based ranking: plain cosine top-n and MMR-diversified selection.

Both rankers embed the full document once and every candidate phrase once,
score candidates by cosine against the document, and differ only in how
the final list is chosen.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .candidates import Polarity, ScoredPhrase, candidate_phrases
from .errors import ArgumentError, UndefinedSimilarityError, ValidationError
from .model import CandidatePhrase, Document, EmbeddingVector
from .providers import EmbeddingProvider


@dataclass(frozen=True)
class EmbedRankParams:
    top_n: int = 10
    mmr_lambda: float = 0.65
    max_ngram: int = 3

    def __post_init__(self):
        if self.top_n < 1 or self.max_ngram < 1:
            raise ValidationError("top_n and max_ngram must be >= 1")
        if not (0.0 <= self.mmr_lambda <= 1.0):
            raise ValidationError("mmr_lambda must lie in [0, 1]")


def cosine(u: EmbeddingVector, v: EmbeddingVector) -> float:
    if u.dims != v.dims:
        raise ArgumentError(f"dim mismatch: {u.dims} != {v.dims}")
    nu = float(np.linalg.norm(u.values))
    nv = float(np.linalg.norm(v.values))
    if nu == 0.0 or nv == 0.0:
        raise UndefinedSimilarityError("cosine of a zero vector is undefined")
    return float(np.dot(u.values, v.values) / (nu * nv))


def _embed_candidates(
    doc: Document, provider: EmbeddingProvider, max_ngram: int
) -> tuple[list[CandidatePhrase], EmbeddingVector, list[EmbeddingVector]]:
    cands = candidate_phrases(doc, max_ngram)
    if not cands:
        return [], None, []
    vectors = provider.embed([doc.raw_text] + [c.normalized for c in cands])
    return cands, vectors[0], vectors[1:]


def embedrank(
    doc: Document, provider: EmbeddingProvider, params: EmbedRankParams | None = None
) -> list[ScoredPhrase]:
    """Greedy MMR selection: each step takes the candidate maximizing
    lambda * cos(c, doc) - (1 - lambda) * max cos(c, selected).  Scores on
    the output are the plain document cosines, in selection order."""
    if params is None:
        params = EmbedRankParams()
    cands, doc_vec, cand_vecs = _embed_candidates(doc, provider, params.max_ngram)
    if not cands:
        return []
    informativeness = [cosine(v, doc_vec) for v in cand_vecs]
    selected: list[int] = []
    remaining = list(range(len(cands)))
    lam = params.mmr_lambda
    while remaining and len(selected) < params.top_n:
        best_idx = None
        best_val = -math.inf
        for i in remaining:
            redundancy = max(
                (cosine(cand_vecs[i], cand_vecs[j]) for j in selected),
                default=0.0,
            )
            val = lam * informativeness[i] - (1.0 - lam) * redundancy
            # ties resolve to the earlier candidate for determinism
            if val > best_val:
                best_val = val
                best_idx = i
        selected.append(best_idx)
        remaining.remove(best_idx)
    return [
        ScoredPhrase(cands[i], informativeness[i], Polarity.HIGHER_IS_BETTER)
        for i in selected
    ]


def keybert_extract(
    doc: Document,
    provider: EmbeddingProvider,
    top_n: int = 10,
    max_ngram: int = 3,
) -> list[ScoredPhrase]:
    """Plain cosine top-n over the same candidate universe, no
    diversification."""
    if top_n < 1 or max_ngram < 1:
        raise ArgumentError("top_n and max_ngram must be >= 1")
    cands, doc_vec, cand_vecs = _embed_candidates(doc, provider, max_ngram)
    if not cands:
        return []
    scored = [
        (cosine(v, doc_vec), idx) for idx, v in enumerate(cand_vecs)
    ]
    scored.sort(key=lambda pair: (-pair[0], pair[1]))
    return [
        ScoredPhrase(cands[idx], score, Polarity.HIGHER_IS_BETTER)
        for score, idx in scored[:top_n]
    ]
