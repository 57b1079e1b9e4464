"""Score normalization, weighted fusion, validation, boosting, and the two
language pipelines.

The fused score of a phrase is a fixed-weight linear combination of its
per-method min-max-normalized scores; methods that never saw the phrase
contribute zero.  Vocabulary-matched phrases get their final score
multiplied by the boost factor, and on the English path phrases with
neither an entity match nor a vocabulary match are dropped entirely.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field

from .candidates import Polarity, ScoredPhrase, candidate_phrases
from .embedrank import EmbedRankParams, cosine, embedrank, keybert_extract
from .errors import ArgumentError, ConfigError
from .lexicon import EntitySpan, Lexicon, gazetteer_match, vocab_contains
from .model import CandidatePhrase, Document, KeywordResult, MethodScore
from .providers import EmbeddingProvider
from .stats import YakeParams, yake_extract

METHOD_YAKE = "yake"
METHOD_KEYBERT = "keybert"
METHOD_EMBEDRANK = "embedrank"


@dataclass(frozen=True)
class FusionWeights:
    w_yake: float = 2.0
    w_keybert: float = 3.0
    w_embedrank: float = 4.0

    def __post_init__(self):
        if min(self.w_yake, self.w_keybert, self.w_embedrank) < 0:
            raise ConfigError("fusion weights must be non-negative")

    def as_map(self) -> dict[str, float]:
        return {
            METHOD_YAKE: self.w_yake,
            METHOD_KEYBERT: self.w_keybert,
            METHOD_EMBEDRANK: self.w_embedrank,
        }


@dataclass(frozen=True)
class PipelineConfig:
    weights: FusionWeights = field(default_factory=FusionWeights)
    boost_factor: float = 2.0
    english_discard_unvalidated: bool = True
    top_k: int = 10
    yake: YakeParams = field(default_factory=YakeParams)
    embedrank: EmbedRankParams = field(default_factory=EmbedRankParams)
    keybert_top_n: int = 10

    def __post_init__(self):
        if self.boost_factor <= 0:
            raise ConfigError("boost_factor must be positive")
        if self.top_k < 1 or self.keybert_top_n < 1:
            raise ConfigError("top_k and keybert_top_n must be >= 1")


def normalize_method_scores(scored: list[ScoredPhrase]) -> dict[str, float]:
    """Min-max normalization to [0, 1] with 1 = best.  LowerIsBetter lists
    are inverted (x -> max - x) first; a degenerate list (all scores equal)
    normalizes to 1.0."""
    if not scored:
        return {}
    polarity = scored[0].polarity
    values = [sp.score for sp in scored]
    if polarity is Polarity.LOWER_IS_BETTER:
        top = max(values)
        values = [top - v for v in values]
    lo, hi = min(values), max(values)
    if hi == lo:
        return {sp.phrase.normalized: 1.0 for sp in scored}
    return {
        sp.phrase.normalized: (v - lo) / (hi - lo)
        for sp, v in zip(scored, values)
    }


def fuse(normalized: dict[str, float], weights: FusionWeights) -> float:
    """Weighted sum of per-method normalized scores; absent methods
    contribute zero."""
    weight_map = weights.as_map()
    total = 0.0
    for method, value in normalized.items():
        if not (0.0 <= value <= 1.0):
            raise ArgumentError(f"normalized score for {method} outside [0, 1]")
        total += weight_map.get(method, 0.0) * value
    return total


def _overlaps(phrase: CandidatePhrase, spans: list[EntitySpan]) -> bool:
    a, b = phrase.token_range
    return any(a < end and start < b for start, end in (s.token_range for s in spans))


def validate_and_boost(
    kw: KeywordResult,
    spans: list[EntitySpan],
    lex: Lexicon,
    lang: str,
    config: PipelineConfig,
) -> KeywordResult | None:
    """Set the entity/vocabulary flags, drop unvalidated English keywords,
    and boost vocabulary matches."""
    ner = _overlaps(kw.phrase, spans)
    vocab = vocab_contains(kw.phrase.normalized, lex, lang)
    if lang == "en" and config.english_discard_unvalidated and not (ner or vocab):
        return None
    return dataclasses.replace(
        kw,
        ner_validated=ner,
        vocab_matched=vocab,
        boosted=vocab,
        boost_factor=config.boost_factor,
    )


def _rank(results: list[KeywordResult], top_k: int) -> list[KeywordResult]:
    results.sort(
        key=lambda kw: (
            -kw.final_score,
            kw.phrase.token_range[0],
            kw.phrase.normalized,
        )
    )
    return results[:top_k]


def extract_keywords_en(
    doc: Document,
    provider: EmbeddingProvider,
    lexicon: Lexicon,
    config: PipelineConfig | None = None,
    ner_spans: list[EntitySpan] | None = None,
) -> list[KeywordResult]:
    """Full English pipeline: three extractors over one candidate universe,
    normalization, fusion, entity/vocabulary validation, boost, ranking."""
    if config is None:
        config = PipelineConfig()
    by_method = {
        METHOD_YAKE: yake_extract(doc, config.yake),
        METHOD_KEYBERT: keybert_extract(
            doc, provider, config.keybert_top_n, config.embedrank.max_ngram
        ),
        METHOD_EMBEDRANK: embedrank(doc, provider, config.embedrank),
    }
    normalized = {
        method: normalize_method_scores(scored)
        for method, scored in by_method.items()
    }
    raw = {
        method: {sp.phrase.normalized: sp.score for sp in scored}
        for method, scored in by_method.items()
    }
    universe: dict[str, CandidatePhrase] = {}
    for scored in by_method.values():
        for sp in scored:
            universe.setdefault(sp.phrase.normalized, sp.phrase)
    if not universe:
        return []
    if ner_spans is None:
        ner_spans = gazetteer_match(doc, lexicon)

    results = []
    for key, phrase in universe.items():
        methods = {
            m: MethodScore(raw[m][key], normalized[m][key])
            for m in by_method
            if key in normalized[m]
        }
        fused = fuse({m: ms.normalized for m, ms in methods.items()}, config.weights)
        kw = KeywordResult(
            phrase=phrase,
            method_scores=methods,
            fused_score=fused,
            ner_validated=False,
            vocab_matched=False,
            boosted=False,
            boost_factor=config.boost_factor,
        )
        kept = validate_and_boost(kw, ner_spans, lexicon, "en", config)
        if kept is not None:
            results.append(kept)
    return _rank(results, config.top_k)


def extract_keywords_si(
    doc: Document,
    provider: EmbeddingProvider,
    lexicon: Lexicon,
    config: PipelineConfig | None = None,
    ner_spans: list[EntitySpan] | None = None,
    language: str = "si",
) -> list[KeywordResult]:
    """Sinhala/code-mixed pipeline: embedding cosine is the sole score
    source, entity surfaces join the candidate universe, nothing is
    discarded, vocabulary matches are boosted."""
    if config is None:
        config = PipelineConfig()
    if ner_spans is None:
        ner_spans = gazetteer_match(doc, lexicon)
    universe: dict[str, CandidatePhrase] = {}
    for cand in candidate_phrases(doc, config.embedrank.max_ngram):
        universe.setdefault(cand.normalized, cand)
    for span in ner_spans:
        if span.matched_term not in universe:
            start, end = span.token_range
            first, last = doc.tokens[start], doc.tokens[end - 1]
            surface = doc.raw_text[
                first.char_offset : last.char_offset + len(last.surface)
            ]
            universe[span.matched_term] = CandidatePhrase(
                span.token_range, surface, span.matched_term
            )
    if not universe:
        return []

    keys = sorted(universe, key=lambda k: (universe[k].token_range[0], len(k)))
    vectors = provider.embed([doc.raw_text] + keys)
    doc_vec, cand_vecs = vectors[0], vectors[1:]
    scored = [
        ScoredPhrase(universe[k], cosine(v, doc_vec), Polarity.HIGHER_IS_BETTER)
        for k, v in zip(keys, cand_vecs)
    ]
    normalized = normalize_method_scores(scored)

    results = []
    for sp in scored:
        key = sp.phrase.normalized
        methods = {METHOD_EMBEDRANK: MethodScore(sp.score, normalized[key])}
        fused = fuse({METHOD_EMBEDRANK: normalized[key]}, config.weights)
        kw = KeywordResult(
            phrase=sp.phrase,
            method_scores=methods,
            fused_score=fused,
            ner_validated=False,
            vocab_matched=False,
            boosted=False,
            boost_factor=config.boost_factor,
        )
        kept = validate_and_boost(kw, ner_spans, lexicon, language, config)
        if kept is not None:
            results.append(kept)
    return _rank(results, config.top_k)


def keywords_to_json_dict(doc_id: str, results: list[KeywordResult]) -> dict:
    """The wire shape for persisted keyword output."""
    return {
        "doc_id": doc_id,
        "keywords": [
            {
                "phrase": kw.phrase.normalized,
                "final_score": kw.final_score,
                "fused": kw.fused_score,
                "methods": {
                    m: {"raw": ms.raw, "normalized": ms.normalized}
                    for m, ms in sorted(kw.method_scores.items())
                },
                "boosted": kw.boosted,
                "ner": kw.ner_validated,
            }
            for kw in results
        ],
    }
