"""Relevance filtering: keep banking comments, quarantine the rest.

Three interchangeable strategies decide per comment: a lexicon rule
(count distinct domain-term hits), a trained linear head over embeddings,
or an external classifier service.  Removed comments are never deleted;
they are appended to a quarantine file for inspection.
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

from .client import ClassifierClient
from .errors import ArgumentError, ConfigError, RemoteError, ValidationError
from .lexicon import Lexicon, LexiconCategory, gazetteer_match
from .linear import LinearModel, predict
from .model import Comment, RelevanceLabel
from .providers import EmbeddingProvider
from .textnorm import build_document, normalize_text

_ALL_CATEGORIES = frozenset(LexiconCategory)

RELEVANCE_CLASSES = (RelevanceLabel.RELEVANT.value, RelevanceLabel.IRRELEVANT.value)


class FilterStrategy(enum.Enum):
    LEXICON = "lexicon"
    LINEAR = "linear"
    EXTERNAL = "external"


@dataclass(frozen=True)
class FilterDecision:
    label: RelevanceLabel
    strategy: FilterStrategy
    confidence: float | None = None
    matched_terms: tuple[str, ...] = ()

    def __post_init__(self):
        if self.strategy is FilterStrategy.LINEAR and self.confidence is None:
            raise ValidationError("linear decisions must carry a confidence")
        if self.confidence is not None and not 0.0 <= self.confidence <= 1.0:
            raise ValidationError("confidence must lie in [0, 1]")
        if self.strategy is not FilterStrategy.LEXICON and self.matched_terms:
            raise ValidationError("only lexicon decisions carry matched terms")
        object.__setattr__(self, "matched_terms", tuple(self.matched_terms))


@dataclass(frozen=True)
class FilterReport:
    total: int
    kept: int
    removed: int
    strategy: str
    detail: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.kept + self.removed != self.total:
            raise ValidationError("kept + removed must equal total")


def lexicon_filter(doc, lex: Lexicon, min_hits: int = 1) -> FilterDecision:
    """Relevant iff the comment contains at least min_hits distinct
    domain terms, across every lexicon category."""
    if min_hits < 1:
        raise ArgumentError("min_hits must be at least 1")
    spans = gazetteer_match(doc, lex, categories=_ALL_CATEGORIES)
    terms = sorted({span.matched_term for span in spans})
    label = (
        RelevanceLabel.RELEVANT if len(terms) >= min_hits else RelevanceLabel.IRRELEVANT
    )
    return FilterDecision(label, FilterStrategy.LEXICON, matched_terms=tuple(terms))


def _check_binary_model(model: LinearModel, provider: EmbeddingProvider) -> None:
    if model.provider_id != provider.id():
        raise ConfigError(
            f"model was trained with provider {model.provider_id!r}, "
            f"got {provider.id()!r}"
        )
    if set(model.class_names) != set(RELEVANCE_CLASSES):
        raise ConfigError(
            f"relevance model must have classes {RELEVANCE_CLASSES}, "
            f"got {model.class_names}"
        )


def linear_filter(doc, provider: EmbeddingProvider, model: LinearModel) -> FilterDecision:
    _check_binary_model(model, provider)
    vec = provider.embed([normalize_text(doc.raw_text)])[0]
    idx, probs = predict(model, vec)
    label = RelevanceLabel(model.class_names[idx])
    return FilterDecision(label, FilterStrategy.LINEAR, confidence=float(probs[idx]))


def _parse_relevance_label(raw: str) -> RelevanceLabel:
    lowered = raw.strip().lower()
    for label in RelevanceLabel:
        if label.value.lower() == lowered:
            return label
    raise RemoteError(f"external classifier returned unknown relevance label {raw!r}")


def external_filter(client: ClassifierClient, text: str) -> FilterDecision:
    [(raw, conf)] = client.classify("relevance", [text])
    return FilterDecision(_parse_relevance_label(raw), FilterStrategy.EXTERNAL, conf)


def _decisions_for(
    comments: Sequence[Comment],
    strategy: FilterStrategy,
    *,
    lexicon: Lexicon | None,
    provider: EmbeddingProvider | None,
    model: LinearModel | None,
    client: ClassifierClient | None,
    min_hits: int,
) -> list[FilterDecision]:
    if strategy is FilterStrategy.LEXICON:
        if lexicon is None:
            raise ArgumentError("lexicon strategy needs a lexicon")
        return [
            lexicon_filter(build_document(c.text, c.id), lexicon, min_hits)
            for c in comments
        ]
    if strategy is FilterStrategy.LINEAR:
        if provider is None or model is None:
            raise ArgumentError("linear strategy needs a provider and model")
        return [
            linear_filter(build_document(c.text, c.id), provider, model)
            for c in comments
        ]
    if client is None:
        raise ArgumentError("external strategy needs a client")
    results = client.classify("relevance", [c.text for c in comments])
    return [
        FilterDecision(_parse_relevance_label(raw), FilterStrategy.EXTERNAL, conf)
        for raw, conf in results
    ]


def filter_corpus(
    comments: Sequence[Comment],
    strategy: FilterStrategy,
    *,
    lexicon: Lexicon | None = None,
    provider: EmbeddingProvider | None = None,
    model: LinearModel | None = None,
    client: ClassifierClient | None = None,
    min_hits: int = 1,
    quarantine_path=None,
) -> tuple[list[Comment], FilterReport]:
    """Apply one strategy to every comment; keep the relevant ones in
    input order and append the rest to the quarantine file."""
    decisions = _decisions_for(
        comments,
        strategy,
        lexicon=lexicon,
        provider=provider,
        model=model,
        client=client,
        min_hits=min_hits,
    )
    kept: list[Comment] = []
    removed: list[Comment] = []
    for comment, decision in zip(comments, decisions):
        (kept if decision.label is RelevanceLabel.RELEVANT else removed).append(comment)
    if quarantine_path is not None and removed:
        write_quarantine(quarantine_path, removed, strategy)
    detail: dict = {"strategy": strategy.value}
    if strategy is FilterStrategy.LEXICON:
        detail["min_hits"] = min_hits
    if strategy is FilterStrategy.LINEAR and model is not None:
        detail["provider_id"] = model.provider_id
    if strategy is FilterStrategy.EXTERNAL and client is not None:
        detail["endpoint"] = client.endpoint
    report = FilterReport(
        total=len(comments),
        kept=len(kept),
        removed=len(removed),
        strategy=strategy.value,
        detail=detail,
    )
    return kept, report


def write_quarantine(path, removed: Sequence[Comment], strategy: FilterStrategy) -> None:
    """Append removed comments as JSON lines with a removed_by marker."""
    with open(path, "a", encoding="utf-8") as handle:
        for comment in removed:
            row = comment.to_json_dict()
            row["removed_by"] = strategy.value
            handle.write(json.dumps(row, ensure_ascii=False) + "\n")
