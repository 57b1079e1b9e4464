"""Aspect classification: map each relevant comment to one banking aspect.

Strategies: lexicon cue counting, a trained linear head, nearest-centroid,
or an external classifier.  classify_corpus chains them; a later strategy
sees a comment only after every earlier one declined or failed on it, and
a comment that exhausts the chain is kept in the output with an explicit
Unclassified marker instead of a guessed label.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Mapping, Sequence

from .client import ClassifierClient
from .embedrank import cosine
from .errors import (
    ArgumentError,
    ConfigError,
    FinsiftError,
    RemoteError,
    UnclassifiableError,
    ValidationError,
)
from .lexicon import Lexicon, LexiconCategory, gazetteer_match
from .linear import LinearModel, centroid_classify, predict
from .model import AspectLabel, Comment, EmbeddingVector
from .providers import EmbeddingProvider
from .textnorm import build_document, normalize_text

ASPECT_CLASSES = tuple(label.value for label in AspectLabel)
UNCLASSIFIED = "Unclassified"

_ASPECT_ONLY = frozenset({LexiconCategory.ASPECT_KEYWORD})


class AspectStrategy(enum.Enum):
    LEXICON = "lexicon"
    LINEAR = "linear"
    CENTROID = "centroid"
    EXTERNAL = "external"


@dataclass(frozen=True)
class AspectDecision:
    label: AspectLabel
    strategy: AspectStrategy
    confidence: float | None = None
    hit_counts: dict[AspectLabel, int] | None = None

    def __post_init__(self):
        if self.strategy is AspectStrategy.LEXICON:
            if not self.hit_counts or not any(v > 0 for v in self.hit_counts.values()):
                raise ValidationError(
                    "lexicon decisions must carry at least one nonzero hit count"
                )
        elif self.hit_counts is not None:
            raise ValidationError("only lexicon decisions carry hit counts")


@dataclass(frozen=True)
class AspectOutcome:
    """Per-comment result of a strategy chain; decision None = Unclassified."""

    comment: Comment
    decision: AspectDecision | None
    errors: tuple[str, ...] = ()

    @property
    def unclassified(self) -> bool:
        return self.decision is None

    def to_json_dict(self) -> dict:
        return {
            "id": self.comment.id,
            "text": self.comment.text,
            "aspect": self.decision.label.value if self.decision else UNCLASSIFIED,
            "strategy": self.decision.strategy.value if self.decision else None,
            "confidence": self.decision.confidence if self.decision else None,
        }


def lexicon_aspect(doc, lex: Lexicon) -> AspectDecision:
    """Aspect with the most distinct cue-term hits; ties go to the earlier
    aspect in enum order; zero hits raise rather than guess."""
    spans = gazetteer_match(doc, lex, categories=_ASPECT_ONLY)
    terms_per_aspect: dict[AspectLabel, set] = {}
    for span in spans:
        for entry in lex.lookup(span.matched_term):
            if entry.category is LexiconCategory.ASPECT_KEYWORD:
                terms_per_aspect.setdefault(entry.aspect, set()).add(span.matched_term)
    if not terms_per_aspect:
        raise UnclassifiableError("no aspect cue terms matched")
    counts = {aspect: len(terms) for aspect, terms in terms_per_aspect.items()}
    # max keeps the first of equals, so ties resolve to the earlier enum member
    winner = max(AspectLabel, key=lambda a: counts.get(a, 0))
    return AspectDecision(winner, AspectStrategy.LEXICON, hit_counts=counts)


def _check_aspect_model(model: LinearModel, provider: EmbeddingProvider) -> None:
    if model.provider_id != provider.id():
        raise ConfigError(
            f"model was trained with provider {model.provider_id!r}, "
            f"got {provider.id()!r}"
        )
    if tuple(model.class_names) != ASPECT_CLASSES:
        raise ConfigError(
            f"aspect model must have classes {ASPECT_CLASSES}, got {model.class_names}"
        )


def linear_aspect(doc, provider: EmbeddingProvider, model: LinearModel) -> AspectDecision:
    _check_aspect_model(model, provider)
    vec = provider.embed([normalize_text(doc.raw_text)])[0]
    idx, probs = predict(model, vec)
    label = AspectLabel(model.class_names[idx])
    return AspectDecision(label, AspectStrategy.LINEAR, confidence=float(probs[idx]))


def centroid_aspect(
    doc,
    provider: EmbeddingProvider,
    centroids: Mapping[AspectLabel, EmbeddingVector],
) -> AspectDecision:
    """Nearest centroid by cosine; confidence is the winning similarity."""
    if not centroids:
        raise ArgumentError("at least one aspect centroid is required")
    order = [label for label in AspectLabel if label in centroids]
    vec = provider.embed([normalize_text(doc.raw_text)])[0]
    indexed = {i: centroids[label] for i, label in enumerate(order)}
    winner = order[centroid_classify(vec, indexed)]
    sim = cosine(vec, centroids[winner])
    return AspectDecision(winner, AspectStrategy.CENTROID, confidence=sim)


def external_aspect(client: ClassifierClient, text: str) -> AspectDecision:
    [(raw, conf)] = client.classify("aspect", [text])
    return AspectDecision(_parse_aspect_label(raw), AspectStrategy.EXTERNAL, conf)


def _parse_aspect_label(raw: str) -> AspectLabel:
    try:
        return AspectLabel.parse(raw)
    except ValidationError as exc:
        raise RemoteError(
            f"external classifier returned a label outside the taxonomy: {raw!r}"
        ) from exc


def classify_corpus(
    comments: Sequence[Comment],
    chain: Sequence[AspectStrategy],
    *,
    lexicon: Lexicon | None = None,
    provider: EmbeddingProvider | None = None,
    model: LinearModel | None = None,
    centroids: Mapping[AspectLabel, EmbeddingVector] | None = None,
    client: ClassifierClient | None = None,
) -> list[AspectOutcome]:
    """One outcome per comment, in order; strategy errors become per-comment
    records instead of aborting the run."""
    if not chain:
        raise ArgumentError("strategy chain must contain at least one strategy")
    outcomes = []
    for comment in comments:
        doc = build_document(comment.text, comment.id)
        decision = None
        errors: list[str] = []
        for strategy in chain:
            try:
                decision = _apply(
                    strategy, doc, comment,
                    lexicon=lexicon, provider=provider, model=model,
                    centroids=centroids, client=client,
                )
                break
            except UnclassifiableError:
                errors.append(f"{strategy.value}: no aspect evidence")
            except FinsiftError as exc:
                errors.append(f"{strategy.value}: {exc}")
        outcomes.append(AspectOutcome(comment, decision, tuple(errors)))
    return outcomes


def _apply(
    strategy: AspectStrategy,
    doc,
    comment: Comment,
    *,
    lexicon,
    provider,
    model,
    centroids,
    client,
) -> AspectDecision:
    if strategy is AspectStrategy.LEXICON:
        if lexicon is None:
            raise ArgumentError("lexicon strategy needs a lexicon")
        return lexicon_aspect(doc, lexicon)
    if strategy is AspectStrategy.LINEAR:
        if provider is None or model is None:
            raise ArgumentError("linear strategy needs a provider and model")
        return linear_aspect(doc, provider, model)
    if strategy is AspectStrategy.CENTROID:
        if provider is None or centroids is None:
            raise ArgumentError("centroid strategy needs a provider and centroids")
        return centroid_aspect(doc, provider, centroids)
    if client is None:
        raise ArgumentError("external strategy needs a client")
    return external_aspect(client, comment.text)
