"""Domain types shared by every pipeline stage.

All types are immutable after construction and validate their invariants in
``__post_init__``, so a constructed value is always well-formed and safe to
share between threads.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from .errors import ValidationError


class Script(enum.Enum):
    """Writing system of a single token."""

    SINHALA = "Sinhala"
    LATIN = "Latin"
    DIGIT = "Digit"
    OTHER = "Other"
    MIXED = "Mixed"


class RelevanceLabel(enum.Enum):
    RELEVANT = "Relevant"
    IRRELEVANT = "Irrelevant"


class AspectLabel(enum.Enum):
    """Closed six-way taxonomy of banking service areas.

    The enum order is load-bearing: lexicon ties are broken by it, and the
    serialized names below are the canonical wire/report strings.
    """

    CUSTOMER_SUPPORT = "Customer Support"
    TRANSACTIONS = "Transactions"
    PAYMENTS_AND_ACCOUNTS = "Payments & Accounts"
    LOANS_AND_CREDIT_SERVICES = "Loans & Credit Services"
    DIGITAL_BANKING = "Digital Banking"
    TRUST_AND_SECURITY = "Trust & Security"

    @classmethod
    def parse(cls, text: str) -> "AspectLabel":
        """Parse a canonical aspect name; anything else is rejected."""
        for label in cls:
            if label.value == text:
                return label
        raise ValidationError(f"unknown aspect label: {text!r}")

    @property
    def index(self) -> int:
        return list(AspectLabel).index(self)


LANG_HINTS = ("en", "si", "mixed")


@dataclass(frozen=True)
class Comment:
    """One user-generated text item with source metadata.

    ``text`` may still be raw at construction time; ingestion guarantees it
    is non-empty after cleaning before a comment leaves that stage.
    """

    id: str
    source: str
    text: str
    timestamp: str | None = None
    lang_hint: str | None = None

    def __post_init__(self):
        if not self.id:
            raise ValidationError("comment id must be non-empty")
        if self.lang_hint is not None and self.lang_hint not in LANG_HINTS:
            raise ValidationError(f"lang_hint must be one of {LANG_HINTS}")

    def to_json_dict(self) -> dict:
        return {
            "id": self.id,
            "source": self.source,
            "text": self.text,
            "timestamp": self.timestamp,
            "lang_hint": self.lang_hint,
        }

    @classmethod
    def from_json_dict(cls, obj: dict) -> "Comment":
        return cls(
            id=str(obj.get("id", "")),
            source=str(obj.get("source", "")),
            text=str(obj.get("text", "")),
            timestamp=obj.get("timestamp"),
            lang_hint=obj.get("lang_hint"),
        )


@dataclass(frozen=True)
class Token:
    """One token of a normalized text.

    ``char_offset`` indexes Unicode scalar values of the owning document's
    ``raw_text``, never bytes, so Sinhala and Latin spans use the same math.
    """

    surface: str
    normalized: str
    script: Script
    char_offset: int
    is_stopword: bool

    def __post_init__(self):
        if not self.surface:
            raise ValidationError("token surface must be non-empty")
        if not self.normalized:
            raise ValidationError("token normalized form must be non-empty")
        if self.char_offset < 0:
            raise ValidationError("token offset must be non-negative")


@dataclass(frozen=True)
class Document:
    """Normalized, tokenized and sentence-split text.

    ``sentences`` is a list of half-open ``[start, end)`` token-index ranges
    that partitions ``tokens`` in order.
    """

    source_id: str
    raw_text: str
    tokens: tuple[Token, ...]
    sentences: tuple[tuple[int, int], ...]

    def __post_init__(self):
        object.__setattr__(self, "tokens", tuple(self.tokens))
        object.__setattr__(self, "sentences", tuple(tuple(s) for s in self.sentences))
        expected_start = 0
        for start, end in self.sentences:
            if start != expected_start or end <= start:
                raise ValidationError("sentence ranges must partition tokens in order")
            expected_start = end
        if self.sentences and expected_start != len(self.tokens):
            raise ValidationError("sentence ranges must cover all tokens")
        if not self.sentences and self.tokens:
            raise ValidationError("non-empty token list requires sentence ranges")
        n = len(self.raw_text)
        for tok in self.tokens:
            if tok.char_offset + len(tok.surface) > n:
                raise ValidationError("token offset outside raw_text bounds")

    def sentence_tokens(self, idx: int) -> tuple[Token, ...]:
        start, end = self.sentences[idx]
        return self.tokens[start:end]


@dataclass(frozen=True)
class CandidatePhrase:
    """A contiguous token n-gram eligible for keyword scoring."""

    token_range: tuple[int, int]
    surface: str
    normalized: str

    def __post_init__(self):
        object.__setattr__(self, "token_range", tuple(self.token_range))
        start, end = self.token_range
        if end <= start:
            raise ValidationError("candidate phrase must span at least one token")
        if not self.normalized:
            raise ValidationError("candidate phrase normalized form must be non-empty")

    @property
    def length(self) -> int:
        return self.token_range[1] - self.token_range[0]


@dataclass(frozen=True)
class MethodScore:
    """Raw and [0, 1]-normalized score one extraction method gave a phrase."""

    raw: float
    normalized: float

    def __post_init__(self):
        if not (0.0 <= self.normalized <= 1.0):
            raise ValidationError("normalized method score must lie in [0, 1]")


@dataclass(frozen=True)
class KeywordResult:
    """A candidate phrase with fused score, validation flags and boost state.

    ``final_score`` is derived, not supplied: it equals ``fused_score``
    times ``boost_factor`` when ``boosted`` and ``fused_score`` otherwise,
    so the relationship holds bit-for-bit by construction.
    """

    phrase: CandidatePhrase
    method_scores: dict[str, MethodScore]
    fused_score: float
    ner_validated: bool
    vocab_matched: bool
    boosted: bool
    boost_factor: float = 2.0
    final_score: float = field(init=False)

    def __post_init__(self):
        if self.fused_score < 0:
            raise ValidationError("fused score must be non-negative")
        if self.boost_factor <= 0:
            raise ValidationError("boost factor must be positive")
        if self.boosted and not self.vocab_matched:
            raise ValidationError("a boosted keyword must be vocabulary-matched")
        final = self.fused_score * self.boost_factor if self.boosted else self.fused_score
        object.__setattr__(self, "final_score", final)
        object.__setattr__(self, "method_scores", dict(self.method_scores))


@dataclass(frozen=True, eq=False)
class EmbeddingVector:
    """A fixed-length vector of finite reals."""

    values: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.values, dtype=np.float64)
        if arr.ndim != 1 or arr.size == 0:
            raise ValidationError("embedding must be a non-empty 1-d vector")
        if not np.all(np.isfinite(arr)):
            raise ValidationError("embedding values must all be finite")
        arr = arr.copy()
        arr.flags.writeable = False
        object.__setattr__(self, "values", arr)

    @property
    def dims(self) -> int:
        return int(self.values.shape[0])
