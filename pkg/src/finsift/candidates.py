"""Candidate phrase generation shared by every extractor.

Keeping one generator means the statistical and embedding rankers score the
same phrase universe, which is what lets their scores be fused per phrase
later on.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from .errors import ValidationError
from .model import CandidatePhrase, Document, Script, Token

LETTER_SCRIPTS = frozenset({Script.LATIN, Script.SINHALA, Script.MIXED})


class Polarity(enum.Enum):
    LOWER_IS_BETTER = "LowerIsBetter"
    HIGHER_IS_BETTER = "HigherIsBetter"


@dataclass(frozen=True)
class ScoredPhrase:
    phrase: CandidatePhrase
    score: float
    polarity: Polarity

    def __post_init__(self):
        if not math.isfinite(self.score):
            raise ValidationError("phrase score must be finite")


def is_content_token(token: Token) -> bool:
    """A token that may sit at a candidate boundary: a letter token that is
    not a stopword."""
    return token.script in LETTER_SCRIPTS and not token.is_stopword


def candidate_phrases(doc: Document, max_ngram: int) -> list[CandidatePhrase]:
    """All 1..max_ngram token windows within a sentence whose boundary
    tokens are content tokens, de-duplicated on normalized surface keeping
    the first occurrence (leftmost start, shortest first)."""
    seen: set[str] = set()
    out: list[CandidatePhrase] = []
    tokens = doc.tokens
    for start, end in doc.sentences:
        for i in range(start, end):
            if not is_content_token(tokens[i]):
                continue
            for j in range(i + 1, min(i + max_ngram, end) + 1):
                if not is_content_token(tokens[j - 1]):
                    continue
                normalized = " ".join(t.normalized for t in tokens[i:j])
                if normalized in seen:
                    continue
                seen.add(normalized)
                first, last = tokens[i], tokens[j - 1]
                surface = doc.raw_text[
                    first.char_offset : last.char_offset + len(last.surface)
                ]
                out.append(CandidatePhrase((i, j), surface, normalized))
    out.sort(key=lambda c: (c.token_range[0], c.length))
    return out


def phrase_occurrences(doc: Document, normalized_words: tuple[str, ...]) -> int:
    """Count occurrences of a normalized token sequence within sentences."""
    count = 0
    k = len(normalized_words)
    for start, end in doc.sentences:
        for i in range(start, end - k + 1):
            if all(doc.tokens[i + m].normalized == normalized_words[m] for m in range(k)):
                count += 1
    return count
