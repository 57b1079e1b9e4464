"""Unicode normalization, script detection, tokenization and sentence
splitting for English, Sinhala and code-mixed text.

Two normalization profiles matter in practice.  Ingestion cleans comments
with the full default config (symbols stripped).  Document building keeps
sentence terminators in the text so positional extractor features still see
sentence structure; terminators never survive into tokens either way.
"""

from __future__ import annotations

import re
import unicodedata
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
from pathlib import Path

from .errors import ArgumentError, LexiconParseError
from .model import Document, Script, Token

ZWJ = "‍"
ZWNJ = "‌"
SINHALA_START = 0x0D80
SINHALA_END = 0x0DFF
SENTENCE_TERMINATORS = set(".!?।\n")

_URL_RE = re.compile(r"(?:https?://|www\.)\S+", re.IGNORECASE)


@dataclass(frozen=True)
class NormalizationConfig:
    lowercase_latin: bool = True
    strip_urls: bool = True
    strip_symbols: bool = True
    collapse_whitespace: bool = True


#: Profile used when building documents for extraction: identical to the
#: defaults except sentence punctuation is kept for the sentence splitter.
DOCUMENT_NORMALIZATION = NormalizationConfig(strip_symbols=False)


def _is_symbol(ch: str) -> bool:
    """True for characters removed by symbol stripping.

    Letters, combining marks, digits, whitespace and the Sinhala joiners
    survive; everything else (punctuation, emoji, control chars) goes.
    """
    if ch.isspace() or ch in (ZWJ, ZWNJ):
        return False
    cat = unicodedata.category(ch)
    return not (cat.startswith("L") or cat.startswith("M") or cat.startswith("N"))


def normalize_text(text: str, config: NormalizationConfig | None = None) -> str:
    """Canonicalize raw text: NFC compose, optionally strip URLs and
    symbols, lowercase and collapse whitespace.  Idempotent."""
    if config is None:
        config = NormalizationConfig()
    text = unicodedata.normalize("NFC", text)
    if config.strip_urls:
        text = _URL_RE.sub(" ", text)
    if config.strip_symbols:
        text = "".join(" " if _is_symbol(ch) else ch for ch in text)
    if config.lowercase_latin:
        text = text.lower()
    if config.collapse_whitespace:
        text = " ".join(text.split())
    text = unicodedata.normalize("NFC", text)
    return text.strip()


def detect_script(token_surface: str) -> Script:
    """Classify a token's writing system.

    Precedence: Sinhala plus Latin scalars make Mixed; any Sinhala scalar
    (joiners and marks included) makes Sinhala; pure ASCII letters make
    Latin; pure ASCII digits make Digit; the rest is Other.
    """
    if not token_surface:
        raise ArgumentError("cannot detect script of an empty token")
    has_sinhala = any(SINHALA_START <= ord(ch) <= SINHALA_END for ch in token_surface)
    has_latin = any("a" <= ch <= "z" or "A" <= ch <= "Z" for ch in token_surface)
    if has_sinhala and has_latin:
        return Script.MIXED
    if has_sinhala:
        return Script.SINHALA
    if has_latin and all("a" <= ch <= "z" or "A" <= ch <= "Z" for ch in token_surface):
        return Script.LATIN
    if token_surface.isascii() and token_surface.isdigit():
        return Script.DIGIT
    return Script.OTHER


def _is_token_char(ch: str) -> bool:
    if ch in (ZWJ, ZWNJ):
        return True
    cat = unicodedata.category(ch)
    return cat.startswith("L") or cat.startswith("M") or cat.startswith("N")


def tokenize(text: str) -> list[Token]:
    """Split normalized text into tokens on whitespace and punctuation.

    Punctuation-only fragments are dropped.  Zero-width joiners are kept
    inside tokens (Sinhala conjuncts) but trimmed from token edges.
    """
    tokens: list[Token] = []
    i = 0
    n = len(text)
    while i < n:
        if not _is_token_char(text[i]):
            i += 1
            continue
        start = i
        while i < n and _is_token_char(text[i]):
            i += 1
        surface = text[start:i]
        offset = start
        trimmed = surface.strip(ZWJ + ZWNJ)
        if not trimmed:
            continue
        offset += len(surface) - len(surface.lstrip(ZWJ + ZWNJ))
        surface = trimmed
        normalized = surface.lower()
        tokens.append(
            Token(
                surface=surface,
                normalized=normalized,
                script=detect_script(surface),
                char_offset=offset,
                is_stopword=_is_any_stopword(normalized),
            )
        )
    return tokens


def split_sentences(tokens: list[Token], raw_text: str) -> list[tuple[int, int]]:
    """Partition tokens into sentences at terminator characters.

    A boundary falls between two tokens when the raw text separating them
    contains '.', '!', '?', '।' or a newline; the final partial sentence is
    always included.
    """
    if not tokens:
        return []
    ranges: list[tuple[int, int]] = []
    start = 0
    for idx in range(len(tokens) - 1):
        gap_start = tokens[idx].char_offset + len(tokens[idx].surface)
        gap_end = tokens[idx + 1].char_offset
        gap = raw_text[gap_start:gap_end]
        if any(ch in SENTENCE_TERMINATORS for ch in gap):
            ranges.append((start, idx + 1))
            start = idx + 1
    ranges.append((start, len(tokens)))
    return ranges


def build_document(
    text: str,
    source_id: str = "",
    config: NormalizationConfig | None = None,
) -> Document:
    """Normalize, tokenize and sentence-split text into a Document.

    Uses the terminator-preserving profile by default so sentence structure
    survives into the document even though tokens never carry punctuation.
    """
    if config is None:
        config = DOCUMENT_NORMALIZATION
    normalized = normalize_text(text, config)
    tokens = tokenize(normalized)
    sentences = split_sentences(tokens, normalized)
    return Document(
        source_id=source_id,
        raw_text=normalized,
        tokens=tuple(tokens),
        sentences=tuple(sentences),
    )


def load_stoplist(path: str | Path) -> frozenset[str]:
    """Read a stoplist file: UTF-8, one term per line, '#' comments."""
    try:
        raw = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise LexiconParseError(f"cannot read stoplist {path}: {exc}") from exc
    return _parse_stoplist(raw)


def _parse_stoplist(raw: str) -> frozenset[str]:
    terms = set()
    for line in raw.splitlines():
        line = line.split("#", 1)[0].strip()
        if line:
            terms.add(line.lower())
    return frozenset(terms)


@lru_cache(maxsize=None)
def _packaged_stoplist(lang: str) -> frozenset[str]:
    name = {"en": "stopwords_en.txt", "si": "stopwords_si.txt"}[lang]
    raw = resources.files("finsift").joinpath("data", name).read_text(encoding="utf-8")
    return _parse_stoplist(raw)


def is_stopword(normalized: str, lang: str) -> bool:
    """Membership test against the packaged stoplist for ``lang``."""
    if lang not in ("en", "si"):
        raise ArgumentError(f"unknown stopword language: {lang!r}")
    return normalized in _packaged_stoplist(lang)


def _is_any_stopword(normalized: str) -> bool:
    # Code-mixed text interleaves languages mid-sentence, so the token
    # flag consults both lists (romanized Sinhala particles live in the
    # Sinhala list).
    return normalized in _packaged_stoplist("en") or normalized in _packaged_stoplist("si")
