"""Curated financial vocabularies, gazetteer matching, and query building.

The gazetteer is the stand-in for trained named-entity recognition: exact
longest-match over normalized token sequences against the entity
categories.  Aspect cue terms live in the same files under the
AspectKeyword category, and vocabulary membership checks span every
category so a cue term still counts as a vocabulary hit.
"""

from __future__ import annotations

import enum
import json
import pathlib
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources

from .errors import (
    ArgumentError,
    LexiconIntegrityError,
    LexiconParseError,
    ValidationError,
)
from .model import LANG_HINTS, AspectLabel, Document
from .textnorm import normalize_text, tokenize


class LexiconCategory(enum.Enum):
    BANK_NAME = "BankName"
    LOAN_TYPE = "LoanType"
    ACCOUNT_TYPE = "AccountType"
    REGULATORY_TERM = "RegulatoryTerm"
    GENERAL_FINANCE = "GeneralFinance"
    ASPECT_KEYWORD = "AspectKeyword"


# the named-entity stand-in matches these by default
ENTITY_CATEGORIES = frozenset(
    {
        LexiconCategory.BANK_NAME,
        LexiconCategory.LOAN_TYPE,
        LexiconCategory.ACCOUNT_TYPE,
        LexiconCategory.REGULATORY_TERM,
    }
)


class QueryMode(enum.Enum):
    ANY_OF = "AnyOf"
    ALL_OF = "AllOf"


@dataclass(frozen=True)
class LexiconEntry:
    term: str
    category: LexiconCategory
    language: str
    aspect: AspectLabel | None = None

    def __post_init__(self):
        if not self.term:
            raise ValidationError("lexicon term must be non-empty")
        if self.language not in LANG_HINTS:
            raise ValidationError(f"unknown language {self.language!r}")
        has_aspect = self.aspect is not None
        if (self.category is LexiconCategory.ASPECT_KEYWORD) != has_aspect:
            raise ValidationError(
                "aspect must be present exactly when category is AspectKeyword"
            )


@dataclass(frozen=True)
class EntitySpan:
    token_range: tuple[int, int]
    category: LexiconCategory
    matched_term: str

    def __post_init__(self):
        start, end = self.token_range
        if not (0 <= start < end):
            raise ValidationError("entity span must be a non-empty forward range")


def _canonical(term: str) -> tuple[str, ...]:
    return tuple(tok.normalized for tok in tokenize(normalize_text(term)))


class Lexicon:
    """Immutable term collection with exact-match and category indexes."""

    def __init__(self, entries: list[LexiconEntry]):
        self._entries = tuple(entries)
        self._by_term: dict[str, tuple[LexiconEntry, ...]] = {}
        self._by_cat_lang: dict[tuple[LexiconCategory, str], list[LexiconEntry]] = {}
        max_tokens = 0
        for entry in self._entries:
            self._by_term[entry.term] = self._by_term.get(entry.term, ()) + (entry,)
            self._by_cat_lang.setdefault(
                (entry.category, entry.language), []
            ).append(entry)
            max_tokens = max(max_tokens, len(entry.term.split(" ")))
        self.max_term_tokens = max_tokens

    @property
    def entries(self) -> tuple[LexiconEntry, ...]:
        return self._entries

    def lookup(self, term: str) -> tuple[LexiconEntry, ...]:
        return self._by_term.get(term, ())

    def entries_for(
        self,
        category: LexiconCategory | None = None,
        language: str | None = None,
    ) -> list[LexiconEntry]:
        if category is not None and language is not None:
            return list(self._by_cat_lang.get((category, language), []))
        return [
            e
            for e in self._entries
            if (category is None or e.category is category)
            and (language is None or e.language == language)
        ]

    def __len__(self) -> int:
        return len(self._entries)


def parse_lexicon(lines: list[str]) -> Lexicon:
    entries: list[LexiconEntry] = []
    first_line: dict[str, tuple[int, LexiconEntry]] = {}
    seen_exact: set[tuple] = set()
    for line_no, raw in enumerate(lines, start=1):
        line = raw.rstrip("\n")
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        fields = line.split("\t")
        if len(fields) not in (3, 4):
            raise LexiconParseError(
                f"expected 3 or 4 tab-separated fields, got {len(fields)}", line_no
            )
        raw_term, raw_category, raw_language = fields[0], fields[1], fields[2]
        try:
            category = LexiconCategory(raw_category)
        except ValueError:
            raise LexiconParseError(f"unknown category {raw_category!r}", line_no)
        if raw_language not in LANG_HINTS:
            raise LexiconParseError(f"unknown language {raw_language!r}", line_no)
        aspect = None
        if category is LexiconCategory.ASPECT_KEYWORD:
            if len(fields) != 4:
                raise LexiconParseError("AspectKeyword needs an aspect column", line_no)
            try:
                aspect = AspectLabel.parse(fields[3])
            except Exception:
                raise LexiconParseError(f"unknown aspect {fields[3]!r}", line_no)
        elif len(fields) == 4 and fields[3].strip():
            raise LexiconParseError(
                f"aspect column only allowed for AspectKeyword", line_no
            )
        term_tokens = _canonical(raw_term)
        if not term_tokens:
            raise LexiconParseError(f"term {raw_term!r} normalizes to nothing", line_no)
        term = " ".join(term_tokens)
        exact_key = (term, category, raw_language, aspect)
        if exact_key in seen_exact:
            continue
        seen_exact.add(exact_key)
        entry = LexiconEntry(term, category, raw_language, aspect)
        if term in first_line:
            prev_no, prev = first_line[term]
            if prev.category is not category or prev.aspect != aspect:
                raise LexiconIntegrityError(
                    f"term {term!r} conflicts: line {prev_no} says "
                    f"{prev.category.value}, line {line_no} says {category.value}"
                )
        else:
            first_line[term] = (line_no, entry)
        entries.append(entry)
    return Lexicon(entries)


def load_lexicon(path: str | pathlib.Path) -> Lexicon:
    text = pathlib.Path(path).read_text(encoding="utf-8")
    return parse_lexicon(text.splitlines())


def serialize_lexicon(lex: Lexicon) -> str:
    rows = []
    for entry in sorted(
        lex.entries, key=lambda e: (e.term, e.category.value, e.language)
    ):
        fields = [entry.term, entry.category.value, entry.language]
        if entry.aspect is not None:
            fields.append(entry.aspect.value)
        rows.append("\t".join(fields))
    return "\n".join(rows) + "\n"


@lru_cache(maxsize=None)
def packaged_lexicon(language: str) -> Lexicon:
    """The starter vocabulary shipped with the package ('en' or 'si')."""
    if language not in ("en", "si"):
        raise ArgumentError(f"no packaged lexicon for {language!r}")
    text = (
        resources.files("finsift").joinpath(f"data/lexicon_{language}.tsv")
    ).read_text(encoding="utf-8")
    return parse_lexicon(text.splitlines())


def combined_lexicon() -> Lexicon:
    """English and Sinhala starter vocabularies merged, for mixed text."""
    return Lexicon(
        list(packaged_lexicon("en").entries) + list(packaged_lexicon("si").entries)
    )


def gazetteer_match(
    doc: Document,
    lex: Lexicon,
    categories: frozenset[LexiconCategory] | None = None,
) -> list[EntitySpan]:
    """Greedy longest-match left-to-right within each sentence; spans never
    overlap.  Defaults to the entity categories."""
    if categories is None:
        categories = ENTITY_CATEGORIES
    spans: list[EntitySpan] = []
    max_len = lex.max_term_tokens
    for start, end in doc.sentences:
        i = start
        while i < end:
            matched = None
            limit = min(max_len, end - i)
            for length in range(limit, 0, -1):
                key = " ".join(
                    doc.tokens[k].normalized for k in range(i, i + length)
                )
                for entry in lex.lookup(key):
                    if entry.category in categories:
                        matched = EntitySpan((i, i + length), entry.category, key)
                        break
                if matched:
                    break
            if matched:
                spans.append(matched)
                i = matched.token_range[1]
            else:
                i += 1
    return spans


def vocab_contains(term: str, lex: Lexicon, language: str = "mixed") -> bool:
    """Exact membership within the language filter; entries tagged 'mixed'
    match any filter and the 'mixed' filter matches any entry."""
    if language not in LANG_HINTS:
        raise ArgumentError(f"unknown language {language!r}")
    for entry in lex.lookup(term):
        if language == "mixed" or entry.language in ("mixed", language):
            return True
    return False


def build_boolean_query(keywords: list[str], mode: QueryMode) -> str:
    if not keywords:
        raise ArgumentError("need at least one keyword")
    joiner = " OR " if mode is QueryMode.ANY_OF else " AND "
    quoted = [f'"{kw}"' if " " in kw else kw for kw in keywords]
    return joiner.join(quoted)


def load_ner_sidecar(path: str | pathlib.Path) -> dict[str, list[EntitySpan]]:
    """Pre-computed entity spans keyed by document id, replacing the
    gazetteer when an external tagger's output is available."""
    result: dict[str, list[EntitySpan]] = {}
    text = pathlib.Path(path).read_text(encoding="utf-8")
    for line_no, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        try:
            record = json.loads(line)
            doc_id = record["doc_id"]
            spans = [
                EntitySpan(
                    (int(s["start"]), int(s["end"])),
                    LexiconCategory(s["category"]),
                    s["term"],
                )
                for s in record["spans"]
            ]
        except (KeyError, TypeError, ValueError, ValidationError) as exc:
            raise LexiconParseError(f"bad entity record: {exc}", line_no)
        result.setdefault(doc_id, []).extend(spans)
    return result
