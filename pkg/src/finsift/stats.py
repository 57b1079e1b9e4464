"""Statistical keyword extractors: corpus TF-IDF, per-document RAKE, and a
multi-feature statistical ranker in the YAKE family.

The YAKE-style ranker scores each word with five local features and each
candidate phrase with

    score(kw) = prod(S(w)) / (tf(kw) * (1 + sum(S(w))))

where lower is better.  Word features:

  case        max(upper-initial, acronym occurrences) / (1 + ln tf);
              fixed at 1.0 for caseless scripts
  position    ln(ln(3 + median sentence index)), sentences 0-based
  frequency   tf / (mean + stddev of content-word tfs)
  relatedness 1 + (DL + DR) * tf / max_tf, DL/DR the distinct-to-total
              ratio of left/right window co-occurrences
  dispersion  fraction of sentences containing the word

combined as  S(w) = relatedness * position /
                    (case + frequency/relatedness + dispersion/relatedness)
"""

from __future__ import annotations

import math
import statistics
from collections import Counter, defaultdict
from dataclasses import dataclass
from difflib import SequenceMatcher

from .candidates import (
    Polarity,
    ScoredPhrase,
    candidate_phrases,
    is_content_token,
    phrase_occurrences,
)
from .errors import ArgumentError, ValidationError
from .model import CandidatePhrase, Document, Script


@dataclass(frozen=True)
class YakeParams:
    max_ngram: int = 3
    window: int = 2
    top_n: int = 20
    dedup_threshold: float = 0.9

    def __post_init__(self):
        if self.max_ngram < 1 or self.window < 1 or self.top_n < 1:
            raise ValidationError("max_ngram, window and top_n must all be >= 1")
        if not (0.0 <= self.dedup_threshold <= 1.0):
            raise ValidationError("dedup_threshold must lie in [0, 1]")


def tfidf_scores(corpus: list[Document]) -> list[dict[str, float]]:
    """Per-document scores tf(t, d) * ln((1 + N) / (1 + df(t))) over
    normalized content unigrams (stopwords excluded)."""
    if not corpus:
        raise ArgumentError("tfidf needs a non-empty corpus")
    doc_terms: list[Counter] = []
    df: Counter = Counter()
    for doc in corpus:
        counts = Counter(
            tok.normalized for tok in doc.tokens if is_content_token(tok)
        )
        doc_terms.append(counts)
        df.update(counts.keys())
    n = len(corpus)
    results = []
    for counts in doc_terms:
        results.append(
            {
                term: tf * math.log((1 + n) / (1 + df[term]))
                for term, tf in counts.items()
            }
        )
    return results


def rake_extract(doc: Document) -> list[ScoredPhrase]:
    """Score maximal stopword-free token runs by summed word degree/frequency
    ratios over the run co-occurrence graph."""
    runs: list[tuple[int, int]] = []
    for start, end in doc.sentences:
        i = start
        while i < end:
            if not is_content_token(doc.tokens[i]):
                i += 1
                continue
            j = i
            while j < end and is_content_token(doc.tokens[j]):
                j += 1
            runs.append((i, j))
            i = j
    freq: Counter = Counter()
    degree: Counter = Counter()
    for i, j in runs:
        length = j - i
        for k in range(i, j):
            word = doc.tokens[k].normalized
            freq[word] += 1
            degree[word] += length
    seen: set[str] = set()
    out: list[ScoredPhrase] = []
    for i, j in runs:
        words = [doc.tokens[k].normalized for k in range(i, j)]
        normalized = " ".join(words)
        if normalized in seen:
            continue
        seen.add(normalized)
        first, last = doc.tokens[i], doc.tokens[j - 1]
        surface = doc.raw_text[first.char_offset : last.char_offset + len(last.surface)]
        score = sum(degree[w] / freq[w] for w in words)
        out.append(
            ScoredPhrase(
                phrase=CandidatePhrase((i, j), surface, normalized),
                score=score,
                polarity=Polarity.HIGHER_IS_BETTER,
            )
        )
    out.sort(key=lambda sp: (-sp.score, sp.phrase.token_range[0]))
    return out


def _word_scores(doc: Document, window: int) -> dict[str, float]:
    """The per-word statistical feature score S(w); lower is better."""
    tf: Counter = Counter()
    tf_upper: Counter = Counter()
    tf_acronym: Counter = Counter()
    sentences_with: dict[str, set[int]] = defaultdict(set)
    left: dict[str, list[str]] = defaultdict(list)
    right: dict[str, list[str]] = defaultdict(list)
    script: dict[str, Script] = {}
    content: set[str] = set()

    for s_idx, (start, end) in enumerate(doc.sentences):
        terms = [doc.tokens[k].normalized for k in range(start, end)]
        for pos, k in enumerate(range(start, end)):
            tok = doc.tokens[k]
            term = tok.normalized
            tf[term] += 1
            sentences_with[term].add(s_idx)
            script.setdefault(term, tok.script)
            if is_content_token(tok):
                content.add(term)
            surface = tok.surface
            if len(surface) >= 2 and surface.isalpha() and surface.isupper():
                tf_acronym[term] += 1
            elif pos > 0 and surface[:1].isupper():
                tf_upper[term] += 1
            left[term].extend(terms[max(0, pos - window) : pos])
            right[term].extend(terms[pos + 1 : pos + 1 + window])

    if not content:
        return {}
    content_tfs = [tf[t] for t in content]
    spread_norm = statistics.mean(content_tfs) + statistics.pstdev(content_tfs)
    max_tf = max(tf.values())
    n_sentences = len(doc.sentences)

    scores: dict[str, float] = {}
    for term in tf:
        if script[term] is Script.LATIN:
            w_case = max(tf_acronym[term], tf_upper[term]) / (1.0 + math.log(tf[term]))
        else:
            w_case = 1.0
        w_pos = math.log(math.log(3.0 + statistics.median(sorted(sentences_with[term]))))
        w_freq = tf[term] / spread_norm
        rel_l = len(set(left[term])) / len(left[term]) if left[term] else 0.0
        rel_r = len(set(right[term])) / len(right[term]) if right[term] else 0.0
        w_rel = 1.0 + (rel_l + rel_r) * (tf[term] / max_tf)
        w_spread = len(sentences_with[term]) / n_sentences
        scores[term] = (w_rel * w_pos) / (w_case + w_freq / w_rel + w_spread / w_rel)
    return scores


def yake_extract(doc: Document, params: YakeParams | None = None) -> list[ScoredPhrase]:
    """Rank candidate phrases with the multi-feature statistical scorer;
    lower scores are better and near-duplicates keep the better phrase."""
    if params is None:
        params = YakeParams()
    word_scores = _word_scores(doc, params.window)
    if not word_scores:
        return []
    scored: list[ScoredPhrase] = []
    for cand in candidate_phrases(doc, params.max_ngram):
        words = tuple(
            doc.tokens[k].normalized for k in range(*cand.token_range)
        )
        prod = 1.0
        total = 0.0
        for w in words:
            prod *= word_scores[w]
            total += word_scores[w]
        tf_kw = phrase_occurrences(doc, words)
        score = prod / (tf_kw * (1.0 + total))
        scored.append(ScoredPhrase(cand, score, Polarity.LOWER_IS_BETTER))
    scored.sort(key=lambda sp: (sp.score, sp.phrase.token_range[0], sp.phrase.normalized))
    kept: list[ScoredPhrase] = []
    for sp in scored:
        is_dup = any(
            SequenceMatcher(None, sp.phrase.normalized, k.phrase.normalized).ratio()
            > params.dedup_threshold
            for k in kept
        )
        if not is_dup:
            kept.append(sp)
    return kept[: params.top_n]
