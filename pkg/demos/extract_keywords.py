"""Keyword extraction walkthrough: the English ensemble and the
embedding-only path for code-mixed text, on one provider."""

from finsift.fusion import extract_keywords_en, extract_keywords_si
from finsift.lexicon import combined_lexicon
from finsift.providers import hash_provider
from finsift.textnorm import build_document

provider = hash_provider(dims=64, seed=0)  # deterministic, fully offline
lexicon = combined_lexicon()  # bundled financial vocabulary, en + si

########################################
## English path: three extractors fused
########################################

text = "Customer support delayed my loan approval and the savings account interest rates dropped"
doc = build_document(text, "demo-en")

for kw in extract_keywords_en(doc, provider, lexicon):
    methods = ", ".join(sorted(kw.method_scores))
    flag = "boosted" if kw.boosted else "plain"
    print(f"{kw.final_score:8.4f}  {flag:7s}  {kw.phrase.normalized}  [{methods}]")

# every surviving phrase is backed by the vocabulary or the gazetteer;
# vocabulary hits score double

########################################
## code-mixed path: cosine only
########################################

mixed = "මගේ savings account එක lock වුනා app එකෙන්"
doc_si = build_document(mixed, "demo-si")

print()
for kw in extract_keywords_si(doc_si, provider, lexicon, language="mixed"):
    print(f"{kw.final_score:8.4f}  {kw.phrase.normalized}")

# nothing is discarded here: recall matters more when tooling is thin
