"""Each keyword extractor on its own, over the same document, so the
fusion weights in the full pipeline have visible inputs."""

from finsift.embedrank import embedrank, keybert_extract
from finsift.providers import hash_provider
from finsift.stats import rake_extract, tfidf_scores, yake_extract
from finsift.textnorm import build_document

provider = hash_provider(dims=64, seed=0)

text = (
    "The loan approval process at this bank is slow. "
    "Customer support kept transferring my call while the loan approval stalled."
)
doc = build_document(text, "demo")


def show(name, scored, lower_is_better=False):
    order = " (lower = better)" if lower_is_better else ""
    print(f"\n{name}{order}")
    for sp in scored[:5]:
        print(f"  {sp.score:8.4f}  {sp.phrase.normalized}")


########################################
## frequency and co-occurrence families
########################################

show("rake", rake_extract(doc))  # degree/frequency word scores, summed per phrase

yake = yake_extract(doc)  # casing, position, dispersion features per word
show("yake", sorted(yake, key=lambda sp: sp.score), lower_is_better=True)

# tf-idf needs a corpus to weigh rarity against; one extra document will do
other = build_document("nice video with great music", "bg")
weights = tfidf_scores([doc, other])[0]
print("\ntf-idf (per word, this doc)")
for word, w in sorted(weights.items(), key=lambda kv: -kv[1])[:5]:
    print(f"  {w:8.4f}  {word}")

########################################
## embedding families
########################################

show("keybert-style cosine", keybert_extract(doc, provider))
show("embedrank (mmr-diversified)", embedrank(doc, provider))

# the production pipeline min-max normalizes yake, keybert and embedrank
# onto one scale, then fuses 2:3:4 before vocabulary boosting
