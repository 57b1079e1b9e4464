"""Relevance filtering, aspect classification and a scored report,
end to end on a small inline corpus."""

from finsift.aspects import AspectStrategy, classify_corpus
from finsift.evaluate import confusion, metrics, render_table
from finsift.lexicon import combined_lexicon
from finsift.model import Comment
from finsift.relevance import FilterStrategy, filter_corpus

lexicon = combined_lexicon()

comments = [
    Comment("c0", "demo", "the mobile banking app crashes on every transfer"),
    Comment("c1", "demo", "loan approval took over a month for me"),
    Comment("c2", "demo", "nice video thanks for sharing"),  # off topic
    Comment("c3", "demo", "a phishing scam drained my credit card last week"),
    Comment("c4", "demo", "customer support never answers the phone"),
    Comment("c5", "demo", "first!!!"),  # off topic
]

########################################
## filter: keep banking, quarantine rest
########################################

kept, report = filter_corpus(comments, FilterStrategy.LEXICON, lexicon=lexicon)
print(f"kept {report.kept} removed {report.removed} of {report.total}")
print("quarantined:", [c.id for c in comments if c not in kept])

########################################
## classify the survivors
########################################

predicted = {}
for outcome in classify_corpus(kept, [AspectStrategy.LEXICON], lexicon=lexicon):
    label = outcome.decision.label.value if outcome.decision else "Unclassified"
    predicted[outcome.comment.id] = label
    print(f"{outcome.comment.id}  {label}")

########################################
## score against hand labels
########################################

gold = {
    "c0": "Digital Banking",
    "c1": "Loans & Credit Services",
    "c3": "Trust & Security",
    "c4": "Customer Support",
}
ids = sorted(gold)
cm = confusion([gold[i] for i in ids], [predicted[i] for i in ids])
print()
print(render_table([("aspect", metrics(cm))]))
