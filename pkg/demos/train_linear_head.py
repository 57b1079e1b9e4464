"""Training the logistic-regression relevance head from scratch:
embed, fit, sanity-check the gradients, persist, reload, predict."""

import pathlib
import tempfile

from finsift.linear import gradient_check, load_model, predict, save_model, train
from finsift.providers import hash_provider

provider = hash_provider(dims=64, seed=0)

RELEVANT = [
    "loan approval is taking forever at this bank",
    "the mobile banking app logged me out again",
    "my savings account interest rate dropped",
    "card payment failed but money was debited",
]
IRRELEVANT = [
    "nice video thanks for sharing",
    "first comment!!!",
    "who is watching in 2024",
    "love the background music",
]

########################################
## embed and label
########################################

examples = [(provider.embed([t])[0], 0) for t in RELEVANT]
examples += [(provider.embed([t])[0], 1) for t in IRRELEVANT]

########################################
## fit: full-batch gradient descent
########################################

model = train(
    examples,
    n_classes=2,
    class_names=["Relevant", "Irrelevant"],
    provider_id=provider.id(),  # stamped into the model file
)
losses = model.loss_history
print(f"epochs {len(losses)}  loss {losses[0]:.4f} -> {losses[-1]:.4f}")
print("monotone:", all(b <= a + 1e-12 for a, b in zip(losses, losses[1:])))

err = gradient_check(model, examples)
print(f"max gradient relative error {err:.2e}")  # central differences

########################################
## persist and reload
########################################

with tempfile.TemporaryDirectory() as tmp:
    path = pathlib.Path(tmp) / "relevance.json"
    save_model(model, path)
    # reload refuses a provider mismatch, so train/serve cannot drift apart
    back = load_model(path, expect_provider=provider.id())

# hash vectors are deterministic noise: great for reproducible plumbing,
# useless for generalizing to unseen text. Predict on the training set here;
# swap in a remote provider backed by a real model for semantics.
for text in [RELEVANT[0], IRRELEVANT[0]]:
    idx, probs = predict(back, provider.embed([text])[0])
    print(f"{back.class_names[idx]:10s}  p={probs[idx]:.3f}  {text}")
