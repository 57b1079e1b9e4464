"""The remote wire protocol end to end: start the bridge service in
process, then drive it with the core client stack."""

import math

from finsift.client import ClassifierClient
from finsift.providers import remote_provider
from finsift_bridge import ASPECT_LABELS, BridgeConfig, serve_background

answers = {
    "relevance": ["Relevant", "Irrelevant"],  # replayed cyclically
    "aspect": list(ASPECT_LABELS),
}
config = BridgeConfig(model="hash-64", answers=answers)

with serve_background(config) as url:
    print("bridge at", url)

    ########################################
    ## embeddings over HTTP
    ########################################

    provider = remote_provider(url, model="hash-64")
    print("provider id:", provider.id())  # endpoint + model, stamped into saved models

    texts = ["loan approval delays", "card payment failed", "loan approval delays"]
    vectors = provider.embed(texts)
    norms = [math.sqrt(sum(x * x for x in v.values)) for v in vectors]
    print("dims", provider.dims(), "norms", [round(n, 6) for n in norms])
    same = list(vectors[0].values) == list(vectors[2].values)
    print("identical text, identical vector:", same)

    ########################################
    ## classification over HTTP
    ########################################

    client = ClassifierClient(url)
    # labels come back as plain strings; the filter/aspect layers parse them
    for label, confidence in client.classify("relevance", ["about a loan", "nice video"]):
        print(f"relevance: {label}  confidence {confidence}")

    pairs = client.classify("aspect", ["one text per configured label"] * 6)
    print("aspects:", [label for label, _ in pairs])
