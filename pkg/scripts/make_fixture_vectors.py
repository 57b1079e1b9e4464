"""Regenerate the committed fixture vectors for the embedding rankers.

Vectors are built on explicit coordinate axes so every cosine used by the
tests is hand-checkable: each phrase gets cos(phrase, doc) equal to the
`target` column below, with the remainder on a private axis.  Run from the
repository root:

    python3 scripts/make_fixture_vectors.py
"""

from __future__ import annotations

import json
import math
import pathlib

from finsift.candidates import candidate_phrases
from finsift.textnorm import build_document

ROOT = pathlib.Path(__file__).resolve().parent.parent
DIMS = 12

DOC_MMR = "Customer support delayed my loan approval"
DOC_KEYBERT = "The bank offered loan restructuring to affected customers."

# cos(phrase, doc axis); private residual axes keep everything unit length
MMR_TARGETS = {
    "customer support": 0.92,
    "loan approval": 0.90,
    "customer": 0.62,
    "support": 0.64,
    "delayed": 0.55,
    "loan": 0.60,
    "approval": 0.58,
    "support delayed": 0.52,
    "customer support delayed": 0.70,
    "delayed my loan": 0.48,
}
KEYBERT_TARGETS = {
    "loan restructuring": 0.93,
    "restructuring": 0.70,
    "bank": 0.65,
    "offered": 0.40,
    "affected": 0.35,
    "customers": 0.45,
    "bank offered": 0.42,
    "offered loan": 0.50,
    "affected customers": 0.44,
    "bank offered loan": 0.47,
    "offered loan restructuring": 0.60,
    "restructuring to affected": 0.38,
}


def basis(i: int) -> list[float]:
    v = [0.0] * DIMS
    v[i] = 1.0
    return v


def on_axis(doc_axis: int, target: float, residual_axis: int) -> list[float]:
    v = [0.0] * DIMS
    v[doc_axis] = target
    v[residual_axis] = math.sqrt(1.0 - target * target)
    return v


def main() -> None:
    rows: dict[str, list[float]] = {}

    doc1 = build_document(DOC_MMR)
    rows[doc1.raw_text] = basis(0)
    residual = 1
    for cand in candidate_phrases(doc1, 3):
        key = cand.normalized
        if key == "loan":
            continue  # shared with the second document, placed below
        rows[key] = on_axis(0, MMR_TARGETS[key], residual)
        residual += 1

    # "loan" appears in both documents: moderate cosine against each
    loan = [0.0] * DIMS
    loan[0] = 0.60
    loan[4] = 0.50
    loan[5] = math.sqrt(1.0 - 0.60**2 - 0.50**2)
    rows["loan"] = loan

    doc2 = build_document(DOC_KEYBERT)
    rows[doc2.raw_text] = basis(4)
    residual = 6
    for cand in candidate_phrases(doc2, 3):
        key = cand.normalized
        if key == "loan":
            continue
        rows[key] = on_axis(4, KEYBERT_TARGETS[key], residual)
        residual += 1
        if residual >= DIMS:
            residual = 6  # residual reuse only perturbs phrase-phrase cosines

    out = ROOT / "tests" / "fixtures" / "vectors_en.jsonl"
    with out.open("w", encoding="utf-8") as fh:
        for text, vector in rows.items():
            fh.write(json.dumps({"text": text, "vector": vector}) + "\n")
    print(f"wrote {out.relative_to(ROOT)} ({len(rows)} vectors)")


if __name__ == "__main__":
    main()
