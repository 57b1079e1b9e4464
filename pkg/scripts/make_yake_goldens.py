"""Regenerate the frozen golden score files for the statistical ranker.

Scores come from the hand-written reference in tests/oracles, not from the
library, so the goldens stay independent of the code under test.  Run from
the repository root:

    python3 scripts/make_yake_goldens.py
"""

from __future__ import annotations

import pathlib
import sys

ROOT = pathlib.Path(__file__).resolve().parent.parent
sys.path.insert(0, str(ROOT / "tests"))

from finsift.textnorm import build_document  # noqa: E402

from oracles.yake_reference import reference_yake  # noqa: E402

FIXTURES = ["yake_review", "yake_sinhala", "yake_mixed"]


def main() -> None:
    fixture_dir = ROOT / "tests" / "fixtures"
    for name in FIXTURES:
        text = (fixture_dir / f"{name}.txt").read_text(encoding="utf-8").strip()
        rows = reference_yake(build_document(text))
        out = fixture_dir / f"{name}.golden.tsv"
        with out.open("w", encoding="utf-8") as fh:
            for phrase, score in rows:
                fh.write(f"{phrase}\t{score!r}\n")
        print(f"wrote {out.relative_to(ROOT)} ({len(rows)} phrases)")


if __name__ == "__main__":
    main()
