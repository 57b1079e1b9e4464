"""Generate the large comment fixtures.

Outputs:
  tests/fixtures/ingest_pages100.jsonl  10 pages x 10 comments, 17 planted
                                        duplicates (83 unique normalized texts)
  tests/fixtures/comments100.jsonl      100-comment mixed-language corpus for
                                        pipeline runs (already cleaned)
  tests/fixtures/english50.jsonl        50 English banking comments for the
                                        keyword discard checks

Deterministic: fixed seed, no library imports, so the fixture is input data
with hand-auditable counts rather than generated expectations.
"""

import json
import random
import re
import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parents[1]
FIXTURES = ROOT / "tests" / "fixtures"

EN_BANK = [
    "The {noun} at {bank} took {n} weeks to process",
    "My {noun} application was rejected without a reason",
    "{bank} customer care never picks up the phone",
    "The mobile app logs me out during every {noun} payment",
    "Interest on the {acct} fell again this quarter",
    "Waited at the {bank} branch for two hours over a {noun}",
    "The online portal shows the wrong balance for my {acct}",
    "Got charged twice for one card payment at {bank}",
    "OTP for the transfer never arrives on time",
    "They froze my {acct} over a small paperwork issue",
    "Repayment schedule for the {noun} changed without notice",
    "The {bank} helpline kept me on hold forever",
]
SI_BANK = [
    "{sbank} එකෙන් ණය අයදුම්පත අනුමත කරන්න සති {n}ක් ගියා",
    "මගේ ගිණුමේ ශේෂය වැරදියට පෙන්වනවා",
    "ශාඛාවේ සේවය හරිම හෙමින් කස්මර් සපෝට් නැහැ",
    "ණය වාරිකය ගෙවීම ගැන කිසි දැනුම්දීමක් නැහැ",
    "{sbank} app එක නිතරම crash වෙනවා",
    "මුදල් මාරු කිරීම දවස් {n}ක් පමා වුණා",
    "පොලී අනුපාතය ගැන කවුරුත් පැහැදිලි කරන්නේ නැහැ",
    "කාඩ් එක block කළා කියලා කිසි පණිවිඩයක් ආවේ නැහැ",
]
MIX_BANK = [
    "Mata {mnoun} eka approve una kiyala kiwwa, thama salli nane",
    "Loan eka gana ahanna branch ekata giyama kawruwath danne na",
    "Payment eka process una kiyala inform unaa habai money eka debit wela na",
    "App eken transfer karanna giyama OTP eka enne na",
    "Account eke balance eka weradi widihata pennanawa",
    "{mnoun} interest eka wedi una kiyala email ekak awa",
    "Card eka decline una supermarket eke, embarrassing ekak",
    "Branch eke staff la {mnoun} form eka fill karanna help kale na",
    "{mnoun} installment eka dawas {n}kin debit karala",
    "Online eken account eka open karanna website eka load wenne na",
    "Statement eka illuwama dawas {n}k balan inna kiwwa",
    "ATM eken salli ganna giyama card eka block wela",
    "Hotline ekata call kalama minutes {n}k hold karala cut kara",
    "Fixed deposit eka renew karanna branch ekatama enna kiyanawa",
    "Cheque eka clear wenna dawas {n}k giya ban",
    "Mage complaint ekata thama reply ekak nane",
]
SPAM = [
    "first!!!",
    "nice video bro",
    "subscribe to my channel for giveaways",
    "who is watching in {year}",
    "love this song",
    "check my profile for free gifts",
    "lol",
    "great weather today",
    "come to my stream tonight",
    "best edit ever",
    "part {n} please",
    "anyone here after the match",
    "this deserves {n} million views",
    "my cousin was in this video",
    "the background music is fire",
    "watching this at {n} am again",
    "legend says the intro is still loading",
    "notification squad where are you",
]

BANKS = ["HNB", "Sampath Bank", "BOC", "Commercial Bank", "Peoples Bank"]
SBANKS = ["සම්පත් බැංකුව", "මහජන බැංකුව", "ලංකා බැංකුව"]
NOUNS = ["loan", "leasing", "mortgage", "overdraft", "remittance"]
MNOUNS = ["loan", "leasing", "fixed deposit"]
ACCTS = ["savings account", "current account", "fixed deposit"]


def norm(text: str) -> str:
    # mirror of the cleaning relevant to duplicate detection: lowercase Latin,
    # collapse whitespace (generator-local, used only to keep texts distinct)
    return re.sub(r"\s+", " ", text.lower()).strip()


def fill(rng, template: str) -> str:
    return template.format(
        bank=rng.choice(BANKS),
        sbank=rng.choice(SBANKS),
        noun=rng.choice(NOUNS),
        mnoun=rng.choice(MNOUNS),
        acct=rng.choice(ACCTS),
        n=rng.randint(2, 9),
        year=rng.randint(2022, 2025),
    )


def distinct_texts(rng, templates, count, taken):
    out = []
    attempts = 0
    while len(out) < count:
        attempts += 1
        if attempts > 20000:
            raise RuntimeError(f"template pool too small for {count} distinct texts")
        text = fill(rng, rng.choice(templates))
        if norm(text) not in taken:
            taken.add(norm(text))
            out.append(text)
    return out


def make_ingest_pages():
    rng = random.Random(20240817)
    taken: set = set()
    uniques = distinct_texts(rng, EN_BANK + MIX_BANK, 63, taken)
    uniques += distinct_texts(rng, SI_BANK, 12, taken)
    uniques += distinct_texts(rng, SPAM, 8, taken)
    assert len(uniques) == 83
    dups = [rng.choice(uniques) for _ in range(17)]
    texts = uniques + dups
    rng.shuffle(texts)
    assert len(texts) == 100
    assert len({norm(t) for t in texts}) == 83
    lines = []
    for page in range(10):
        chunk = texts[page * 10 : page * 10 + 10]
        comments = [
            {"id": f"y{page * 10 + i:03d}", "source": "fixture", "text": t}
            for i, t in enumerate(chunk)
        ]
        lines.append(json.dumps({"comments": comments}, ensure_ascii=False))
    (FIXTURES / "ingest_pages100.jsonl").write_text(
        "\n".join(lines) + "\n", encoding="utf-8"
    )


def make_pipeline_corpus():
    rng = random.Random(9251)
    taken: set = set()
    rows = []
    spec = [
        (EN_BANK, "en", 40),
        (SI_BANK, "si", 20),
        (MIX_BANK, "mixed", 22),
        (SPAM, None, 18),
    ]
    texts = []
    for templates, hint, count in spec:
        for text in distinct_texts(rng, templates, count, taken):
            texts.append((text, hint))
    rng.shuffle(texts)
    assert len(texts) == 100
    for i, (text, hint) in enumerate(texts):
        row = {"id": f"c{i:03d}", "source": "fixture", "text": text}
        if hint:
            row["lang_hint"] = hint
        rows.append(json.dumps(row, ensure_ascii=False))
    (FIXTURES / "comments100.jsonl").write_text("\n".join(rows) + "\n", encoding="utf-8")


def make_english50():
    rng = random.Random(3177)
    taken: set = set()
    rows = []
    for i, text in enumerate(distinct_texts(rng, EN_BANK, 50, taken)):
        row = {"id": f"e{i:02d}", "source": "fixture", "text": text, "lang_hint": "en"}
        rows.append(json.dumps(row, ensure_ascii=False))
    (FIXTURES / "english50.jsonl").write_text("\n".join(rows) + "\n", encoding="utf-8")


if __name__ == "__main__":
    make_ingest_pages()
    make_pipeline_corpus()
    make_english50()
    print("wrote ingest_pages100.jsonl and comments100.jsonl")
