"""Metrics, confusion matrices, keyword-set evaluation, and report tables.

All rates live in [0, 1]; rendering converts to percentages. Macro
averaging is used throughout and stamped on every rendered report so
numbers are never compared across averaging conventions by accident.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .errors import ArgumentError, ValidationError
from .model import KeywordResult

AVERAGING = "macro"


@dataclass(frozen=True, eq=False)
class ConfusionMatrix:
    class_names: tuple[str, ...]
    counts: np.ndarray  # [gold, predicted]

    def __post_init__(self):
        arr = np.asarray(self.counts, dtype=np.int64)
        k = len(self.class_names)
        if arr.shape != (k, k):
            raise ValidationError(
                f"counts must be {k}x{k} for {k} classes, got {arr.shape}"
            )
        if np.any(arr < 0):
            raise ValidationError("confusion counts must be non-negative")
        arr = arr.copy()
        arr.flags.writeable = False
        object.__setattr__(self, "counts", arr)
        object.__setattr__(self, "class_names", tuple(self.class_names))

    @property
    def n(self) -> int:
        return int(self.counts.sum())


@dataclass(frozen=True)
class MetricReport:
    accuracy: float
    macro_precision: float
    macro_recall: float
    macro_f1: float
    per_class: dict[str, tuple[float, float, float]]
    n: int
    averaging: str = AVERAGING
    docs_skipped: int = 0

    def __post_init__(self):
        rates = [self.accuracy, self.macro_precision, self.macro_recall, self.macro_f1]
        rates += [v for triple in self.per_class.values() for v in triple]
        for value in rates:
            if not 0.0 <= value <= 1.0:
                raise ValidationError(f"metric {value} outside [0, 1]")


def confusion(
    gold: Sequence, pred: Sequence, class_names: Sequence[str] | None = None
) -> ConfusionMatrix:
    """Tally (gold, predicted) label pairs into a square matrix."""
    if len(gold) != len(pred):
        raise ArgumentError(f"length mismatch: {len(gold)} gold vs {len(pred)} pred")
    gold = [_label_str(g) for g in gold]
    pred = [_label_str(p) for p in pred]
    if class_names is None:
        class_names = sorted(set(gold) | set(pred))
    index = {name: i for i, name in enumerate(class_names)}
    counts = np.zeros((len(class_names), len(class_names)), dtype=np.int64)
    for g, p in zip(gold, pred):
        if g not in index or p not in index:
            unknown = g if g not in index else p
            raise ArgumentError(f"label {unknown!r} not in class set {class_names}")
        counts[index[g], index[p]] += 1
    return ConfusionMatrix(tuple(class_names), counts)


def _label_str(label) -> str:
    value = getattr(label, "value", label)
    if not isinstance(value, str):
        raise ArgumentError(f"labels must be strings or string-valued enums: {label!r}")
    return value


def _f1(p: float, r: float) -> float:
    return 0.0 if p + r == 0 else 2 * p * r / (p + r)


def metrics(cm: ConfusionMatrix) -> MetricReport:
    """Accuracy plus macro precision/recall/F1 with the 0/0 -> 0 convention."""
    if cm.n == 0:
        raise ArgumentError("cannot compute metrics over zero samples")
    counts = cm.counts
    per_class: dict[str, tuple[float, float, float]] = {}
    for i, name in enumerate(cm.class_names):
        tp = int(counts[i, i])
        fp = int(counts[:, i].sum()) - tp
        fn = int(counts[i, :].sum()) - tp
        p = tp / (tp + fp) if tp + fp else 0.0
        r = tp / (tp + fn) if tp + fn else 0.0
        per_class[name] = (p, r, _f1(p, r))
    k = len(cm.class_names)
    return MetricReport(
        accuracy=float(np.trace(counts)) / cm.n,
        macro_precision=sum(t[0] for t in per_class.values()) / k,
        macro_recall=sum(t[1] for t in per_class.values()) / k,
        macro_f1=sum(t[2] for t in per_class.values()) / k,
        per_class=per_class,
        n=cm.n,
    )


def keyword_eval(
    gold: Mapping[str, set], predicted: Mapping[str, Sequence], k: int
) -> MetricReport:
    """Micro-averaged exact-match precision@k / recall over documents.

    Accuracy is reported as precision@k.  Documents with empty gold sets
    are skipped and counted in docs_skipped.
    """
    if k < 1:
        raise ArgumentError("k must be at least 1")
    hits = 0
    predicted_total = 0
    gold_total = 0
    evaluated = 0
    skipped = 0
    for doc_id, gold_set in gold.items():
        gold_set = set(gold_set)
        if not gold_set:
            skipped += 1
            continue
        evaluated += 1
        top = [_phrase_str(p) for p in list(predicted.get(doc_id, []))[:k]]
        hits += len(set(top) & gold_set)
        predicted_total += len(top)
        gold_total += len(gold_set)
    precision = hits / predicted_total if predicted_total else 0.0
    recall = hits / gold_total if gold_total else 0.0
    return MetricReport(
        accuracy=precision,
        macro_precision=precision,
        macro_recall=recall,
        macro_f1=_f1(precision, recall),
        per_class={},
        n=evaluated,
        docs_skipped=skipped,
    )


def _phrase_str(item) -> str:
    if isinstance(item, KeywordResult):
        return item.phrase.normalized
    return str(item)


_COLUMNS = ("accuracy", "precision", "recall", "f1")


def _row_cells(report) -> dict[str, float | None]:
    if isinstance(report, MetricReport):
        return {
            "accuracy": report.accuracy,
            "precision": report.macro_precision,
            "recall": report.macro_recall,
            "f1": report.macro_f1,
        }
    cells: dict[str, float | None] = {name: None for name in _COLUMNS}
    for name, value in dict(report).items():
        if name not in cells:
            raise ArgumentError(f"unknown metric column {name!r}")
        if value is not None and not 0.0 <= value <= 1.0:
            raise ArgumentError(f"metric {name}={value} outside [0, 1]")
        cells[name] = value
    return cells


def _fmt(value: float | None) -> str:
    return "-" if value is None else f"{100.0 * value:.1f}"


def render_table(rows: Sequence[tuple[str, object]]) -> str:
    """Aligned text table in input order; percentages to 1 decimal."""
    if not rows:
        raise ArgumentError("at least one row is required")
    header = ["Method", "Accuracy (%)", "Precision (%)", "Recall (%)", "F1-score (%)"]
    body = []
    for name, report in rows:
        cells = _row_cells(report)
        body.append([name] + [_fmt(cells[c]) for c in _COLUMNS])
    widths = [
        max(len(header[i]), *(len(row[i]) for row in body)) for i in range(len(header))
    ]
    lines = [f"averaging: {AVERAGING}"]
    lines.append("  ".join(h.ljust(widths[i]) for i, h in enumerate(header)))
    lines.append("  ".join("-" * w for w in widths))
    for row in body:
        lines.append("  ".join(cell.ljust(widths[i]) for i, cell in enumerate(row)))
    return "\n".join(lines) + "\n"


def render_csv(rows: Sequence[tuple[str, object]]) -> str:
    """Machine-readable mirror of render_table."""
    if not rows:
        raise ArgumentError("at least one row is required")
    lines = ["name,accuracy,precision,recall,f1"]
    for name, report in rows:
        cells = _row_cells(report)
        lines.append(",".join([name] + [_fmt(cells[c]) for c in _COLUMNS]))
    return "\n".join(lines) + "\n"


def stratified_split(
    labels: Sequence, test_fraction: float = 0.2, seed: int = 42
) -> tuple[list[int], list[int]]:
    """Seeded per-class index split; classes with one member stay in train."""
    if not 0.0 < test_fraction < 1.0:
        raise ArgumentError("test_fraction must be in (0, 1)")
    if not labels:
        raise ArgumentError("labels must be non-empty")
    by_class: dict[str, list[int]] = {}
    for i, label in enumerate(labels):
        by_class.setdefault(_label_str(label), []).append(i)
    rng = random.Random(seed)
    train_idx: list[int] = []
    test_idx: list[int] = []
    for name in sorted(by_class):
        members = by_class[name][:]
        rng.shuffle(members)
        n_test = round(len(members) * test_fraction) if len(members) > 1 else 0
        test_idx.extend(members[:n_test])
        train_idx.extend(members[n_test:])
    return sorted(train_idx), sorted(test_idx)
