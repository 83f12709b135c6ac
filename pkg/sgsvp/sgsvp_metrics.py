"""Confusion counts, balanced accuracy and friends, and the Jaccard
similarity of selected feature sets.

Class 1 is the positive class.
"""
import dataclasses
import itertools
import typing as t

import numpy as np
import pandas as pd
from sklearn.metrics import confusion_matrix

from .sgsvp_errors import InputError, UndefinedMetricError

REPORT_COLUMNS = (
    "Bal. Acc.",
    "Specificity",
    "Recall",
    "Precision",
    "TN",
    "FP",
    "FN",
    "TP",
)
UNDEFINED = "n/a"


@dataclasses.dataclass(frozen=True)
class ConfusionCounts:
    tn: int
    fp: int
    fn: int
    tp: int


@dataclasses.dataclass(frozen=True)
class ClassificationReport:
    counts: ConfusionCounts
    balanced_accuracy: float
    specificity: float
    recall: float
    # None when no sample was predicted positive
    precision: t.Optional[float]

    def percentages(self) -> t.Tuple[str, str, str, str]:
        return tuple(
            UNDEFINED if val is None else f"{100 * val:.2f}"
            for val in (
                self.balanced_accuracy,
                self.specificity,
                self.recall,
                self.precision,
            )
        )

    def row(self) -> t.Tuple[str, ...]:
        c = self.counts
        return self.percentages() + tuple(str(n) for n in (c.tn, c.fp, c.fn, c.tp))


def confusion(y_true: t.Sequence[int], y_pred: t.Sequence[int]) -> ConfusionCounts:
    y_true = np.asarray(y_true)
    y_pred = np.asarray(y_pred)
    if y_true.shape != y_pred.shape or y_true.ndim != 1 or y_true.size == 0:
        raise InputError(
            f"label sequences must be nonempty and of equal length "
            f"(got {y_true.shape} and {y_pred.shape})"
        )
    for name, labels in (("y_true", y_true), ("y_pred", y_pred)):
        if not np.isin(labels, (0, 1)).all():
            raise InputError(f"{name} contains labels other than 0 and 1")
    tn, fp, fn, tp = confusion_matrix(y_true, y_pred, labels=[0, 1]).ravel()
    return ConfusionCounts(tn=int(tn), fp=int(fp), fn=int(fn), tp=int(tp))


def report(counts: ConfusionCounts) -> ClassificationReport:
    """Raises UndefinedMetricError if either class has no samples."""
    if counts.tp + counts.fn == 0:
        raise UndefinedMetricError("no Class 1 samples: recall is undefined")
    if counts.tn + counts.fp == 0:
        raise UndefinedMetricError("no Class 0 samples: specificity is undefined")
    recall = counts.tp / (counts.tp + counts.fn)
    specificity = counts.tn / (counts.tn + counts.fp)
    precision = (
        counts.tp / (counts.tp + counts.fp) if counts.tp + counts.fp else None
    )
    return ClassificationReport(
        counts=counts,
        balanced_accuracy=(recall + specificity) / 2,
        specificity=specificity,
        recall=recall,
        precision=precision,
    )


def evaluate(y_true, y_pred) -> ClassificationReport:
    return report(confusion(y_true, y_pred))


def jaccard(S1: t.Iterable[int], S2: t.Iterable[int]) -> float:
    """|S1 & S2| / |S1 | S2|; two empty sets are identical (1.0)."""
    S1, S2 = set(S1), set(S2)
    union = S1 | S2
    if not union:
        return 1.0
    return len(S1 & S2) / len(union)


def jaccard_matrix(family: t.Sequence[t.Iterable[int]]) -> np.ndarray:
    sets = [set(s) for s in family]
    return np.array([[jaccard(a, b) for b in sets] for a in sets])


def avg_jaccard(family: t.Sequence[t.Iterable[int]]) -> float:
    """Mean JSI over the N choose 2 unordered pairs."""
    sets = [set(s) for s in family]
    if len(sets) < 2:
        raise InputError(f"need at least 2 feature sets, got {len(sets)}")
    pairs = list(itertools.combinations(sets, 2))
    return sum(jaccard(a, b) for a, b in pairs) / len(pairs)


def reports_frame(reports: t.Dict[str, ClassificationReport]) -> pd.DataFrame:
    return pd.DataFrame(
        [(name,) + rep.row() for name, rep in reports.items()],
        columns=("partition",) + REPORT_COLUMNS,
    )


def write_reports_csv(path, reports: t.Dict[str, ClassificationReport]):
    reports_frame(reports).to_csv(
        path, index=False, lineterminator="\n", encoding="utf-8"
    )


def read_reports_csv(path) -> t.Dict[str, ClassificationReport]:
    """Rebuilds each report from its counts and checks the printed
    percentages agree."""
    frame = pd.read_csv(path, dtype=str, keep_default_na=False, encoding="utf-8")
    missing = set(("partition",) + REPORT_COLUMNS) - set(frame.columns)
    if missing:
        raise InputError(f"{path}: missing report columns {sorted(missing)}")
    out = {}
    for _, row in frame.iterrows():
        counts = ConfusionCounts(*(int(row[col]) for col in ("TN", "FP", "FN", "TP")))
        rep = report(counts)
        if rep.percentages() != tuple(row[col] for col in REPORT_COLUMNS[:4]):
            raise InputError(
                f"{path}: percentages for {row['partition']!r} do not match "
                "its counts"
            )
        out[row["partition"]] = rep
    return out


def format_reports(reports: t.Dict[str, ClassificationReport]) -> str:
    """Fixed-width text table in the layout of the published reports."""
    header = ("",) + REPORT_COLUMNS
    rows = [header] + [(name,) + rep.row() for name, rep in reports.items()]
    widths = [max(len(row[i]) for row in rows) for i in range(len(header))]
    return "\n".join(
        "  ".join(cell.rjust(width) for cell, width in zip(row, widths))
        for row in rows
    )
