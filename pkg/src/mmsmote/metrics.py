"""Confusion-matrix metrics for imbalanced evaluation.

G-mean here is sqrt(precision * recall): the geometric counterpart of the
F1 harmonic mean over the same two rates. Every 0/0 degeneracy yields 0 so
batch runs never divide by zero.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class ConfusionMatrix:
    """Counts with the minority (+1) class as positive."""

    tp: int
    fp: int
    tn: int
    fn: int

    def __post_init__(self):
        if min(self.tp, self.fp, self.tn, self.fn) < 0:
            raise ValueError("counts must be non-negative")

    @property
    def total(self) -> int:
        return self.tp + self.fp + self.tn + self.fn


@dataclass(frozen=True)
class MetricsReport:
    precision: float
    recall: float
    f1: float
    gmean: float


def confusion(y_true, y_pred) -> ConfusionMatrix:
    y_true = np.asarray(y_true, dtype=int)
    y_pred = np.asarray(y_pred, dtype=int)
    if y_true.shape != y_pred.shape:
        raise ValueError("label vectors must have equal length")
    for v in (y_true, y_pred):
        if not np.isin(v, (-1, 1)).all():
            raise ValueError("labels must be +1 or -1")
    return ConfusionMatrix(
        tp=int(((y_true == 1) & (y_pred == 1)).sum()),
        fp=int(((y_true == -1) & (y_pred == 1)).sum()),
        tn=int(((y_true == -1) & (y_pred == -1)).sum()),
        fn=int(((y_true == 1) & (y_pred == -1)).sum()),
    )


def scores_from_pr(precision: float, recall: float) -> MetricsReport:
    """F1 and G-mean from precision/recall alone; 0/0 yields 0."""
    denom = precision + recall
    f1 = 2.0 * precision * recall / denom if denom > 0 else 0.0
    return MetricsReport(
        precision=precision,
        recall=recall,
        f1=f1,
        gmean=math.sqrt(precision * recall),
    )


def scores(cm: ConfusionMatrix) -> MetricsReport:
    precision = cm.tp / (cm.tp + cm.fp) if cm.tp + cm.fp else 0.0
    recall = cm.tp / (cm.tp + cm.fn) if cm.tp + cm.fn else 0.0
    return scores_from_pr(precision, recall)
