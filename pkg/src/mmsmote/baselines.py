"""Comparison methods: class weighting, classic SMOTE, random undersampling.

Classic SMOTE works on input-space coordinates with Euclidean neighbors, in
contrast with the kernel-space pipeline in oversample.py; the contrast is
the point of the comparison.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .data import Dataset

METHODS = ("plain_svm", "class_weighted_svm", "rus_svm", "smote_svm", "mm_smote")


@dataclass(frozen=True)
class BaselineSpec:
    """A named comparison method plus its method-specific parameters."""

    method: str
    target_ratio: float = 1.0  # rus_svm: majority per minority after undersampling
    smote_k: int = 5           # smote_svm: neighbor count
    smote_s: int | None = None  # smote_svm: synthetic count; None = balance fully

    def __post_init__(self):
        if self.method not in METHODS:
            raise ValueError(f"unknown method {self.method!r}; expected one of {METHODS}")
        if self.target_ratio < 1.0:
            raise ValueError("target_ratio must be >= 1")
        if self.smote_k < 1:
            raise ValueError("smote_k must be >= 1")


def class_weight_vector(y, C: float) -> np.ndarray:
    """Per-sample bounds: C * (majority/minority count) for minority, C else."""
    y = np.asarray(y)
    n_min = int((y == 1).sum())
    n_maj = int((y == -1).sum())
    if n_min == 0 or n_maj == 0:
        raise ValueError("both classes must be present")
    out = np.full(len(y), float(C))
    out[y == 1] = C * (n_maj / n_min)
    return out


def smote(train: Dataset, k: int, s: int, seed: int) -> Dataset:
    """Classic input-space SMOTE: s interpolated minority rows appended.

    Base samples are uniform over the minority class; partners uniform over
    the base's k nearest minority neighbors (Euclidean); the mix factor is
    uniform over the open interval (0, 1).
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    if s == 0:
        return train
    minority = np.flatnonzero(train.minority_mask)
    if len(minority) < 2:
        raise ValueError("minority class must have at least 2 samples")

    Xm = train.features[minority]
    d2 = (
        np.einsum("ij,ij->i", Xm, Xm)[:, None]
        - 2.0 * (Xm @ Xm.T)
        + np.einsum("ij,ij->i", Xm, Xm)[None, :]
    )
    np.fill_diagonal(d2, np.inf)
    kk = min(k, len(minority) - 1)
    neighbor_pos = np.argsort(d2, axis=1, kind="stable")[:, :kk]

    rng = np.random.default_rng(seed)
    rows = []
    for _ in range(s):
        b = int(rng.integers(len(minority)))
        j = int(rng.choice(neighbor_pos[b]))
        delta = rng.uniform()
        while delta == 0.0:
            delta = rng.uniform()
        rows.append(Xm[b] + delta * (Xm[j] - Xm[b]))

    new_ids = np.arange(s) + int(train.ids.max()) + 1
    return Dataset(
        np.vstack([train.features, np.array(rows)]),
        np.concatenate([train.labels, np.ones(s, dtype=int)]),
        np.concatenate([train.ids, new_ids]),
    )


def random_undersample(train: Dataset, target_ratio: float, seed: int) -> Dataset:
    """Uniformly drop majority rows down to round(minority * target_ratio)."""
    n_min = train.minority_count
    target = round(n_min * target_ratio)
    maj_idx = np.flatnonzero(~train.minority_mask)
    if target > len(maj_idx):
        raise ValueError(f"target majority count {target} exceeds available {len(maj_idx)}")
    rng = np.random.default_rng(seed)
    chosen = rng.choice(maj_idx, size=target, replace=False)
    keep = np.sort(np.concatenate([np.flatnonzero(train.minority_mask), chosen]))
    return train.take(keep)
