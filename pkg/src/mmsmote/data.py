"""Dataset container, CSV ingestion, scaling, splitting, and ratio construction.

Labels are always +1 (minority, e.g. fraud) and -1 (majority). Imbalance
ratios are built by clustering the majority class with k-means and randomly
undersampling inside each cluster, which keeps the majority distribution
stable while shrinking it.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class Dataset:
    """Feature matrix with +/-1 labels and provenance row ids.

    Args:
        features: dense (n, d) real matrix.
        labels: length-n vector over {+1, -1}; +1 is the minority class.
        ids: original row indices, carried through subsetting for provenance.
    """

    features: np.ndarray
    labels: np.ndarray
    ids: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "features", np.atleast_2d(np.asarray(self.features, dtype=float)))
        object.__setattr__(self, "labels", np.asarray(self.labels, dtype=int))
        object.__setattr__(self, "ids", np.asarray(self.ids, dtype=int))
        if not np.isfinite(self.features).all():
            raise ValueError("features contain non-finite values")
        if not np.isin(self.labels, (-1, 1)).all():
            raise ValueError("labels must contain only +1 and -1")
        if not (self.features.shape[0] == self.labels.shape[0] == self.ids.shape[0]):
            raise ValueError("features, labels and ids must have the same number of rows")

    @property
    def n(self) -> int:
        return self.features.shape[0]

    @property
    def dim(self) -> int:
        return self.features.shape[1]

    @property
    def minority_mask(self) -> np.ndarray:
        return self.labels == 1

    @property
    def minority_count(self) -> int:
        return int(self.minority_mask.sum())

    @property
    def majority_count(self) -> int:
        return self.n - self.minority_count

    def class_counts(self) -> tuple[int, int]:
        """(minority, majority) sample counts."""
        return self.minority_count, self.majority_count

    def take(self, indices) -> "Dataset":
        indices = np.asarray(indices, dtype=int)
        return Dataset(self.features[indices], self.labels[indices], self.ids[indices])


def load_csv(path, label_column: str, positive_value) -> Dataset:
    """Load a plain numeric CSV with a header row into a Dataset.

    Rows whose label cell equals positive_value (numerically when both sides
    parse as numbers, by string otherwise) become +1, all others -1. Feature
    column order is preserved.

    Raises:
        FileNotFoundError: missing file.
        ValueError: missing label column, unparseable or non-finite cell
            (reported with row number and column name), or single-class file.
    """
    positive_str = str(positive_value)
    try:
        positive_num = float(positive_value)
    except (TypeError, ValueError):
        positive_num = None

    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ValueError(f"{path}: empty file") from None
        header = [h.strip() for h in header]
        if label_column not in header:
            raise ValueError(f"{path}: no column named {label_column!r}; columns are {header}")
        label_idx = header.index(label_column)

        rows = []
        labels = []
        for row_no, row in enumerate(reader, start=2):
            if len(row) != len(header):
                raise ValueError(f"{path}: row {row_no} has {len(row)} cells, expected {len(header)}")
            values = []
            for col_idx, cell in enumerate(row):
                if col_idx == label_idx:
                    continue
                try:
                    v = float(cell)
                except ValueError:
                    raise ValueError(
                        f"{path}: row {row_no}, column {header[col_idx]!r}: cannot parse {cell!r} as a number"
                    ) from None
                if not math.isfinite(v):
                    raise ValueError(f"{path}: row {row_no}, column {header[col_idx]!r}: non-finite value {cell!r}")
                values.append(v)
            raw = row[label_idx].strip()
            positive = raw == positive_str
            if not positive and positive_num is not None:
                try:
                    positive = float(raw) == positive_num
                except ValueError:
                    positive = False
            rows.append(values)
            labels.append(1 if positive else -1)

    if not rows:
        raise ValueError(f"{path}: no data rows")
    labels = np.array(labels, dtype=int)
    if (labels == 1).all() or (labels == -1).all():
        raise ValueError(f"{path}: all rows fall in a single class; check label column and positive value")
    return Dataset(np.array(rows, dtype=float), labels, np.arange(len(rows)))


def stratified_split(ds: Dataset, test_fraction: float, seed: int) -> tuple[Dataset, Dataset]:
    """Split into (train, test) keeping per-class proportions.

    Each class contributes round(count * test_fraction) test samples; the two
    partitions together are a permutation of the input. Deterministic for a
    given seed.
    """
    if not 0.0 < test_fraction < 1.0:
        raise ValueError(f"test_fraction must lie in (0, 1), got {test_fraction}")
    rng = np.random.default_rng(seed)
    test_idx = []
    train_idx = []
    for label in (1, -1):
        members = np.flatnonzero(ds.labels == label)
        n_test = round(len(members) * test_fraction)
        if n_test < 1 or n_test >= len(members):
            raise ValueError(
                f"class {label:+d} has {len(members)} samples; cannot place at least one in each partition "
                f"at test fraction {test_fraction}"
            )
        perm = rng.permutation(members)
        test_idx.append(perm[:n_test])
        train_idx.append(perm[n_test:])
    train = ds.take(np.sort(np.concatenate(train_idx)))
    test = ds.take(np.sort(np.concatenate(test_idx)))
    return train, test


@dataclass(frozen=True)
class StandardScaler:
    """Per-column centering/scaling with population (1/n) standard deviation.

    Zero-variance columns transform to exactly zero and invert back to their
    mean, so transform-then-inverse recovers inputs.
    """

    mean: np.ndarray
    std: np.ndarray

    @staticmethod
    def fit(X: np.ndarray) -> "StandardScaler":
        X = np.asarray(X, dtype=float)
        if X.size == 0:
            raise ValueError("cannot fit a scaler on an empty matrix")
        return StandardScaler(mean=X.mean(axis=0), std=X.std(axis=0))

    def transform(self, X: np.ndarray) -> np.ndarray:
        X = np.asarray(X, dtype=float)
        out = X - self.mean
        nonzero = self.std > 0
        out[:, nonzero] /= self.std[nonzero]
        out[:, ~nonzero] = 0.0
        return out

    def inverse_transform(self, X: np.ndarray) -> np.ndarray:
        return np.asarray(X, dtype=float) * self.std + self.mean


def standardize(train: Dataset, others: tuple[Dataset, ...] = ()) -> tuple[list[Dataset], StandardScaler]:
    """Fit a scaler on the training features only and apply it everywhere.

    Returns ([scaled train, *scaled others], scaler).
    """
    scaler = StandardScaler.fit(train.features)
    scaled = [Dataset(scaler.transform(d.features), d.labels, d.ids) for d in (train, *others)]
    return scaled, scaler


@dataclass(frozen=True)
class RatioSpec:
    """Target majority:minority ratio and the k-means settings used to hit it."""

    majority_per_minority: float
    n_clusters: int = 8
    seed: int = 0

    def __post_init__(self):
        if not self.majority_per_minority >= 1:
            raise ValueError("majority_per_minority must be >= 1")
        if not self.n_clusters >= 1:
            raise ValueError("n_clusters must be >= 1")


def proportional_quotas(sizes: np.ndarray, target: int) -> np.ndarray:
    """Allocate target across groups proportionally to sizes (largest remainder).

    Quotas are integers, sum exactly to target, and never exceed group sizes.
    Remainder ties go to the lower index.
    """
    sizes = np.asarray(sizes, dtype=float)
    if target > sizes.sum():
        raise ValueError(f"target {target} exceeds total capacity {int(sizes.sum())}")
    ideal = sizes * (target / sizes.sum())
    quotas = np.floor(ideal).astype(int)
    remainder = target - quotas.sum()
    if remainder > 0:
        frac = ideal - quotas
        top = np.argsort(-frac, kind="stable")[:remainder]
        quotas[top] += 1
    return quotas


def _kmeans_pp_init(X: np.ndarray, k: int, rng: np.random.Generator) -> np.ndarray:
    centers = np.empty((k, X.shape[1]))
    centers[0] = X[rng.integers(X.shape[0])]
    d2 = ((X - centers[0]) ** 2).sum(axis=1)
    for c in range(1, k):
        total = d2.sum()
        if total <= 0:
            centers[c:] = X[rng.integers(X.shape[0], size=k - c)]
            break
        centers[c] = X[rng.choice(X.shape[0], p=d2 / total)]
        d2 = np.minimum(d2, ((X - centers[c]) ** 2).sum(axis=1))
    return centers


def _kmeans(X: np.ndarray, k: int, rng: np.random.Generator, max_iter: int = 100, tol: float = 1e-6) -> np.ndarray:
    """Lloyd's algorithm with k-means++ seeding; returns cluster labels."""
    centers = _kmeans_pp_init(X, k, rng)
    labels = np.zeros(X.shape[0], dtype=int)
    x2 = np.einsum("ij,ij->i", X, X)
    for _ in range(max_iter):
        d2 = x2[:, None] - 2.0 * (X @ centers.T) + np.einsum("ij,ij->i", centers, centers)[None, :]
        labels = d2.argmin(axis=1)
        shift = 0.0
        for c in range(k):
            members = X[labels == c]
            if len(members) == 0:
                continue  # empty cluster keeps its centroid; caller drops it
            new = members.mean(axis=0)
            shift = max(shift, float(np.sqrt(((new - centers[c]) ** 2).sum())))
            centers[c] = new
        if shift < tol:
            break
    return labels


def make_ratio_dataset(ds: Dataset, spec: RatioSpec) -> Dataset:
    """Shrink the majority class to round(minority * ratio) samples.

    All minority samples are kept. The majority class is clustered with
    k-means, each cluster gets a quota proportional to its size (largest
    remainder), and members are drawn uniformly without replacement inside
    each cluster. Deterministic for a given spec seed.
    """
    n_min = ds.minority_count
    target = round(n_min * spec.majority_per_minority)
    maj_idx = np.flatnonzero(~ds.minority_mask)
    if target > len(maj_idx):
        raise ValueError(f"target majority count {target} exceeds available {len(maj_idx)}")
    if spec.n_clusters > len(maj_idx):
        raise ValueError(f"n_clusters {spec.n_clusters} exceeds majority count {len(maj_idx)}")

    rng = np.random.default_rng(spec.seed)
    labels = _kmeans(ds.features[maj_idx], spec.n_clusters, rng)
    clusters = [maj_idx[labels == c] for c in range(spec.n_clusters)]
    clusters = [c for c in clusters if len(c)]  # drop empties, re-normalizing quotas
    quotas = proportional_quotas(np.array([len(c) for c in clusters]), target)

    chosen = [rng.choice(c, size=q, replace=False) for c, q in zip(clusters, quotas)]
    keep = np.sort(np.concatenate([np.flatnonzero(ds.minority_mask), *chosen]).astype(int))
    return ds.take(keep)


def gen_gaussian_blobs(n_majority: int, n_minority: int, separation: float, dim: int, seed: int) -> Dataset:
    """Synthetic fixture: majority ~ N(0, I), minority ~ N(separation * 1, I)."""
    if n_majority < 1 or n_minority < 1 or dim < 1:
        raise ValueError("counts and dimension must be positive")
    rng = np.random.default_rng(seed)
    X_maj = rng.standard_normal((n_majority, dim))
    X_min = rng.standard_normal((n_minority, dim)) + separation
    features = np.vstack([X_maj, X_min])
    labels = np.concatenate([-np.ones(n_majority, dtype=int), np.ones(n_minority, dtype=int)])
    return Dataset(features, labels, np.arange(n_majority + n_minority))
