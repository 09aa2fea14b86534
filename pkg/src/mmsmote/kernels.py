"""Kernel functions, Gram matrices, and Gram augmentation with virtual samples.

A virtual (synthetic) sample never gets coordinates: it is defined as the
feature-space point phi(x_i) + delta * (phi(x_j) - phi(x_i)) for two real
minority samples i, j, and every kernel value involving it expands into a
linear combination of kernel values between real samples. The augmented
Gram matrix is therefore exact for any kernel, not an approximation.
"""

from __future__ import annotations

import hashlib
import struct
from dataclasses import dataclass
from enum import Enum
from typing import NamedTuple

import numpy as np

_FAMILIES = ("linear", "polynomial", "rbf")


class SampleCase(Enum):
    """Neighborhood label of a minority support vector.

    NOISE: all k nearest neighbors are majority samples; never oversampled.
    CONSERVATIVE: majority-dominated neighborhood; interpolate, delta in (0, 1).
    AGGRESSIVE: minority-dominated neighborhood; extrapolate, delta in (-1, 0).
    """

    NOISE = "noise"
    CONSERVATIVE = "conservative"
    AGGRESSIVE = "aggressive"


@dataclass(frozen=True)
class KernelSpec:
    """Kernel family plus hyperparameters; the sole home of the feature map."""

    family: str
    gamma: float | None = None
    degree: int | None = None
    coef0: float | None = None

    def __post_init__(self):
        if self.family not in _FAMILIES:
            raise ValueError(f"unknown kernel family {self.family!r}; expected one of {_FAMILIES}")
        if self.family == "rbf":
            if self.gamma is None or not self.gamma > 0:
                raise ValueError("rbf kernel requires gamma > 0")
        if self.family == "polynomial":
            if self.degree is None or int(self.degree) != self.degree or self.degree < 1:
                raise ValueError("polynomial kernel requires integer degree >= 1")
            if self.coef0 is None:
                object.__setattr__(self, "coef0", 0.0)

    @staticmethod
    def linear() -> "KernelSpec":
        return KernelSpec("linear")

    @staticmethod
    def polynomial(degree: int, coef0: float = 1.0) -> "KernelSpec":
        return KernelSpec("polynomial", degree=degree, coef0=coef0)

    @staticmethod
    def rbf(gamma: float) -> "KernelSpec":
        return KernelSpec("rbf", gamma=gamma)

    def token(self) -> str:
        """Canonical string used in fingerprints and serialized models."""
        if self.family == "linear":
            return "linear"
        if self.family == "polynomial":
            return f"polynomial(degree={int(self.degree)},coef0={self.coef0!r})"
        return f"rbf(gamma={self.gamma!r})"


def default_rbf(X: np.ndarray) -> KernelSpec:
    """RBF spec with gamma = 1 / (n_features * mean per-column variance).

    Population (1/n) variance; falls back to gamma = 1/n_features when the
    data is constant.
    """
    X = np.asarray(X, dtype=float)
    var = float(X.var(axis=0).mean())
    d = X.shape[1]
    return KernelSpec.rbf(1.0 / (d * var) if var > 0 else 1.0 / d)


def eval_kernel(spec: KernelSpec, x: np.ndarray, y: np.ndarray) -> float:
    """Kernel value kappa(x, y) between two sample vectors."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape:
        raise ValueError(f"dimension mismatch: {x.shape} vs {y.shape}")
    if spec.family == "linear":
        return float(x @ y)
    if spec.family == "polynomial":
        return float((x @ y + spec.coef0) ** spec.degree)
    diff = x - y
    return float(np.exp(-spec.gamma * (diff @ diff)))


def _pairwise(spec: KernelSpec, X: np.ndarray, Y: np.ndarray, symmetric: bool = False) -> np.ndarray:
    inner = X @ Y.T
    if spec.family == "linear":
        return inner
    if spec.family == "polynomial":
        return (inner + spec.coef0) ** spec.degree
    d2 = np.einsum("ij,ij->i", X, X)[:, None] + np.einsum("ij,ij->i", Y, Y)[None, :] - 2.0 * inner
    np.maximum(d2, 0.0, out=d2)
    if symmetric:
        np.fill_diagonal(d2, 0.0)
    return np.exp(-spec.gamma * d2)


@dataclass(frozen=True)
class GramMatrix:
    """Dense symmetric kernel matrix with a fingerprint of its inputs."""

    matrix: np.ndarray
    fingerprint: str

    @property
    def n(self) -> int:
        return self.matrix.shape[0]


def _fingerprint(spec: KernelSpec, X: np.ndarray) -> str:
    h = hashlib.sha256()
    h.update(spec.token().encode())
    h.update(struct.pack("<qq", *X.shape))
    h.update(np.ascontiguousarray(X, dtype="<f8").tobytes())
    return h.hexdigest()


def gram(spec: KernelSpec, X: np.ndarray) -> GramMatrix:
    """Pairwise kernel matrix over the rows of X.

    The upper triangle is computed and mirrored, so the result is exactly
    symmetric; the diagonal of an RBF Gram is exactly 1.
    """
    X = np.asarray(X, dtype=float)
    if X.size == 0:
        raise ValueError("empty input matrix")
    if not np.isfinite(X).all():
        raise ValueError("non-finite values in input matrix")
    K = _pairwise(spec, X, X, symmetric=True)
    K = np.triu(K) + np.triu(K, 1).T
    return GramMatrix(matrix=K, fingerprint=_fingerprint(spec, X))


def cross_gram(spec: KernelSpec, X: np.ndarray, Y: np.ndarray) -> np.ndarray:
    """Rectangular kernel matrix: entry (p, q) = kappa(X[p], Y[q])."""
    X = np.asarray(X, dtype=float)
    Y = np.asarray(Y, dtype=float)
    if X.shape[1] != Y.shape[1]:
        raise ValueError(f"dimension mismatch: {X.shape[1]} vs {Y.shape[1]}")
    return _pairwise(spec, X, Y)


def self_kernel(spec: KernelSpec, X: np.ndarray) -> np.ndarray:
    """Vector of kappa(x, x) for each row; 1 for rbf, row norms for linear."""
    X = np.asarray(X, dtype=float)
    if spec.family == "rbf":
        return np.ones(X.shape[0])
    sq = np.einsum("ij,ij->i", X, X)
    if spec.family == "linear":
        return sq
    return (sq + spec.coef0) ** spec.degree


def kernel_distance2(spec: KernelSpec, x: np.ndarray, y: np.ndarray) -> float:
    """Squared feature-space distance ||phi(x) - phi(y)||^2, clamped at 0."""
    return max(0.0, eval_kernel(spec, x, x) - 2.0 * eval_kernel(spec, x, y) + eval_kernel(spec, y, y))


def pairwise_kernel_distance2(spec: KernelSpec, X: np.ndarray, Y: np.ndarray) -> np.ndarray:
    """Matrix of squared feature-space distances between rows of X and Y."""
    d2 = self_kernel(spec, X)[:, None] - 2.0 * cross_gram(spec, X, Y) + self_kernel(spec, Y)[None, :]
    np.maximum(d2, 0.0, out=d2)
    return d2


class PlanEntry(NamedTuple):
    """One virtual sample: base row i, partner row j, mix delta, and its case."""

    i: int
    j: int
    delta: float
    case: SampleCase


@dataclass(frozen=True)
class SynthesisPlan:
    """Ordered recipe for the virtual samples, conservative block first.

    Entry (i, j, delta) stands for the feature-space point
    phi(x_i) + delta * (phi(x_j) - phi(x_i)); i and j are row indices into
    the training matrix and must point at minority rows.
    """

    entries: tuple[PlanEntry, ...]

    def __post_init__(self):
        seen_aggressive = False
        for e in self.entries:
            if e.case is SampleCase.CONSERVATIVE:
                if seen_aggressive:
                    raise ValueError("plan entries must list all conservative entries before aggressive ones")
                if not 0.0 < e.delta < 1.0:
                    raise ValueError(f"conservative delta must lie in (0, 1), got {e.delta}")
            elif e.case is SampleCase.AGGRESSIVE:
                seen_aggressive = True
                if not -1.0 < e.delta < 0.0:
                    raise ValueError(f"aggressive delta must lie in (-1, 0), got {e.delta}")
            else:
                raise ValueError("noise samples cannot appear in a synthesis plan")
            if e.i == e.j:
                raise ValueError("plan entry must reference two distinct samples")

    def __len__(self) -> int:
        return len(self.entries)

    @property
    def n_conservative(self) -> int:
        return sum(1 for e in self.entries if e.case is SampleCase.CONSERVATIVE)

    @property
    def n_aggressive(self) -> int:
        return len(self.entries) - self.n_conservative

    def index_arrays(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        i = np.array([e.i for e in self.entries], dtype=int)
        j = np.array([e.j for e in self.entries], dtype=int)
        delta = np.array([e.delta for e in self.entries], dtype=float)
        return i, j, delta


def _plan_coefficients(n: int, i: np.ndarray, j: np.ndarray, delta: np.ndarray) -> np.ndarray:
    """s x n matrix C with row q = (1 - delta_q) e_{i_q} + delta_q e_{j_q}.

    Left-multiplying a Gram matrix by C realizes the virtual-sample kernel
    expansions: one application for original-vs-virtual values, two for
    virtual-vs-virtual values.
    """
    C = np.zeros((len(i), n))
    C[np.arange(len(i)), i] = 1.0 - delta
    C[np.arange(len(j)), j] = delta
    return C


@dataclass(frozen=True)
class AugmentedKernel:
    """Gram matrix extended with rows/columns for the planned virtual samples.

    Block layout: original block (bit-for-bit the input Gram), the
    original-vs-virtual block, and the virtual-vs-virtual block, with virtual
    columns ordered conservative-then-aggressive. Labels cover all rows;
    every virtual sample is labeled +1.
    """

    matrix: np.ndarray
    labels: np.ndarray
    plan: SynthesisPlan
    n_original: int
    fingerprint: str

    @property
    def n(self) -> int:
        return self.matrix.shape[0]

    @property
    def n_synthetic(self) -> int:
        return self.n - self.n_original


def augment_gram(
    base: GramMatrix,
    spec: KernelSpec,
    X_train: np.ndarray,
    y_train: np.ndarray,
    plan: SynthesisPlan,
) -> AugmentedKernel:
    """Extend a training Gram with kernel rows/columns for virtual samples.

    Original-vs-virtual entries combine two base columns with weights
    (1 - delta, delta); virtual-vs-virtual entries expand into the four
    kernel terms with coefficients (1-d_l)(1-d_q), (1-d_q)d_l, d_q(1-d_l),
    d_q d_l. Both blocks are linear images of the base Gram, so the result
    is a true Gram matrix (positive semidefinite).
    """
    X_train = np.asarray(X_train, dtype=float)
    y_train = np.asarray(y_train)
    if base.fingerprint != _fingerprint(spec, X_train):
        raise ValueError("base Gram matrix was not built from this kernel spec and training matrix")
    n = base.n
    i, j, delta = plan.index_arrays()
    for idx in np.concatenate([i, j]) if len(plan) else ():
        if not 0 <= idx < n:
            raise IndexError(f"plan index {idx} out of range for {n} training rows")
        if y_train[idx] != 1:
            raise ValueError(f"plan index {idx} does not reference a minority row")

    K1 = base.matrix
    C = _plan_coefficients(n, i, j, delta)
    K2 = K1 @ C.T
    K3 = (C @ K1) @ C.T
    K3 = np.triu(K3) + np.triu(K3, 1).T

    s = len(plan)
    full = np.empty((n + s, n + s))
    full[:n, :n] = K1
    full[:n, n:] = K2
    full[n:, :n] = K2.T
    full[n:, n:] = K3

    labels = np.concatenate([y_train.astype(int), np.ones(s, dtype=int)])
    h = hashlib.sha256()
    h.update(base.fingerprint.encode())
    h.update(np.array([i, j], dtype="<i8").tobytes())
    h.update(delta.astype("<f8").tobytes())
    return AugmentedKernel(
        matrix=full,
        labels=labels,
        plan=plan,
        n_original=n,
        fingerprint=h.hexdigest(),
    )


def augmented_rows(
    spec: KernelSpec,
    X: np.ndarray,
    X_train: np.ndarray,
    plan: SynthesisPlan,
) -> np.ndarray:
    """Kernel rows of test points against training rows plus virtual samples.

    Row p holds kappa(x_p, x_q) for the n training rows followed by the s
    virtual-sample expansions (1 - delta) kappa(x_p, x_i) + delta kappa(x_p, x_j).
    """
    X = np.atleast_2d(np.asarray(X, dtype=float))
    base = cross_gram(spec, X, X_train)
    i, j, delta = plan.index_arrays()
    C = _plan_coefficients(X_train.shape[0], i, j, delta)
    return np.hstack([base, base @ C.T])


def augmented_row(spec: KernelSpec, x: np.ndarray, X_train: np.ndarray, plan: SynthesisPlan) -> np.ndarray:
    """Single test point's kernel row of length n + s."""
    return augmented_rows(spec, np.asarray(x, dtype=float)[None, :], X_train, plan)[0]


def save_matrix(path, M: np.ndarray) -> None:
    """Binary dump: two little-endian uint64 dimensions, then row-major f64 data."""
    M = np.atleast_2d(np.asarray(M, dtype=float))
    with open(path, "wb") as fh:
        fh.write(struct.pack("<QQ", M.shape[0], M.shape[1]))
        fh.write(np.ascontiguousarray(M, dtype="<f8").tobytes())


def load_matrix(path) -> np.ndarray:
    """Read a matrix written by save_matrix."""
    with open(path, "rb") as fh:
        rows, cols = struct.unpack("<QQ", fh.read(16))
        data = np.frombuffer(fh.read(rows * cols * 8), dtype="<f8")
    if data.size != rows * cols:
        raise ValueError(f"truncated matrix file: expected {rows * cols} values, got {data.size}")
    return data.reshape(rows, cols).astype(float)
