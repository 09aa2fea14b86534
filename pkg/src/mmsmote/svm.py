"""Soft-margin SVM on a precomputed kernel matrix, trained by SMO.

The solver works directly on a Gram (or augmented Gram) matrix and supports
a per-sample upper bound C_i, which is what class-weighted training needs.
Working-set selection is the first-order maximal-violating-pair rule: the
dual is improved two coefficients at a time until the worst KKT violation
drops below tol.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .kernels import AugmentedKernel, GramMatrix


def _as_matrix(K) -> np.ndarray:
    if isinstance(K, (GramMatrix, AugmentedKernel)):
        return K.matrix
    return np.asarray(K, dtype=float)


def _handle_fingerprint(K) -> str:
    if isinstance(K, (GramMatrix, AugmentedKernel)):
        return K.fingerprint
    return ""


@dataclass(frozen=True)
class TrainedModel:
    """Dual solution of the soft-margin SVM on a fixed kernel matrix.

    alpha and bias define the decision function
    f(x) = sum_i alpha_i y_i kappa(x_i, x) + bias; c_vector holds the
    per-sample box bounds the solver honored; objective is the final dual
    value. kernel_handle keeps a reference to the training matrix (dropped
    on serialization; the fingerprint survives).
    """

    alpha: np.ndarray
    bias: float
    labels: np.ndarray
    c_vector: np.ndarray
    objective: float
    kernel_fingerprint: str
    kernel_handle: object = None
    converged: bool = True
    n_iter: int = 0

    @property
    def n(self) -> int:
        return len(self.alpha)


def train_smo(K, y, c_vector, tol: float = 1e-3, max_passes: int = 10_000, seed: int = 0) -> TrainedModel:
    """Solve the kernel SVM dual with sequential minimal optimization.

    Args:
        K: GramMatrix, AugmentedKernel, or raw square ndarray.
        y: +/-1 labels, one per kernel row; both classes must be present.
        c_vector: scalar or per-sample upper bounds, all > 0.
        tol: KKT tolerance; at exit every sample satisfies its condition
            within tol (bound samples one-sidedly, free samples two-sidedly).
        max_passes: cap on working-set updates; on hitting it the best
            iterate is returned with converged=False rather than raising,
            so long benchmark runs always complete.
        seed: reserved for interface stability; the maximal-violating-pair
            rule is deterministic, ties resolved to the lowest index.

    The bias is averaged over free support vectors, falling back to the
    midpoint of the feasible interval when no coefficient is strictly
    inside its box.
    """
    del seed  # deterministic pair selection needs no randomness
    Km = _as_matrix(K)
    y = np.asarray(y, dtype=float)
    n = len(y)
    if Km.shape != (n, n):
        raise ValueError(f"kernel matrix shape {Km.shape} does not match {n} labels")
    if not ((y == 1).any() and (y == -1).any()):
        raise ValueError("training labels must include both classes")
    C = np.broadcast_to(np.asarray(c_vector, dtype=float), (n,)).copy()
    if not (C > 0).all():
        raise ValueError("all per-sample bounds must be > 0")

    alpha = np.zeros(n)
    G = -np.ones(n)  # gradient of (1/2) a'Qa - sum(a), Q = y y' * K
    converged = False
    it = 0
    for it in range(1, max_passes + 1):
        v = -y * G  # candidate bias per sample: y_i - sum_j a_j y_j K_ij
        up = ((y > 0) & (alpha < C)) | ((y < 0) & (alpha > 0))
        low = ((y > 0) & (alpha > 0)) | ((y < 0) & (alpha < C))
        if not up.any() or not low.any():
            converged = True
            break
        i = int(np.argmax(np.where(up, v, -np.inf)))
        j = int(np.argmin(np.where(low, v, np.inf)))
        gap = v[i] - v[j]
        if gap <= tol:
            converged = True
            break

        eta = Km[i, i] + Km[j, j] - 2.0 * Km[i, j]
        lam = gap / max(eta, 1e-12)
        ub_i = C[i] - alpha[i] if y[i] > 0 else alpha[i]
        ub_j = alpha[j] if y[j] > 0 else C[j] - alpha[j]
        lam = min(lam, ub_i, ub_j)

        alpha[i] += y[i] * lam
        alpha[j] -= y[j] * lam
        # snap onto the box so the index sets stay exact
        if lam == ub_i:
            alpha[i] = C[i] if y[i] > 0 else 0.0
        if lam == ub_j:
            alpha[j] = 0.0 if y[j] > 0 else C[j]
        G += lam * y * (Km[:, i] - Km[:, j])

    v = -y * G
    free = (alpha > 1e-8 * C) & (alpha < C * (1.0 - 1e-8))
    if free.any():
        bias = float(v[free].mean())
    else:
        up = ((y > 0) & (alpha < C)) | ((y < 0) & (alpha > 0))
        low = ((y > 0) & (alpha > 0)) | ((y < 0) & (alpha < C))
        lo = v[up].max() if up.any() else -np.inf
        hi = v[low].min() if low.any() else np.inf
        if not np.isfinite(lo):
            bias = float(hi)
        elif not np.isfinite(hi):
            bias = float(lo)
        else:
            bias = float((lo + hi) / 2.0)

    objective = float(0.5 * (alpha.sum() - alpha @ G))
    return TrainedModel(
        alpha=alpha,
        bias=bias,
        labels=y.astype(int),
        c_vector=C,
        objective=objective,
        kernel_fingerprint=_handle_fingerprint(K),
        kernel_handle=K,
        converged=converged,
        n_iter=it,
    )


def raw_decision(model: TrainedModel, k_row: np.ndarray) -> float:
    """Pre-sign decision value sum_i alpha_i y_i k_row[i] + bias."""
    k_row = np.asarray(k_row, dtype=float)
    if k_row.shape != (model.n,):
        raise ValueError(f"kernel row length {k_row.shape} does not match {model.n} coefficients")
    return float((model.alpha * model.labels) @ k_row + model.bias)


def decision_values(model: TrainedModel, k_rows: np.ndarray) -> np.ndarray:
    """Vectorized raw_decision over kernel rows."""
    k_rows = np.atleast_2d(np.asarray(k_rows, dtype=float))
    if k_rows.shape[1] != model.n:
        raise ValueError(f"kernel rows have {k_rows.shape[1]} columns, expected {model.n}")
    return k_rows @ (model.alpha * model.labels) + model.bias


def predict(model: TrainedModel, k_rows: np.ndarray) -> np.ndarray:
    """Sign of the decision value per row; an exact zero maps to +1."""
    return np.where(decision_values(model, k_rows) >= 0.0, 1, -1)


def slack(model: TrainedModel, K, y) -> np.ndarray:
    """Hinge slack xi_i = max(0, 1 - y_i f(x_i)) over training rows."""
    f = decision_values(model, _as_matrix(K))
    return np.maximum(0.0, 1.0 - np.asarray(y, dtype=float) * f)


class MarginStatus(Enum):
    """Four-way classification of a minority sample by its margin y f(x)."""

    SAFE = "safe"                    # margin > 1 + eps; not a support vector
    ON_MARGIN = "on_margin"          # margin = 1 within eps; slack 0
    IN_MARGIN = "in_margin"          # 0 <= margin < 1 - eps; slack in (0, 1]
    MISCLASSIFIED = "misclassified"  # margin < 0; slack > 1


MARGIN_EPS = 1e-6


@dataclass(frozen=True)
class SvTaxonomy:
    """Margin classification of every minority training sample.

    indices are row positions in the training matrix; margins are y_i f(x_i);
    distances are geometric: |f(x_i)| / ||w||.
    """

    indices: np.ndarray
    status: tuple[MarginStatus, ...]
    margins: np.ndarray
    distances: np.ndarray
    w_norm: float

    @property
    def sv_mask(self) -> np.ndarray:
        return np.array([s is not MarginStatus.SAFE for s in self.status])

    @property
    def sv_indices(self) -> np.ndarray:
        return self.indices[self.sv_mask]

    def counts(self) -> dict[str, int]:
        return {m.value: sum(1 for s in self.status if s is m) for m in MarginStatus}


def classify_minority_svs(model: TrainedModel, K, y) -> SvTaxonomy:
    """Bucket minority samples by margin and attach hyperplane distances.

    Support vectors are the on-margin, in-margin and misclassified samples.
    Distance uses the geometric margin |f(x)| / ||w|| with
    ||w||^2 = (alpha y)' K (alpha y); an all-zero alpha has no hyperplane and
    is rejected.
    """
    Km = _as_matrix(K)
    y = np.asarray(y, dtype=float)
    coeff = model.alpha * model.labels
    w2 = float(coeff @ Km @ coeff)
    if w2 <= 1e-24:
        raise ValueError("degenerate model: ||w|| = 0, no separating hyperplane")
    w_norm = float(np.sqrt(w2))

    f = decision_values(model, Km)
    minority = np.flatnonzero(y == 1)
    margins = y[minority] * f[minority]
    distances = np.abs(f[minority]) / w_norm

    status = []
    for m in margins:
        if m > 1.0 + MARGIN_EPS:
            status.append(MarginStatus.SAFE)
        elif m >= 1.0 - MARGIN_EPS:
            status.append(MarginStatus.ON_MARGIN)
        elif m >= 0.0:
            status.append(MarginStatus.IN_MARGIN)
        else:
            status.append(MarginStatus.MISCLASSIFIED)
    return SvTaxonomy(
        indices=minority,
        status=tuple(status),
        margins=margins,
        distances=distances,
        w_norm=w_norm,
    )


def save_model(model: TrainedModel, path) -> None:
    """Serialize to JSON; floats round-trip exactly via repr."""
    payload = {
        "alpha": model.alpha.tolist(),
        "bias": model.bias,
        "labels": model.labels.tolist(),
        "c_vector": model.c_vector.tolist(),
        "objective": model.objective,
        "kernel_fingerprint": model.kernel_fingerprint,
        "converged": model.converged,
        "n_iter": model.n_iter,
    }
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=1)


def load_model(path) -> TrainedModel:
    """Inverse of save_model; the kernel matrix reference is not restored."""
    with open(path) as fh:
        payload = json.load(fh)
    return TrainedModel(
        alpha=np.array(payload["alpha"], dtype=float),
        bias=float(payload["bias"]),
        labels=np.array(payload["labels"], dtype=int),
        c_vector=np.array(payload["c_vector"], dtype=float),
        objective=float(payload["objective"]),
        kernel_fingerprint=payload["kernel_fingerprint"],
        kernel_handle=None,
        converged=bool(payload["converged"]),
        n_iter=int(payload["n_iter"]),
    )
