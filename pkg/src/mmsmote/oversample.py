"""The MM-SMOTE pipeline: marginalized-minority oversampling in kernel space.

A base SVM locates the minority support vectors. Each one is weighted by its
geometric distance to the hyperplane (closer = more likely to be picked),
classified by how many of its k nearest neighbors are majority samples, and
then oversampled adaptively: interpolation toward a minority neighbor when
the neighborhood is majority-dominated (conservative, delta in (0, 1)),
extrapolation away from it when minority-dominated (aggressive, delta in
(-1, 0)), and exclusion when fully surrounded (noise). The virtual samples
exist only inside an augmented kernel matrix; a second SVM trained on that
matrix yields the final classifier.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .data import Dataset
from .kernels import (
    AugmentedKernel,
    KernelSpec,
    PlanEntry,
    SampleCase,
    SynthesisPlan,
    augment_gram,
    augmented_rows,
    gram,
    pairwise_kernel_distance2,
)
from .svm import SvTaxonomy, TrainedModel, classify_minority_svs, predict, train_smo


@dataclass(frozen=True)
class SvWeights:
    """Selection distribution over eligible minority support vectors."""

    indices: np.ndarray
    probabilities: np.ndarray

    def __post_init__(self):
        p = self.probabilities
        if len(p) == 0:
            raise ValueError("empty weight vector")
        if not (p > 0).all():
            raise ValueError("all selection weights must be positive")
        if abs(float(p.sum()) - 1.0) > 1e-12:
            raise ValueError("selection weights must sum to 1")


def sv_weights(distances: np.ndarray, indices: np.ndarray | None = None) -> SvWeights:
    """Softmax of negative hyperplane distance: w_i = e^{-|L_i|} / sum_k e^{-|L_k|}.

    Samples closer to the decision hyperplane get strictly larger weights.
    Shifting by the smallest distance leaves the ratios unchanged and keeps
    the exponentials from underflowing when every sample is far away.
    """
    distances = np.asarray(distances, dtype=float)
    if distances.size == 0:
        raise ValueError("no distances supplied")
    if not np.isfinite(distances).all():
        raise ValueError("distances must be finite")
    shifted = np.abs(distances)
    w = np.exp(-(shifted - shifted.min()))
    w /= w.sum()
    if indices is None:
        indices = np.arange(len(w))
    return SvWeights(indices=np.asarray(indices, dtype=int), probabilities=w)


class NeighborCase(NamedTuple):
    """Neighborhood verdict for one sample: case label, majority count m, and k."""

    case: SampleCase
    m: int
    k: int


def _k_nearest(d2: np.ndarray, self_pos: int | None, k: int) -> np.ndarray:
    """Positions of the k smallest distances; ties go to the smaller index."""
    d2 = d2.copy()
    if self_pos is not None:
        d2[self_pos] = np.inf
    return np.argsort(d2, kind="stable")[:k]


def classify_neighborhood(idx: int, train: Dataset, spec: KernelSpec, k: int) -> NeighborCase:
    """Label sample idx by the majority count m among its k nearest neighbors.

    Nearness is measured in the kernel-induced feature space, the same space
    the virtual samples are interpolated in. m = k is noise, m >= ceil(k/2)
    conservative, anything below aggressive; the midpoint m = k/2 for even k
    counts as conservative.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    if k >= train.n:
        raise ValueError(f"k = {k} must be smaller than the dataset size {train.n}")
    d2 = pairwise_kernel_distance2(spec, train.features[idx][None, :], train.features)[0]
    neighbors = _k_nearest(d2, idx, k)
    m = int((train.labels[neighbors] == -1).sum())
    if m == k:
        case = SampleCase.NOISE
    elif m >= (k + 1) // 2:
        case = SampleCase.CONSERVATIVE
    else:
        case = SampleCase.AGGRESSIVE
    return NeighborCase(case=case, m=m, k=k)


def _draw_delta(rng: np.random.Generator, case: SampleCase) -> float:
    u = rng.uniform()
    while u == 0.0:  # keep the interval open
        u = rng.uniform()
    return u if case is SampleCase.CONSERVATIVE else -u


def build_plan(
    train: Dataset,
    taxonomy: SvTaxonomy,
    spec: KernelSpec,
    k: int,
    s: int,
    seed: int,
) -> SynthesisPlan:
    """Draw s virtual samples around the eligible minority support vectors.

    The base sample is drawn (with replacement) from the distance-weighted
    distribution over non-noise support vectors; its partner is drawn
    uniformly from the base's k nearest minority neighbors; delta is uniform
    over (0, 1) or (-1, 0) according to the base's neighborhood case.
    """
    if s < 1:
        raise ValueError("s must be >= 1")
    minority = np.flatnonzero(train.minority_mask)
    if len(minority) < 2:
        raise ValueError("minority class must have at least 2 samples to interpolate")

    sv_idx = taxonomy.sv_indices
    if len(sv_idx) == 0:
        raise ValueError("no minority support vectors; the base model classifies every minority sample as safe")
    cases = {int(i): classify_neighborhood(int(i), train, spec, k).case for i in sv_idx}
    eligible = np.array([i for i in sv_idx if cases[int(i)] is not SampleCase.NOISE], dtype=int)
    if len(eligible) == 0:
        raise ValueError(
            "all minority support vectors classified as noise; consider a larger k or a different kernel"
        )

    eligible_mask = np.isin(taxonomy.indices, eligible)
    weights = sv_weights(taxonomy.distances[eligible_mask], taxonomy.indices[eligible_mask])

    # k nearest minority neighbors of each eligible base, feature-space metric
    d2 = pairwise_kernel_distance2(spec, train.features[eligible], train.features[minority])
    partners = {}
    for row, i in enumerate(eligible):
        self_pos = np.flatnonzero(minority == i)
        pos = _k_nearest(d2[row], int(self_pos[0]) if len(self_pos) else None, min(k, len(minority) - 1))
        partners[int(i)] = minority[pos]

    rng = np.random.default_rng(seed)
    bases = rng.choice(weights.indices, size=s, p=weights.probabilities)
    entries = []
    for b in bases:
        b = int(b)
        j = int(rng.choice(partners[b]))
        case = cases[b]
        entries.append(PlanEntry(i=b, j=j, delta=_draw_delta(rng, case), case=case))
    entries.sort(key=lambda e: 0 if e.case is SampleCase.CONSERVATIVE else 1)
    return SynthesisPlan(entries=tuple(entries))


@dataclass(frozen=True)
class Diagnostics:
    """Counts emitted by the pipeline for inspection and benchmark logs."""

    taxonomy_counts: dict[str, int]
    case_counts: dict[str, int]
    noise_count: int
    n_synthetic: int
    seed: int
    base_converged: bool
    final_converged: bool

    def report(self) -> str:
        lines = ["minority margin taxonomy:"]
        for name, count in self.taxonomy_counts.items():
            lines.append(f"  {name}: {count}")
        lines.append("support-vector neighborhood cases:")
        for name, count in self.case_counts.items():
            lines.append(f"  {name}: {count}")
        lines.append(f"noise support vectors excluded: {self.noise_count}")
        lines.append(f"virtual samples generated: {self.n_synthetic}")
        lines.append(f"seed: {self.seed}")
        lines.append(f"base solver converged: {self.base_converged}")
        lines.append(f"final solver converged: {self.final_converged}")
        return "\n".join(lines)


@dataclass(frozen=True)
class MMModel:
    """Everything the fitted pipeline produced, ready for prediction."""

    base_model: TrainedModel
    plan: SynthesisPlan
    augmented: AugmentedKernel
    model: TrainedModel
    X_train: np.ndarray
    spec: KernelSpec
    diagnostics: Diagnostics


def fit_mm_smote(
    train: Dataset,
    spec: KernelSpec,
    C: float = 1.0,
    k: int = 5,
    s: int | None = None,
    tol: float = 1e-3,
    max_passes: int = 10_000,
    seed: int = 0,
) -> MMModel:
    """Run the full pipeline: base SVM, weighting, planning, augmented retrain.

    s defaults to the majority surplus (majority count - minority count),
    i.e. full balancing; s = 0 degenerates to the plain SVM.
    """
    if train.minority_count < 2:
        raise ValueError("minority class must have at least 2 samples")
    X = train.features
    y = train.labels
    base_gram = gram(spec, X)
    base = train_smo(base_gram, y, C, tol=tol, max_passes=max_passes, seed=seed)
    taxonomy = classify_minority_svs(base, base_gram, y)

    if s is None:
        s = train.majority_count - train.minority_count

    sv_cases = {int(i): classify_neighborhood(int(i), train, spec, k).case for i in taxonomy.sv_indices}
    case_counts = {c.value: sum(1 for v in sv_cases.values() if v is c) for c in SampleCase}

    if s > 0:
        plan = build_plan(train, taxonomy, spec, k=k, s=s, seed=seed)
    else:
        plan = SynthesisPlan(entries=())
    augmented = augment_gram(base_gram, spec, X, y, plan)
    c_vec = np.full(augmented.n, float(C))
    final = train_smo(augmented, augmented.labels, c_vec, tol=tol, max_passes=max_passes, seed=seed)

    diagnostics = Diagnostics(
        taxonomy_counts=taxonomy.counts(),
        case_counts=case_counts,
        noise_count=case_counts[SampleCase.NOISE.value],
        n_synthetic=len(plan),
        seed=seed,
        base_converged=base.converged,
        final_converged=final.converged,
    )
    return MMModel(
        base_model=base,
        plan=plan,
        augmented=augmented,
        model=final,
        X_train=X,
        spec=spec,
        diagnostics=diagnostics,
    )


def mm_decision_values(model: MMModel, X: np.ndarray) -> np.ndarray:
    """Raw decision values of the final classifier on new points."""
    rows = augmented_rows(model.spec, X, model.X_train, model.plan)
    return rows @ (model.model.alpha * model.model.labels) + model.model.bias


def predict_mm(model: MMModel, X: np.ndarray) -> np.ndarray:
    """Predict +/-1 labels for new points; an exact zero maps to +1."""
    rows = augmented_rows(model.spec, X, model.X_train, model.plan)
    return predict(model.model, rows)
