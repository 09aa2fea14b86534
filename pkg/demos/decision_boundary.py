"""Plot how kernel-space oversampling moves the decision boundary.

Writes decision_boundary.png with the plain-SVM and oversampled boundaries
over a 2-D imbalanced dataset, marking the minority support vectors the
pipeline selected for oversampling.
"""

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from mmsmote import (
    classify_minority_svs,
    cross_gram,
    decision_values,
    default_rbf,
    fit_mm_smote,
    gen_gaussian_blobs,
    gram,
    mm_decision_values,
    standardize,
    train_smo,
)

ds = gen_gaussian_blobs(n_majority=300, n_minority=25, separation=1.8, dim=2, seed=3)
(ds,), _ = standardize(ds)
spec = default_rbf(ds.features)

K = gram(spec, ds.features)
plain = train_smo(K, ds.labels, 0.08)
taxonomy = classify_minority_svs(plain, K, ds.labels)
mm = fit_mm_smote(ds, spec, C=0.08, k=5, seed=3)

lo = ds.features.min(axis=0) - 1
hi = ds.features.max(axis=0) + 1
gx, gy = np.meshgrid(np.linspace(lo[0], hi[0], 300), np.linspace(lo[1], hi[1], 300))
grid = np.column_stack([gx.ravel(), gy.ravel()])
f_plain = decision_values(plain, cross_gram(spec, grid, ds.features)).reshape(gx.shape)
f_mm = mm_decision_values(mm, grid).reshape(gx.shape)

fig, ax = plt.subplots(figsize=(7, 6))
maj = ~ds.minority_mask
ax.scatter(*ds.features[maj].T, s=12, c="steelblue", alpha=0.5, label="majority")
ax.scatter(*ds.features[~maj].T, s=36, c="darkorange", marker="^", label="minority")
sv = taxonomy.sv_indices
ax.scatter(*ds.features[sv].T, s=120, facecolors="none", edgecolors="red", label="minority support vectors")
ax.contour(gx, gy, f_plain, levels=[0.0], colors="black", linestyles="--")
ax.contour(gx, gy, f_mm, levels=[0.0], colors="red")
ax.plot([], [], "k--", label="plain SVM boundary")
ax.plot([], [], "r-", label="oversampled boundary")
ax.legend(loc="upper left")
ax.set_title("Decision boundary before and after kernel-space oversampling")
fig.tight_layout()
fig.savefig("decision_boundary.png", dpi=120)
print("wrote decision_boundary.png")
print(f"virtual samples generated: {len(mm.plan)}")
