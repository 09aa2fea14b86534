"""How virtual samples live inside the kernel matrix.

A synthesis-plan entry (i, j, delta) stands for the feature-space point
phi(x_i) + delta (phi(x_j) - phi(x_i)). For the linear kernel the feature
map is the identity, so we can materialize those points explicitly and
check that the augmented kernel matrix is exactly the Gram matrix of the
enlarged dataset. The same augmentation then works for any kernel with no
coordinates at all.
"""

import numpy as np

from mmsmote import (
    KernelSpec,
    PlanEntry,
    SampleCase,
    SynthesisPlan,
    augment_gram,
    augmented_row,
    gram,
)

rng = np.random.default_rng(0)
X = rng.standard_normal((8, 3))
y = np.array([1, 1, 1, 1, -1, -1, -1, -1])

plan = SynthesisPlan(
    (
        PlanEntry(i=0, j=2, delta=0.4, case=SampleCase.CONSERVATIVE),   # interpolate
        PlanEntry(i=1, j=3, delta=-0.7, case=SampleCase.AGGRESSIVE),    # extrapolate
    )
)

linear = KernelSpec.linear()
augmented = augment_gram(gram(linear, X), linear, X, y, plan)
print(f"augmented kernel: {augmented.n_original} original + {augmented.n_synthetic} virtual rows")

# materialize the two virtual points by hand and compare
x_a = X[0] + 0.4 * (X[2] - X[0])
x_b = X[1] + -0.7 * (X[3] - X[1])
explicit = gram(linear, np.vstack([X, x_a, x_b])).matrix
print("max |augmented - explicit| =", np.abs(augmented.matrix - explicit).max())

# a test point's kernel row against originals + virtuals, still coordinate-free
rbf = KernelSpec.rbf(0.5)
augmented_rbf = augment_gram(gram(rbf, X), rbf, X, y, plan)
row = augmented_row(rbf, rng.standard_normal(3), X, plan)
print("rbf kernel row length:", len(row), "(original entries + virtual expansions)")
print("rbf augmented kernel min eigenvalue:", np.linalg.eigvalsh(augmented_rbf.matrix)[0])
