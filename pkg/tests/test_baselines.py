import numpy as np
import pytest

from mmsmote.baselines import BaselineSpec, class_weight_vector, random_undersample, smote
from mmsmote.data import Dataset, gen_gaussian_blobs


def test_spec_validation():
    BaselineSpec("plain_svm")
    with pytest.raises(ValueError):
        BaselineSpec("adaboost")
    with pytest.raises(ValueError):
        BaselineSpec("rus_svm", target_ratio=0.5)
    with pytest.raises(ValueError):
        BaselineSpec("smote_svm", smote_k=0)


def test_class_weights_balanced():
    y = np.array([1, 1, -1, -1])
    assert np.array_equal(class_weight_vector(y, 2.0), np.full(4, 2.0))


def test_class_weights_inverse_frequency():
    y = np.concatenate([np.ones(10, dtype=int), -np.ones(90, dtype=int)])
    w = class_weight_vector(y, 1.0)
    assert np.allclose(w[y == 1], 9.0)
    assert np.allclose(w[y == -1], 1.0)


def test_class_weights_70_to_1():
    y = np.concatenate([np.ones(2, dtype=int), -np.ones(140, dtype=int)])
    w = class_weight_vector(y, 0.5)
    assert np.allclose(w[y == 1], 0.5 * 70.0)


def test_smote_zero_samples_is_identity():
    ds = gen_gaussian_blobs(20, 5, 1.0, 2, seed=0)
    assert smote(ds, k=3, s=0, seed=1) is ds


def test_smote_interpolates_on_the_open_segment():
    ds = Dataset(
        np.array([[0.0, 0.0], [1.0, 0.0], [5.0, 5.0], [6.0, 5.0]]),
        np.array([1, 1, -1, -1]),
        np.arange(4),
    )
    out = smote(ds, k=1, s=10, seed=2)
    fresh = out.features[4:]
    assert np.array_equal(fresh[:, 1], np.zeros(10))  # collinear minority pair
    assert ((fresh[:, 0] > 0.0) & (fresh[:, 0] < 1.0)).all()
    assert (out.labels[4:] == 1).all()
    assert (out.ids[4:] > ds.ids.max()).all()


def test_smote_full_balance_counts():
    ds = gen_gaussian_blobs(100, 10, 2.0, 2, seed=3)
    out = smote(ds, k=5, s=90, seed=4)
    assert out.class_counts() == (100, 100)


def test_smote_synthetics_stay_in_minority_bounding_box():
    ds = gen_gaussian_blobs(50, 15, 1.0, 3, seed=5)
    out = smote(ds, k=5, s=200, seed=6)
    minority = ds.features[ds.minority_mask]
    fresh = out.features[ds.n:]
    assert (fresh >= minority.min(axis=0) - 1e-12).all()
    assert (fresh <= minority.max(axis=0) + 1e-12).all()


def test_smote_deterministic():
    ds = gen_gaussian_blobs(30, 8, 1.0, 2, seed=7)
    a = smote(ds, k=3, s=20, seed=8)
    b = smote(ds, k=3, s=20, seed=8)
    assert np.array_equal(a.features, b.features)


def test_smote_minority_of_one_rejected():
    ds = Dataset(np.zeros((3, 1)), np.array([1, -1, -1]), np.arange(3))
    with pytest.raises(ValueError, match="at least 2"):
        smote(ds, k=1, s=1, seed=0)


def test_undersample_to_balance():
    ds = gen_gaussian_blobs(100, 10, 2.0, 2, seed=9)
    out = random_undersample(ds, 1.0, seed=10)
    assert out.class_counts() == (10, 10)
    assert set(ds.ids[ds.minority_mask]) <= set(out.ids)


def test_undersample_at_current_ratio_is_permutation():
    ds = gen_gaussian_blobs(40, 10, 2.0, 2, seed=11)
    out = random_undersample(ds, 4.0, seed=12)
    assert sorted(out.ids.tolist()) == sorted(ds.ids.tolist())


def test_undersample_above_current_ratio_fails():
    ds = gen_gaussian_blobs(40, 10, 2.0, 2, seed=13)
    with pytest.raises(ValueError, match="exceeds available"):
        random_undersample(ds, 5.0, seed=0)
