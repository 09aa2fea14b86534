"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run with `pytest tests/test_acceptance.py -v -s` to see the per-criterion
lines. Criterion 9 needs the credit-card CSV (not redistributable): point
MMSMOTE_KAGGLE_CSV at it to enable the test.
"""

import json
import os
import time

import numpy as np
import pytest

from mmsmote.bench import config_from_dict, run_experiment
from mmsmote.cli import main
from mmsmote.data import Dataset, gen_gaussian_blobs, standardize
from mmsmote.kernels import (
    KernelSpec,
    PlanEntry,
    SampleCase,
    SynthesisPlan,
    augment_gram,
    cross_gram,
    gram,
)
from mmsmote.metrics import scores_from_pr
from mmsmote.oversample import build_plan, classify_neighborhood, fit_mm_smote, predict_mm, sv_weights
from mmsmote.reference import REFERENCE_ROWS
from mmsmote.svm import MarginStatus, SvTaxonomy, predict, train_smo
from oracles import kkt_violation, poly2_features, qp_reference, random_qp_instance, realize_plan_points

LIN = KernelSpec.linear()
POLY = KernelSpec.polynomial(2, 1.0)


def report(n, name, ok, detail=""):
    line = f"[criterion {n}] {name}: {'PASS' if ok else 'FAIL'}"
    if detail:
        line += f" — {detail}"
    print(line)
    return line


def test_criterion_1_metric_arithmetic():
    t0 = time.perf_counter()
    bad = []
    for ratio, method, p, r, f1, g in REFERENCE_ROWS:
        rep = scores_from_pr(p, r)
        if abs(rep.f1 - f1) > 5e-4 or abs(rep.gmean - g) > 5e-4:
            bad.append(f"{ratio:g}:1 {method} (printed F1 {f1:.4f}/G {g:.4f}, recomputed {rep.f1:.4f}/{rep.gmean:.4f})")
    elapsed = time.perf_counter() - t0
    detail = f"{30 - len(bad)}/30 rows within ±0.0005 in {elapsed:.2f}s"
    if bad:
        detail += "; inconsistent rows: " + "; ".join(bad)
    line = report(1, "metric arithmetic over all published rows", not bad and elapsed < 1.0, detail)
    assert elapsed < 1.0
    assert not bad, line


def _random_plan_dataset(rng):
    n = int(rng.integers(10, 61))
    d = int(rng.integers(1, 6))
    X = rng.standard_normal((n, d))
    y = -np.ones(n, dtype=int)
    y[rng.permutation(n)[: max(2, n // 4)]] = 1
    minority = np.flatnonzero(y == 1)
    s = int(rng.integers(1, 41))
    entries = []
    for _ in range(s):
        i, j = rng.choice(minority, size=2, replace=False)
        case = SampleCase.CONSERVATIVE if rng.uniform() < 0.5 else SampleCase.AGGRESSIVE
        sign = 1.0 if case is SampleCase.CONSERVATIVE else -1.0
        entries.append(PlanEntry(int(i), int(j), sign * float(rng.uniform(1e-6, 1 - 1e-6)), case))
    entries.sort(key=lambda e: 0 if e.case is SampleCase.CONSERVATIVE else 1)
    return X, y, SynthesisPlan(tuple(entries))


AUG_MIN_EIGS = []


def test_criterion_2_augmentation_oracle():
    t0 = time.perf_counter()
    rng = np.random.default_rng(2024)
    worst_lin = worst_poly = 0.0
    AUG_MIN_EIGS.clear()
    for _ in range(100):
        X, y, plan = _random_plan_dataset(rng)
        A_lin = augment_gram(gram(LIN, X), LIN, X, y, plan)
        explicit_lin = gram(LIN, np.vstack([X, realize_plan_points(X, plan)])).matrix
        worst_lin = max(worst_lin, float(np.abs(A_lin.matrix - explicit_lin).max()))

        A_poly = augment_gram(gram(POLY, X), POLY, X, y, plan)
        Phi = poly2_features(X, POLY.coef0)
        Phi_aug = np.vstack([Phi, realize_plan_points(Phi, plan)])
        worst_poly = max(worst_poly, float(np.abs(A_poly.matrix - Phi_aug @ Phi_aug.T).max()))

        AUG_MIN_EIGS.append(float(np.linalg.eigvalsh(A_lin.matrix)[0]))
        AUG_MIN_EIGS.append(float(np.linalg.eigvalsh(A_poly.matrix)[0]))
    elapsed = time.perf_counter() - t0
    ok = worst_lin < 1e-10 and worst_poly < 1e-8 and elapsed < 30.0
    line = report(
        2,
        "augmented kernel equals explicit-coordinate Gram",
        ok,
        f"100 datasets; worst linear dev {worst_lin:.1e} (tol 1e-10), worst poly dev {worst_poly:.1e} (tol 1e-8), {elapsed:.1f}s",
    )
    assert ok, line


def test_criterion_3_augmented_kernels_psd():
    if not AUG_MIN_EIGS:
        test_criterion_2_augmentation_oracle()
    worst = min(AUG_MIN_EIGS)
    ok = worst >= -1e-8
    line = report(3, "augmented kernels positive semidefinite", ok, f"min eigenvalue {worst:.2e} (floor -1e-8)")
    assert ok, line


def test_criterion_4_solver_oracle():
    t0 = time.perf_counter()
    rng = np.random.default_rng(4)
    worst_gap = worst_kkt = 0.0
    for _ in range(200):
        K, y, C = random_qp_instance(rng)
        ref_obj, _ = qp_reference(K, y, C)
        model = train_smo(K, y, C, tol=1e-9, max_passes=100_000)
        worst_gap = max(worst_gap, abs(model.objective - ref_obj))
        worst_kkt = max(worst_kkt, kkt_violation(model.alpha, model.bias, y, K, C))
    elapsed = time.perf_counter() - t0
    ok = worst_gap <= 1e-6 and worst_kkt <= 1e-3 and elapsed < 60.0
    line = report(
        4,
        "solver matches brute-force QP oracle",
        ok,
        f"200 instances; worst objective gap {worst_gap:.1e} (tol 1e-6), worst KKT violation {worst_kkt:.1e} (tol 1e-3), {elapsed:.1f}s",
    )
    assert ok, line


def test_criterion_5_end_to_end_linear_oracle():
    t0 = time.perf_counter()
    rng = np.random.default_rng(55)
    checked = 0
    for trial in range(20):
        n_maj = int(rng.integers(35, 60))
        n_min = int(rng.integers(10, 16))
        ds = gen_gaussian_blobs(n_maj, n_min, float(rng.uniform(1.0, 1.5)), 2, seed=int(rng.integers(1 << 31)))
        (ds,), _ = standardize(ds)
        mm = fit_mm_smote(ds, LIN, C=2.0, k=3, tol=1e-8, max_passes=200_000, seed=trial)

        X_aug = np.vstack([ds.features, realize_plan_points(ds.features, mm.plan)])
        y_aug = np.concatenate([ds.labels, np.ones(len(mm.plan), dtype=int)])
        explicit = train_smo(gram(LIN, X_aug), y_aug, 2.0, tol=1e-8, max_passes=200_000, seed=trial)

        lo = ds.features.min(axis=0) - 1.0
        hi = ds.features.max(axis=0) + 1.0
        gx, gy = np.meshgrid(np.linspace(lo[0], hi[0], 50), np.linspace(lo[1], hi[1], 50))
        grid = np.column_stack([gx.ravel(), gy.ravel()])
        pred_kernel = predict_mm(mm, grid)
        pred_explicit = predict(explicit, cross_gram(LIN, grid, X_aug))
        assert np.array_equal(pred_kernel, pred_explicit), f"sign mismatch on trial {trial}"
        checked += 1
    elapsed = time.perf_counter() - t0
    ok = checked == 20 and elapsed < 60.0
    line = report(
        5,
        "kernel-space pipeline equals explicit interpolation + retraining",
        ok,
        f"{checked}/20 datasets sign-exact on 50x50 grids, {elapsed:.1f}s",
    )
    assert ok, line


def test_criterion_6_directional_reproduction(tmp_path):
    # Committed configuration: separation tuned so the plain-SVM recall
    # grand mean sits inside [0.5, 0.8]. At 2:1 the plain model is close to
    # its ceiling, so that cell's G-mean margin is small; all other ratios
    # win by wide margins.
    t0 = time.perf_counter()
    cfg = config_from_dict(
        {
            "source": {"blobs": {"n_majority": 2000, "n_minority": 100, "separation": 1.85, "dim": 5}},
            "ratios": [2, 4, 6, 8, 10],
            "methods": ["plain_svm", "mm_smote"],
            "repetitions": 5,
            "master_seed": 0,
            "c": 0.065,
            "k": 5,
            "tol": 1e-4,
            "max_passes": 300000,
            "test_fraction": 0.5,
            "output": str(tmp_path / "directional.csv"),
        }
    )
    run_experiment(cfg)
    lines = (tmp_path / "directional.csv").read_text().strip().split("\n")
    header = lines[0].split(",")
    means = {}
    for line in lines[1:]:
        row = dict(zip(header, line.split(",")))
        if row["rep"] == "mean":
            assert row["status"] == "ok", f"cell {row['ratio']} {row['method']} had failures"
            means[(float(row["ratio"]), row["method"])] = (float(row["recall"]), float(row["gmean"]))

    ratios = (2.0, 4.0, 6.0, 8.0, 10.0)
    plain_recalls = [means[(r, "plain_svm")][0] for r in ratios]
    gmean_wins = [means[(r, "mm_smote")][1] > means[(r, "plain_svm")][1] for r in ratios]
    recall_gap = float(np.mean([means[(r, "mm_smote")][0] for r in ratios]) - np.mean(plain_recalls))
    grand_recall = float(np.mean(plain_recalls))
    elapsed = time.perf_counter() - t0

    per_ratio = ", ".join(
        f"{r:g}:1 dG={means[(r, 'mm_smote')][1] - means[(r, 'plain_svm')][1]:+.3f}" for r in ratios
    )
    ok = all(gmean_wins) and recall_gap >= 0.05 and 0.5 <= grand_recall <= 0.8 and elapsed < 600.0
    line = report(
        6,
        "oversampling beats the plain SVM at every ratio",
        ok,
        f"plain recall grand mean {grand_recall:.3f} (window [0.5, 0.8]); {per_ratio}; "
        f"recall gap {recall_gap:+.3f} (>= 0.05); {elapsed:.0f}s",
    )
    assert 0.5 <= grand_recall <= 0.8, line
    assert all(gmean_wins), line
    assert recall_gap >= 0.05, line
    assert elapsed < 600.0, line


def test_criterion_7_bench_determinism(tmp_path):
    doc = {
        "source": {"blobs": {"n_majority": 200, "n_minority": 40, "separation": 1.2, "dim": 2}},
        "ratios": [2, 4],
        "methods": ["plain_svm", "mm_smote"],
        "repetitions": 2,
        "master_seed": 11,
        "output": str(tmp_path / "a.csv"),
    }
    cfg_path = tmp_path / "cfg.json"
    cfg_path.write_text(json.dumps(doc))
    assert main(["bench", "--config", str(cfg_path)]) == 0
    first = (tmp_path / "a.csv").read_bytes()
    assert main(["bench", "--config", str(cfg_path)]) == 0
    ok = (tmp_path / "a.csv").read_bytes() == first
    line = report(7, "repeated bench runs are byte-identical", ok, f"{len(first)} bytes compared")
    assert ok, line


def test_criterion_8_weight_and_plan_properties():
    t0 = time.perf_counter()
    # weights are a monotone probability distribution
    rng = np.random.default_rng(8)
    sums_ok = monotone_ok = True
    for _ in range(50):
        d = np.sort(rng.uniform(0, 4, size=int(rng.integers(1, 12))))
        w = sv_weights(d).probabilities
        sums_ok &= abs(float(w.sum()) - 1.0) <= 1e-12
        monotone_ok &= bool((np.diff(w) < 1e-15).all())

    # 1e5 categorical draws through the real planning path: three eligible
    # support vectors at distances (0, 1, 2) plus one noise support vector
    cluster = np.array([[0.0, 0.0], [0.3, 0.0], [0.0, 0.3], [0.3, 0.3], [0.15, 0.15], [0.45, 0.15]])
    buried = np.array([[10.0, 10.0]])
    wall = np.array([[10.0 + 0.1 * t, 10.3] for t in range(6)])
    far_majority = np.array([[30.0 + t, 30.0] for t in range(6)])
    X = np.vstack([cluster, buried, wall, far_majority])
    y = np.array([1] * 7 + [-1] * 12)
    ds = Dataset(X, y, np.arange(len(y)))
    sv_rows = (0, 1, 2, 6)  # rows 0-2 eligible, row 6 buried in the wall
    minority = np.flatnonzero(ds.minority_mask)
    status = tuple(
        MarginStatus.IN_MARGIN if i in sv_rows else MarginStatus.SAFE for i in minority
    )
    distances = np.array([0.0, 1.0, 2.0, 9.9, 9.9, 9.9, 0.05])  # row 6 closest-but-noise
    taxonomy = SvTaxonomy(
        indices=minority, status=status, margins=np.ones(7), distances=distances, w_norm=1.0
    )
    for i in (0, 1, 2):
        assert classify_neighborhood(i, ds, LIN, 5).case is not SampleCase.NOISE
    assert classify_neighborhood(6, ds, LIN, 5).case is SampleCase.NOISE

    plan = build_plan(ds, taxonomy, LIN, k=5, s=100_000, seed=88)
    counts = np.zeros(3)
    deltas_ok = True
    noise_selected = 0
    for e in plan.entries:
        if e.i == 6:
            noise_selected += 1
            continue
        counts[e.i] += 1
        lo, hi = (0.0, 1.0) if e.case is SampleCase.CONSERVATIVE else (-1.0, 0.0)
        deltas_ok &= lo < e.delta < hi
    freqs = counts / len(plan)
    expected = np.array([0.66524, 0.24473, 0.09003])
    freq_ok = bool(np.abs(freqs - expected).max() <= 0.01)
    elapsed = time.perf_counter() - t0

    ok = sums_ok and monotone_ok and freq_ok and deltas_ok and noise_selected == 0
    line = report(
        8,
        "selection weights and plan draws behave",
        ok,
        f"sums within 1e-12: {sums_ok}; strictly decreasing: {monotone_ok}; "
        f"1e5-draw frequencies {np.round(freqs, 5).tolist()} vs {expected.tolist()} (±0.01): {freq_ok}; "
        f"deltas strictly inside intervals: {deltas_ok}; noise draws: {noise_selected}; {elapsed:.1f}s",
    )
    assert ok, line


KAGGLE_CSV = os.environ.get("MMSMOTE_KAGGLE_CSV", "")


@pytest.mark.skipif(not KAGGLE_CSV, reason="set MMSMOTE_KAGGLE_CSV to the credit-card CSV to run")
def test_criterion_9_kaggle_70_to_1(tmp_path, capfd):
    cfg = config_from_dict(
        {
            "source": {"csv": {"path": KAGGLE_CSV, "label_column": "Class", "positive_value": "1"}},
            "ratios": [70],
            "methods": ["plain_svm", "mm_smote"],
            "repetitions": 1,
            "master_seed": 0,
            "max_passes": 1000000,
            "output": str(tmp_path / "kaggle.csv"),
        }
    )
    run_experiment(cfg)
    err = capfd.readouterr().err
    assert "diagnostics" in err  # taxonomy and case counts were emitted
    lines = (tmp_path / "kaggle.csv").read_text().strip().split("\n")
    header = lines[0].split(",")
    rows = {r["method"]: r for r in (dict(zip(header, l.split(","))) for l in lines[1:]) if r["rep"] == "0"}
    ok = (
        rows["plain_svm"]["status"] == "ok"
        and rows["mm_smote"]["status"] == "ok"
        and float(rows["mm_smote"]["gmean"]) > float(rows["plain_svm"]["gmean"])
    )
    line = report(
        9,
        "70:1 credit-card protocol end to end",
        ok,
        f"plain G {rows['plain_svm']['gmean']}, oversampled G {rows['mm_smote']['gmean']}",
    )
    assert ok, line
