"""Batch experiment harness: ratios x methods x repetitions -> metric table.

Every cell derives its own seed from (master seed, ratio, method, rep), so
adding a method or ratio never perturbs the other cells, and rerunning the
same config reproduces the output file byte for byte. Wall-clock training
time is always logged to stderr; it only enters the CSV when the config
sets timing=true, because measured time would break byte-level determinism.
"""

from __future__ import annotations

import hashlib
import json
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .baselines import METHODS, class_weight_vector, random_undersample, smote
from .data import Dataset, RatioSpec, gen_gaussian_blobs, load_csv, make_ratio_dataset, standardize, stratified_split
from .kernels import KernelSpec, cross_gram, default_rbf, gram
from .metrics import confusion, scores
from .oversample import MMModel, fit_mm_smote, predict_mm
from .svm import predict, train_smo

OUTPUT_COLUMNS = ("ratio", "method", "rep", "seed", "precision", "recall", "f1", "gmean", "train_ms", "status")
WORKERS_ENV = "MMSMOTE_WORKERS"


class ConfigError(ValueError):
    """Invalid experiment configuration (exit code 1 at the CLI)."""


class DataError(ValueError):
    """Data could not be loaded or shaped as requested (exit code 2 at the CLI)."""


@dataclass(frozen=True)
class CsvSource:
    path: str
    label_column: str = "Class"
    positive_value: str = "1"


@dataclass(frozen=True)
class BlobsSource:
    n_majority: int = 2000
    n_minority: int = 100
    separation: float = 1.0
    dim: int = 5


@dataclass(frozen=True)
class ExperimentConfig:
    """Everything one bench run needs; see from_dict for the file schema."""

    source: CsvSource | BlobsSource
    ratios: tuple[float, ...] = (2.0, 4.0, 6.0, 8.0, 10.0)
    methods: tuple[str, ...] = METHODS
    repetitions: int = 1
    master_seed: int = 0
    kernel: KernelSpec | None = None  # None: rbf, gamma from training variance
    c: float = 1.0
    k: int = 5
    tol: float = 1e-3
    max_passes: int = 10_000
    test_fraction: float = 0.3
    n_clusters: int = 8
    timing: bool = False
    output: str = "results.csv"

    def __post_init__(self):
        if not self.ratios or any(r < 1 for r in self.ratios):
            raise ConfigError("ratios must be a non-empty list of values >= 1")
        if not self.methods:
            raise ConfigError("methods must be non-empty")
        for m in self.methods:
            if m not in METHODS:
                raise ConfigError(f"unknown method {m!r}; expected one of {METHODS}")
        if self.repetitions < 1:
            raise ConfigError("repetitions must be >= 1")
        if not 0 < self.test_fraction < 1:
            raise ConfigError("test_fraction must lie in (0, 1)")


def _kernel_from_dict(d: dict) -> KernelSpec:
    family = d.get("family")
    try:
        if family == "linear":
            return KernelSpec.linear()
        if family == "polynomial":
            return KernelSpec.polynomial(int(d["degree"]), float(d.get("coef0", 1.0)))
        if family == "rbf":
            return KernelSpec.rbf(float(d["gamma"]))
    except (KeyError, TypeError, ValueError) as e:
        raise ConfigError(f"bad kernel spec {d!r}: {e}") from None
    raise ConfigError(f"unknown kernel family {family!r}")


def config_from_dict(d: dict) -> ExperimentConfig:
    """Build a config from a parsed JSON document.

    Schema (all keys except `source` optional, defaults in parentheses):
        source: {"csv": {"path", "label_column"("Class"), "positive_value"("1")}}
                or {"blobs": {"n_majority"(2000), "n_minority"(100),
                              "separation"(1.0), "dim"(5)}}
        ratios ([2,4,6,8,10]), methods (all five), repetitions (1),
        master_seed (0), kernel (variance-scaled rbf; or {"family": ...}),
        c (1.0), k (5), tol (1e-3), max_passes (10000),
        test_fraction (0.3), n_clusters (8), timing (false),
        output ("results.csv").
    """
    if not isinstance(d, dict):
        raise ConfigError("config document must be a JSON object")
    src = d.get("source")
    if not isinstance(src, dict) or len(src) != 1 or next(iter(src)) not in ("csv", "blobs"):
        raise ConfigError('config needs a source: {"csv": {...}} or {"blobs": {...}}')
    kind, body = next(iter(src.items()))
    try:
        source = CsvSource(**body) if kind == "csv" else BlobsSource(**body)
    except TypeError as e:
        raise ConfigError(f"bad source {body!r}: {e}") from None

    known = {
        "ratios", "methods", "repetitions", "master_seed", "kernel", "c", "k",
        "tol", "max_passes", "test_fraction", "n_clusters", "timing", "output",
    }
    extra = set(d) - known - {"source"}
    if extra:
        raise ConfigError(f"unknown config keys: {sorted(extra)}")
    kwargs = {key: d[key] for key in known if key in d}
    if "ratios" in kwargs:
        kwargs["ratios"] = tuple(float(r) for r in kwargs["ratios"])
    if "methods" in kwargs:
        kwargs["methods"] = tuple(kwargs["methods"])
    if "kernel" in kwargs:
        kwargs["kernel"] = _kernel_from_dict(kwargs["kernel"])
    try:
        return ExperimentConfig(source=source, **kwargs)
    except (TypeError, ValueError) as e:
        raise ConfigError(str(e)) from None


def load_config(path) -> ExperimentConfig:
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except FileNotFoundError:
        raise ConfigError(f"config file not found: {path}") from None
    except json.JSONDecodeError as e:
        raise ConfigError(f"{path}: invalid JSON ({e})") from None
    return config_from_dict(doc)


def child_seed(master_seed: int, ratio: float, method: str, rep: int) -> int:
    """Deterministic per-cell seed, independent of the other cells."""
    key = f"{master_seed}|{float(ratio)!r}|{method}|{rep}".encode()
    return int.from_bytes(hashlib.sha256(key).digest()[:8], "little")


def _load_source(source, master_seed: int) -> Dataset:
    if isinstance(source, CsvSource):
        try:
            return load_csv(source.path, source.label_column, source.positive_value)
        except (OSError, ValueError) as e:
            raise DataError(str(e)) from None
    return gen_gaussian_blobs(
        source.n_majority, source.n_minority, source.separation, source.dim,
        seed=child_seed(master_seed, 0.0, "blobs-source", 0),
    )


def fit_predict(method: str, train: Dataset, test: Dataset, kspec: KernelSpec, cfg: ExperimentConfig, seed: int):
    """Fit one named method on train and predict test; returns (pred, model, fit_train)."""
    if method == "mm_smote":
        mm = fit_mm_smote(
            train, kspec, C=cfg.c, k=cfg.k, tol=cfg.tol, max_passes=cfg.max_passes, seed=seed
        )
        return predict_mm(mm, test.features), mm, train

    if method == "rus_svm":
        train = random_undersample(train, 1.0, seed)
    elif method == "smote_svm":
        surplus = train.majority_count - train.minority_count
        train = smote(train, cfg.k, surplus, seed)

    if method == "class_weighted_svm":
        c_vec = class_weight_vector(train.labels, cfg.c)
    else:
        c_vec = np.full(train.n, cfg.c)

    K = gram(kspec, train.features)
    model = train_smo(K, train.labels, c_vec, tol=cfg.tol, max_passes=cfg.max_passes, seed=seed)
    return predict(model, cross_gram(kspec, test.features, train.features)), model, train


def run_cell(source_ds: Dataset, cfg: ExperimentConfig, ratio: float, method: str, rep: int) -> dict:
    """One (ratio, method, rep) experiment; errors land in the status field."""
    seed = child_seed(cfg.master_seed, ratio, method, rep)
    ratio_seed, split_seed, fit_seed = (
        int(x) for x in np.random.SeedSequence(seed).generate_state(3, dtype=np.uint64)
    )
    row = {"ratio": ratio, "method": method, "rep": rep, "seed": seed}
    try:
        shaped = make_ratio_dataset(source_ds, RatioSpec(ratio, cfg.n_clusters, ratio_seed))
        train, test = stratified_split(shaped, cfg.test_fraction, split_seed)
        (train, test), _ = standardize(train, (test,))
        kspec = cfg.kernel or default_rbf(train.features)
        t0 = time.perf_counter()
        pred, fitted, _ = fit_predict(method, train, test, kspec, cfg, fit_seed)
        elapsed_ms = (time.perf_counter() - t0) * 1000.0
        if isinstance(fitted, MMModel):
            d = fitted.diagnostics
            print(
                f"[bench] diagnostics ratio {ratio:g} rep {rep}: "
                + " ".join(f"{k}={v}" for k, v in d.taxonomy_counts.items())
                + " | " + " ".join(f"{k}={v}" for k, v in d.case_counts.items())
                + f" | synthetic={d.n_synthetic}",
                file=sys.stderr,
            )
        rep_scores = scores(confusion(test.labels, pred))
        row.update(
            precision=rep_scores.precision,
            recall=rep_scores.recall,
            f1=rep_scores.f1,
            gmean=rep_scores.gmean,
            train_ms=elapsed_ms,
            status="ok",
        )
    except Exception as e:  # keep the batch going; the row records the failure
        row.update(precision=None, recall=None, f1=None, gmean=None, train_ms=None, status=f"error:{type(e).__name__}")
    return row


def _run_cell_args(args):
    return run_cell(*args)


def _format_row(row: dict, timing: bool) -> list[str]:
    def num(x, fmt="{:.6f}"):
        return "" if x is None else fmt.format(x)

    train_ms = "" if row["train_ms"] is None else ("{:.3f}".format(row["train_ms"]) if timing else "0.000")
    return [
        "{:g}".format(row["ratio"]),
        row["method"],
        str(row["rep"]),
        str(row["seed"]),
        num(row["precision"]),
        num(row["recall"]),
        num(row["f1"]),
        num(row["gmean"]),
        train_ms,
        row["status"],
    ]


def _mean_row(cell_rows: list[dict]) -> dict:
    ok = [r for r in cell_rows if r["status"] == "ok"]
    base = {"ratio": cell_rows[0]["ratio"], "method": cell_rows[0]["method"], "rep": "mean", "seed": ""}
    if not ok:
        base.update(precision=None, recall=None, f1=None, gmean=None, train_ms=None, status="error")
        return base
    base.update(
        precision=float(np.mean([r["precision"] for r in ok])),
        recall=float(np.mean([r["recall"] for r in ok])),
        f1=float(np.mean([r["f1"] for r in ok])),
        gmean=float(np.mean([r["gmean"] for r in ok])),
        train_ms=float(np.mean([r["train_ms"] for r in ok])),
        status="ok" if len(ok) == len(cell_rows) else f"ok:{len(ok)}/{len(cell_rows)}",
    )
    return base


def run_experiment(cfg: ExperimentConfig) -> str:
    """Run every cell, write the result table, and return the output path."""
    source_ds = _load_source(cfg.source, cfg.master_seed)
    cells = [
        (ratio, method, rep)
        for ratio in sorted(cfg.ratios)
        for method in sorted(cfg.methods)
        for rep in range(cfg.repetitions)
    ]

    workers = int(os.environ.get(WORKERS_ENV, "1"))
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_run_cell_args, [(source_ds, cfg, r, m, p) for r, m, p in cells]))
    else:
        results = [run_cell(source_ds, cfg, r, m, p) for r, m, p in cells]

    by_cell: dict[tuple, list[dict]] = {}
    for (ratio, method, rep), row in zip(cells, results):
        by_cell.setdefault((ratio, method), []).append(row)
        ms = "-" if row["train_ms"] is None else f"{row['train_ms']:.1f} ms"
        print(f"[bench] ratio {ratio:g} {method} rep {rep}: {row['status']} ({ms})", file=sys.stderr)

    lines = [",".join(OUTPUT_COLUMNS)]
    for key in sorted(by_cell):
        rows = by_cell[key]
        for row in rows:
            lines.append(",".join(_format_row(row, cfg.timing)))
        lines.append(",".join(_format_row(_mean_row(rows), cfg.timing)))
    with open(cfg.output, "w", newline="") as fh:
        fh.write("\n".join(lines) + "\n")
    return cfg.output
