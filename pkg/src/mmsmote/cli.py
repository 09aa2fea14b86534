"""Command-line surface.

    mmsmote bench --config cfg.json     run the full ratio x method protocol
    mmsmote fit ...                     fit one method, dump model + diagnostics
    mmsmote synth-demo ...              quick run of all methods on a blob fixture
    mmsmote check-tables                recheck the published-table F1/G-mean arithmetic

Exit codes: 0 success, 1 configuration/usage error, 2 data error.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import replace

from .baselines import METHODS
from .bench import (
    BlobsSource,
    ConfigError,
    DataError,
    ExperimentConfig,
    fit_predict,
    load_config,
    run_experiment,
)
from .data import gen_gaussian_blobs, load_csv, make_ratio_dataset, RatioSpec, standardize, stratified_split
from .kernels import KernelSpec, default_rbf, gram
from .metrics import confusion, scores
from .oversample import MMModel
from .reference import check_rows
from .svm import classify_minority_svs, save_model


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # usage problems are configuration errors: exit 1
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _build_parser() -> _Parser:
    parser = _Parser(prog="mmsmote", description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p_bench = sub.add_parser("bench", help="run the benchmark protocol from a JSON config")
    p_bench.add_argument("--config", required=True, help="path to the JSON experiment config")
    p_bench.add_argument("--output", help="override the config's output path")

    p_fit = sub.add_parser("fit", help="fit a single method and dump model + diagnostics")
    src = p_fit.add_mutually_exclusive_group(required=True)
    src.add_argument("--csv", help="CSV dataset path")
    src.add_argument("--blobs", metavar="MAJ,MIN,SEP,DIM", help="generate Gaussian blobs, e.g. 2000,100,1.0,5")
    p_fit.add_argument("--label-column", default="Class")
    p_fit.add_argument("--positive-value", default="1")
    p_fit.add_argument("--method", default="mm_smote", choices=METHODS)
    p_fit.add_argument("--ratio", type=float, help="shrink the majority to this ratio before splitting")
    p_fit.add_argument("--kernel", default="rbf", choices=("linear", "polynomial", "rbf"))
    p_fit.add_argument("--gamma", type=float, help="rbf gamma; default scales with training variance")
    p_fit.add_argument("--degree", type=int, default=2)
    p_fit.add_argument("--coef0", type=float, default=1.0)
    p_fit.add_argument("--c", type=float, default=1.0)
    p_fit.add_argument("--k", type=int, default=5)
    p_fit.add_argument("--tol", type=float, default=1e-3)
    p_fit.add_argument("--test-fraction", type=float, default=0.3)
    p_fit.add_argument("--seed", type=int, default=0)
    p_fit.add_argument("--model-out", help="write the trained model as JSON")

    p_demo = sub.add_parser("synth-demo", help="run every method once on a Gaussian-blob fixture")
    p_demo.add_argument("--majority", type=int, default=400)
    p_demo.add_argument("--minority", type=int, default=40)
    p_demo.add_argument("--separation", type=float, default=1.0)
    p_demo.add_argument("--dim", type=int, default=5)
    p_demo.add_argument("--seed", type=int, default=0)

    p_check = sub.add_parser("check-tables", help="recheck published F1/G-mean against printed precision/recall")
    p_check.add_argument("--tolerance", type=float, default=5e-4)
    return parser


def _cmd_bench(args) -> int:
    cfg = load_config(args.config)
    if args.output:
        cfg = replace(cfg, output=args.output)
    path = run_experiment(cfg)
    print(f"wrote {path}")
    return 0


def _parse_blobs(text: str):
    parts = text.split(",")
    if len(parts) != 4:
        raise ConfigError(f"--blobs expects MAJ,MIN,SEP,DIM, got {text!r}")
    try:
        return int(parts[0]), int(parts[1]), float(parts[2]), int(parts[3])
    except ValueError as e:
        raise ConfigError(f"--blobs expects MAJ,MIN,SEP,DIM, got {text!r}: {e}") from None


def _cmd_fit(args) -> int:
    if args.csv:
        try:
            ds = load_csv(args.csv, args.label_column, args.positive_value)
        except (OSError, ValueError) as e:
            raise DataError(str(e)) from None
    else:
        maj, mino, sep, dim = _parse_blobs(args.blobs)
        ds = gen_gaussian_blobs(maj, mino, sep, dim, args.seed)

    try:
        if args.ratio:
            ds = make_ratio_dataset(ds, RatioSpec(args.ratio, seed=args.seed))
        train, test = stratified_split(ds, args.test_fraction, args.seed)
    except ValueError as e:
        raise DataError(str(e)) from None
    (train, test), _ = standardize(train, (test,))

    if args.kernel == "linear":
        kspec = KernelSpec.linear()
    elif args.kernel == "polynomial":
        kspec = KernelSpec.polynomial(args.degree, args.coef0)
    else:
        kspec = KernelSpec.rbf(args.gamma) if args.gamma else default_rbf(train.features)
    print(f"train: {train.minority_count} minority / {train.majority_count} majority, kernel {kspec.token()}")

    cfg = ExperimentConfig(source=BlobsSource(), c=args.c, k=args.k, tol=args.tol)
    pred, fitted, fit_train = fit_predict(args.method, train, test, kspec, cfg, args.seed)
    if isinstance(fitted, MMModel):
        print(fitted.diagnostics.report())
        model = fitted.model
    else:
        model = fitted
        taxonomy = classify_minority_svs(model, gram(kspec, fit_train.features), fit_train.labels)
        print("minority margin taxonomy:")
        for name, count in taxonomy.counts().items():
            print(f"  {name}: {count}")

    rep = scores(confusion(test.labels, pred))
    print(
        f"test metrics: precision {rep.precision:.4f} recall {rep.recall:.4f} "
        f"f1 {rep.f1:.4f} gmean {rep.gmean:.4f}"
    )
    if args.model_out:
        save_model(model, args.model_out)
        print(f"wrote {args.model_out}")
    return 0


def _cmd_synth_demo(args) -> int:
    ds = gen_gaussian_blobs(args.majority, args.minority, args.separation, args.dim, args.seed)
    train, test = stratified_split(ds, 0.3, args.seed)
    (train, test), _ = standardize(train, (test,))
    kspec = default_rbf(train.features)
    cfg = ExperimentConfig(source=BlobsSource())
    print(f"{args.majority} majority / {args.minority} minority blobs, separation {args.separation}, dim {args.dim}")
    print(f"{'method':<20} {'precision':>9} {'recall':>9} {'f1':>9} {'gmean':>9}")
    for method in METHODS:
        pred, _, _ = fit_predict(method, train, test, kspec, cfg, args.seed)
        rep = scores(confusion(test.labels, pred))
        print(f"{method:<20} {rep.precision:>9.4f} {rep.recall:>9.4f} {rep.f1:>9.4f} {rep.gmean:>9.4f}")
    return 0


def _cmd_check_tables(args) -> int:
    checks = check_rows(args.tolerance)
    bad = [c for c in checks if not c.consistent]
    for c in checks:
        mark = "ok " if c.consistent else "BAD"
        print(
            f"{mark} {c.ratio:>4g}:1 {c.method:<20} "
            f"F1 {c.f1_recomputed:.4f} (printed {c.f1_printed:.4f})  "
            f"G {c.gmean_recomputed:.4f} (printed {c.gmean_printed:.4f})"
        )
    print(f"{len(checks) - len(bad)}/{len(checks)} rows consistent at tolerance {args.tolerance:g}")
    return 0 if not bad else 1


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "bench":
            return _cmd_bench(args)
        if args.command == "fit":
            return _cmd_fit(args)
        if args.command == "synth-demo":
            return _cmd_synth_demo(args)
        return _cmd_check_tables(args)
    except ConfigError as e:
        print(f"config error: {e}", file=sys.stderr)
        return 1
    except DataError as e:
        print(f"data error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
