"""Run the benchmark harness across imbalance ratios and print the table.

Equivalent to `mmsmote bench --config <file>` with a generator-backed
config; the output CSV is byte-reproducible for a fixed config.
"""

from pathlib import Path

from mmsmote.bench import config_from_dict, run_experiment

out = Path("ratio_benchmark_results.csv")
cfg = config_from_dict(
    {
        "source": {"blobs": {"n_majority": 1000, "n_minority": 60, "separation": 1.7, "dim": 5}},
        "ratios": [2, 4, 8],
        "methods": ["plain_svm", "class_weighted_svm", "rus_svm", "smote_svm", "mm_smote"],
        "repetitions": 3,
        "master_seed": 1,
        "c": 0.1,
        "test_fraction": 0.5,
        "output": str(out),
    }
)
run_experiment(cfg)

print(f"\nwrote {out}; per-cell means:")
header, *rows = out.read_text().strip().split("\n")
cols = header.split(",")
print(f"{'ratio':>5} {'method':<20} {'precision':>9} {'recall':>9} {'f1':>9} {'gmean':>9}")
for line in rows:
    row = dict(zip(cols, line.split(",")))
    if row["rep"] == "mean" and row["status"].startswith("ok"):
        print(
            f"{row['ratio']:>5} {row['method']:<20} {float(row['precision']):>9.4f} "
            f"{float(row['recall']):>9.4f} {float(row['f1']):>9.4f} {float(row['gmean']):>9.4f}"
        )
