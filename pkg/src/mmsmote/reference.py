"""Published reference results for the credit-card fraud benchmark.

These are the precision/recall/F1/G-mean values reported for the original
MM-SMOTE evaluation at each imbalance ratio. The derived columns (F1 and
G-mean) should follow from the printed precision and recall; check_rows
recomputes them and flags rows where they do not, which pins down the
G-mean definition used throughout this package.
"""

from __future__ import annotations

from dataclasses import dataclass

from .metrics import scores_from_pr

# (ratio, method, precision, recall, f1, gmean)
REFERENCE_ROWS: tuple[tuple[float, str, float, float, float, float], ...] = (
    (2, "SVM", 0.9998, 0.7198, 0.8370, 0.8483),
    (2, "Class-weighted SVM", 0.8956, 0.9082, 0.9019, 0.9019),
    (2, "RUS-SVM", 0.8986, 0.9034, 0.9010, 0.9010),
    (2, "SMOTE-SVM", 0.9123, 0.9034, 0.9078, 0.9078),
    (2, "MM-Smote", 0.8983, 0.9103, 0.9056, 0.9057),
    (4, "SVM", 0.9833, 0.8115, 0.8893, 0.8933),
    (4, "Class-weighted SVM", 0.9696, 0.8744, 0.9150, 0.9160),
    (4, "RUS-SVM", 0.8930, 0.9130, 0.9029, 0.9030),
    (4, "SMOTE-SVM", 0.9477, 0.8841, 0.9148, 0.9153),
    (4, "MM-Smote", 0.9394, 0.8986, 0.9185, 0.9187),
    (6, "SVM", 0.9950, 0.7536, 0.8577, 0.8659),
    (6, "Class-weighted SVM", 0.9691, 0.8406, 0.9003, 0.9026),
    (6, "RUS-SVM", 0.8992, 0.8986, 0.8989, 0.8989),
    (6, "SMOTE-SVM", 0.9575, 0.8889, 0.9219, 0.9226),
    (6, "MM-Smote", 0.9617, 0.8937, 0.9264, 0.9270),
    (8, "SVM", 0.9994, 0.7343, 0.8466, 0.8567),
    (8, "Class-weighted SVM", 0.9821, 0.7923, 0.8770, 0.8821),
    (8, "RUS-SVM", 0.9374, 0.9082, 0.9226, 0.9227),
    (8, "SMOTE-SVM", 0.9666, 0.8647, 0.9128, 0.9143),
    (8, "MM-Smote", 0.9547, 0.8889, 0.9206, 0.9212),
    (10, "SVM", 0.9995, 0.7246, 0.8402, 0.8510),
    (10, "Class-weighted SVM", 0.9877, 0.7778, 0.8703, 0.8765),
    (10, "RUS-SVM", 0.9278, 0.9034, 0.9154, 0.9155),
    (10, "SMOTE-SVM", 0.9823, 0.8261, 0.8975, 0.9008),
    (10, "MM-Smote", 0.9734, 0.9034, 0.9371, 0.9378),
    (70, "SVM", 0.9999, 0.6570, 0.7929, 0.8105),
    (70, "Class-weighted SVM", 0.9946, 0.7101, 0.8286, 0.8404),
    (70, "RUS-SVM", 0.9141, 0.9034, 0.9087, 0.9087),
    (70, "SMOTE-SVM", 0.9914, 0.8261, 0.9012, 0.9050),
    (70, "MM-Smote", 0.9926, 0.8647, 0.9243, 0.9264),
)


@dataclass(frozen=True)
class RowCheck:
    ratio: float
    method: str
    f1_printed: float
    f1_recomputed: float
    gmean_printed: float
    gmean_recomputed: float
    tolerance: float

    @property
    def consistent(self) -> bool:
        return (
            abs(self.f1_printed - self.f1_recomputed) <= self.tolerance
            and abs(self.gmean_printed - self.gmean_recomputed) <= self.tolerance
        )


def check_rows(tolerance: float = 5e-4) -> list[RowCheck]:
    """Recompute F1/G-mean from each row's printed precision and recall."""
    out = []
    for ratio, method, p, r, f1, g in REFERENCE_ROWS:
        rep = scores_from_pr(p, r)
        out.append(
            RowCheck(
                ratio=ratio,
                method=method,
                f1_printed=f1,
                f1_recomputed=rep.f1,
                gmean_printed=g,
                gmean_recomputed=rep.gmean,
                tolerance=tolerance,
            )
        )
    return out
