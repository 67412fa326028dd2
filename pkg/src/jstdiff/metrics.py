"""Evaluation of diff models: precision, recall, F1, diff rate, fidelity.

Empty-denominator conventions, applied consistently and flagged in the
exported JSON: precision is 0 when nothing was predicted as a diff, recall
is 1 when there are no true diffs.
"""

from __future__ import annotations

from dataclasses import dataclass, asdict

import numpy as np

from .dtree import as_labels
from .errors import LengthMismatch


@dataclass(frozen=True)
class MetricsReport:
    precision: float
    recall: float
    f1: float
    diff_rate: float
    num_rules: int
    num_predicates: int
    fidelity_1: float | None
    fidelity_2: float | None
    n_test: int
    no_predicted_diffs: bool = False
    no_true_diffs: bool = False

    def to_payload(self) -> dict:
        d = asdict(self)
        d["schema_version"] = 1
        d["kind"] = "metrics"
        return d

    def summary_line(self) -> str:
        fid = ""
        if self.fidelity_1 is not None and self.fidelity_2 is not None:
            fid = f" fid1={self.fidelity_1:.4f} fid2={self.fidelity_2:.4f}"
        return (
            f"Pr={self.precision:.4f} Re={self.recall:.4f} F1={self.f1:.4f} "
            f"#r={self.num_rules} #p={self.num_predicates}"
            f" diffs={self.diff_rate:.4f} n={self.n_test}{fid}"
        )


def f1_score(precision: float, recall: float) -> float:
    if precision + recall == 0.0:
        return 0.0
    return 2.0 * precision * recall / (precision + recall)


def evaluate(predicted, y1, y2) -> tuple[float, float, float, float]:
    """(precision, recall, f1, diff_rate) of a boolean diff prediction
    against the disagreement of two label vectors."""
    pred = np.asarray(predicted, dtype=bool)
    l1, _ = as_labels(y1)
    l2, _ = as_labels(y2)
    n = pred.shape[0]
    if l1.shape[0] != n or l2.shape[0] != n:
        raise LengthMismatch("predicted/label lengths differ")
    if n == 0:
        raise LengthMismatch("cannot evaluate on zero rows")
    true_diff = l1 != l2
    n_true = int(true_diff.sum())
    n_pred = int(pred.sum())
    n_hit = int((true_diff & pred).sum())
    precision = n_hit / n_pred if n_pred else 0.0
    recall = n_hit / n_true if n_true else 1.0
    diff_rate = n_true / n
    return precision, recall, f1_score(precision, recall), diff_rate


def fidelity(surrogate_preds, model_preds) -> float:
    """Fraction of rows where the surrogate matches the model."""
    a, _ = as_labels(surrogate_preds)
    b, _ = as_labels(model_preds)
    if a.shape[0] != b.shape[0]:
        raise LengthMismatch("prediction lengths differ")
    if a.shape[0] == 0:
        raise LengthMismatch("cannot compute fidelity on zero rows")
    return int((a == b).sum()) / a.shape[0]


def build_report(
    predicted,
    y1,
    y2,
    num_rules: int,
    num_predicates: int,
    fidelity_1: float | None = None,
    fidelity_2: float | None = None,
) -> MetricsReport:
    pred = np.asarray(predicted, dtype=bool)
    l1, _ = as_labels(y1)
    l2, _ = as_labels(y2)
    precision, recall, f1, diff_rate = evaluate(pred, l1, l2)
    return MetricsReport(
        precision=precision,
        recall=recall,
        f1=f1,
        diff_rate=diff_rate,
        num_rules=num_rules,
        num_predicates=num_predicates,
        fidelity_1=fidelity_1,
        fidelity_2=fidelity_2,
        n_test=int(pred.shape[0]),
        no_predicted_diffs=not bool(pred.any()),
        no_true_diffs=not bool((l1 != l2).any()),
    )
