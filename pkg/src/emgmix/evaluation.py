"""Confusion matrices, one-vs-rest metrics, and the experiment driver.

Confusion matrix rows are actual classes, columns predicted. Per-class
metrics treat the class one-vs-rest:

    accuracy  = (TP + TN) / total
    precision = TP / (TP + FP)
    recall    = TP / (TP + FN)
    f1        = 2 * precision * recall / (precision + recall)

A zero denominator reports the metric as 0 and records it in the report's
`undefined` list, so macro averages (unweighted means over classes) always
average the full class set. Overall accuracy is the matrix trace over the
total count.

Metrics CSV rows are `subject,model,class,accuracy,precision,recall,f1`,
one per class per (subject, model); confusion CSVs come in raw-count and
row-percentage variants. Floats are written with repr so files round-trip
and reruns are byte-identical.
"""

import csv
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Dict, List, Sequence, Tuple

import numpy as np

from .dataset import Dataset, stratified_split
from .errors import DataError, EmgMixError
from .models.base import derive_seed


@dataclass
class ConfusionMatrix:
    """Rows actual, columns predicted, counts per (actual, predicted) pair."""

    counts: np.ndarray

    @property
    def class_count(self) -> int:
        return self.counts.shape[0]

    @property
    def total(self) -> int:
        return int(self.counts.sum())

    def percentages(self) -> np.ndarray:
        """Row-normalized counts times 100; empty rows stay all-zero."""
        row_sums = self.counts.sum(axis=1, keepdims=True).astype(np.float64)
        safe = np.where(row_sums > 0, row_sums, 1.0)
        return np.where(row_sums > 0, self.counts / safe * 100.0, 0.0)


def confusion_matrix(actual, predicted, class_count: int) -> ConfusionMatrix:
    """Count (actual, predicted) pairs over ids in [0, class_count)."""
    a = np.asarray(actual, dtype=np.int64).ravel()
    p = np.asarray(predicted, dtype=np.int64).ravel()
    if a.size != p.size:
        raise DataError(
            f"actual and predicted differ in length: {a.size} vs {p.size}"
        )
    if a.size == 0:
        raise DataError("cannot build a confusion matrix from zero predictions")
    for name, arr in (("actual", a), ("predicted", p)):
        if arr.min() < 0 or arr.max() >= class_count:
            raise DataError(
                f"{name} labels must lie in [0, {class_count}), "
                f"got range [{arr.min()}, {arr.max()}]"
            )
    counts = np.zeros((class_count, class_count), dtype=np.int64)
    np.add.at(counts, (a, p), 1)
    return ConfusionMatrix(counts=counts)


@dataclass
class MetricsReport:
    """Per-class and aggregate scores for one (subject, model) evaluation."""

    subject: str
    model: str
    seed: int
    accuracy: np.ndarray
    precision: np.ndarray
    recall: np.ndarray
    f1: np.ndarray
    undefined: Tuple[str, ...]
    macro_accuracy: float
    macro_precision: float
    macro_recall: float
    macro_f1: float
    overall_accuracy: float


def compute_metrics(cm: ConfusionMatrix, subject: str = "", model: str = "",
                    seed: int = 0) -> MetricsReport:
    """One-vs-rest metrics per class plus macro and overall aggregates."""
    counts = cm.counts.astype(np.float64)
    n = counts.shape[0]
    total = counts.sum()
    acc = np.zeros(n)
    pre = np.zeros(n)
    rec = np.zeros(n)
    f1 = np.zeros(n)
    undefined: List[str] = []
    for c in range(n):
        tp = counts[c, c]
        fp = counts[:, c].sum() - tp
        fn = counts[c, :].sum() - tp
        tn = total - tp - fp - fn
        acc[c] = (tp + tn) / total
        if tp + fp > 0:
            pre[c] = tp / (tp + fp)
        else:
            undefined.append(f"precision[{c}]")
        if tp + fn > 0:
            rec[c] = tp / (tp + fn)
        else:
            undefined.append(f"recall[{c}]")
        if pre[c] + rec[c] > 0:
            f1[c] = 2.0 * pre[c] * rec[c] / (pre[c] + rec[c])
        else:
            undefined.append(f"f1[{c}]")
    return MetricsReport(
        subject=subject,
        model=model,
        seed=seed,
        accuracy=acc,
        precision=pre,
        recall=rec,
        f1=f1,
        undefined=tuple(undefined),
        macro_accuracy=float(acc.mean()),
        macro_precision=float(pre.mean()),
        macro_recall=float(rec.mean()),
        macro_f1=float(f1.mean()),
        overall_accuracy=float(np.trace(cm.counts) / total),
    )


def write_metrics_csv(path, reports: Sequence[MetricsReport]) -> None:
    """Per-class rows in report order: subject,model,class,acc,pre,rec,f1."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(
            ["subject", "model", "class", "accuracy", "precision", "recall", "f1"]
        )
        for r in reports:
            for c in range(r.accuracy.size):
                writer.writerow(
                    [r.subject, r.model, c, repr(float(r.accuracy[c])),
                     repr(float(r.precision[c])), repr(float(r.recall[c])),
                     repr(float(r.f1[c]))]
                )


def write_summary_csv(path, reports: Sequence[MetricsReport]) -> None:
    """One aggregate row per report: overall accuracy plus macro scores."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(
            ["subject", "model", "overall_accuracy", "macro_accuracy",
             "macro_precision", "macro_recall", "macro_f1"]
        )
        for r in reports:
            writer.writerow(
                [r.subject, r.model, repr(r.overall_accuracy),
                 repr(r.macro_accuracy), repr(r.macro_precision),
                 repr(r.macro_recall), repr(r.macro_f1)]
            )


def write_confusion_csv(path, cm: ConfusionMatrix, percent: bool = False) -> None:
    """Square table with actual/predicted headers; optionally row percent."""
    n = cm.class_count
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["actual\\predicted"] + [str(c) for c in range(n)])
        table = cm.percentages() if percent else cm.counts
        for c in range(n):
            if percent:
                writer.writerow([str(c)] + [repr(float(v)) for v in table[c]])
            else:
                writer.writerow([str(c)] + [str(int(v)) for v in table[c]])


def load_metrics_csv(path) -> List[dict]:
    """Rows of the metrics CSV as dicts with floats parsed back."""
    rows = []
    with open(path, newline="") as fh:
        for row in csv.DictReader(fh):
            parsed = dict(row)
            for key in ("accuracy", "precision", "recall", "f1"):
                if key in parsed and parsed[key] is not None:
                    parsed[key] = float(parsed[key])
            rows.append(parsed)
    return rows


@dataclass
class ExperimentResult:
    """Everything run_experiment produced, keyed for report writers."""

    reports: List[MetricsReport]
    confusions: Dict[Tuple[str, str], ConfusionMatrix]
    failures: List[Tuple[str, str, str]]


def run_experiment(
    subject_datasets: Dict[str, Dataset],
    trainers: Dict[str, Callable],
    seed: int = 0,
    train_fraction: float = 0.7,
    out_dir=None,
) -> ExperimentResult:
    """Split, train, and score every subject x model combination.

    Subjects run in sorted order, models in the trainers' insertion order.
    Each subject is stratified-split once (seed derived from the run seed
    and the subject's position, in a namespace disjoint from data synthesis)
    and every model sees the same split; each (subject, model) trains with
    its own derived seed. A trainer is a callable
    (train_dataset, seed) -> fitted model with predict_label.
    Failures are recorded as (subject, model, message) and the run
    continues. With out_dir set, writes metrics.csv, summary.csv,
    per-combination confusion CSVs, and failures.csv.
    """
    reports: List[MetricsReport] = []
    confusions: Dict[Tuple[str, str], ConfusionMatrix] = {}
    failures: List[Tuple[str, str, str]] = []
    for s_idx, subject in enumerate(sorted(subject_datasets)):
        ds = subject_datasets[subject]
        split_seed = derive_seed(seed, 1, s_idx)
        train, test = stratified_split(ds, train_fraction=train_fraction,
                                       seed=split_seed)
        for m_idx, (name, trainer) in enumerate(trainers.items()):
            model_seed = derive_seed(seed, 2, s_idx, m_idx)
            try:
                model = trainer(train, model_seed)
                predicted = model.predict_label(test.features)
            except EmgMixError as exc:
                failures.append((subject, name, str(exc)))
                continue
            cm = confusion_matrix(test.labels, predicted, ds.class_count)
            confusions[(subject, name)] = cm
            reports.append(compute_metrics(cm, subject=subject, model=name,
                                           seed=model_seed))
    result = ExperimentResult(reports=reports, confusions=confusions,
                              failures=failures)
    if out_dir is not None:
        write_experiment_outputs(out_dir, result)
    return result


def write_experiment_outputs(out_dir, result: ExperimentResult) -> None:
    """Write the standard report files for an experiment run."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    write_metrics_csv(out / "metrics.csv", result.reports)
    write_summary_csv(out / "summary.csv", result.reports)
    for (subject, name), cm in sorted(result.confusions.items()):
        write_confusion_csv(out / f"confusion_{subject}_{name}.csv", cm)
        write_confusion_csv(out / f"confusion_{subject}_{name}_pct.csv", cm,
                            percent=True)
    with open(out / "failures.csv", "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["subject", "model", "error"])
        for subject, name, message in result.failures:
            writer.writerow([subject, name, message])
