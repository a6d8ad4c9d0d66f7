"""Confusion matrices, per-class metrics, and the experiment driver."""

import numpy as np
import pytest
from numpy.testing import assert_allclose

from conftest import make_blobs
from emgmix.dataset import Dataset
from emgmix.errors import DataError, ModelError
from emgmix.evaluation import (
    ConfusionMatrix,
    compute_metrics,
    confusion_matrix,
    load_metrics_csv,
    run_experiment,
    write_confusion_csv,
    write_metrics_csv,
    write_summary_csv,
)
from emgmix.models import fit_gaussian_nb, fit_knn


def metrics_oracle(counts):
    # independent one-vs-rest recomputation from raw matrix counts
    counts = np.asarray(counts, dtype=float)
    total = counts.sum()
    per_class = []
    for c in range(counts.shape[0]):
        tp = counts[c, c]
        fp = counts[:, c].sum() - tp
        fn = counts[c, :].sum() - tp
        tn = total - tp - fp - fn
        acc = (tp + tn) / total
        pre = tp / (tp + fp) if tp + fp > 0 else 0.0
        rec = tp / (tp + fn) if tp + fn > 0 else 0.0
        f1 = 2 * pre * rec / (pre + rec) if pre + rec > 0 else 0.0
        per_class.append((acc, pre, rec, f1))
    return np.array(per_class)


class TestConfusionMatrix:
    def test_perfect_predictions_fill_the_diagonal(self):
        y = np.array([0, 1, 2, 0, 1, 2])
        cm = confusion_matrix(y, y, 3)
        assert_allclose(cm.counts, 2 * np.eye(3))

    def test_collapsed_predictions_fill_one_column(self):
        y = np.array([0, 1, 2, 1])
        cm = confusion_matrix(y, np.zeros(4, dtype=int), 3)
        assert cm.counts[:, 0].tolist() == [1, 2, 1]
        assert cm.counts[:, 1:].sum() == 0

    def test_rows_are_actual_and_columns_predicted(self):
        cm = confusion_matrix([0, 0, 1], [0, 1, 1], 2)
        assert cm.counts.tolist() == [[1, 1], [0, 1]]

    def test_out_of_range_labels_rejected(self):
        with pytest.raises(DataError):
            confusion_matrix([0, 3], [0, 1], 2)
        with pytest.raises(DataError):
            confusion_matrix([0, 1], [0, -1], 2)

    def test_empty_input_rejected(self):
        with pytest.raises(DataError):
            confusion_matrix([], [], 2)

    def test_percentages_normalize_each_actual_row(self):
        cm = ConfusionMatrix(np.array([[3, 1], [0, 0]]))
        pct = cm.percentages()
        assert_allclose(pct[0], [75.0, 25.0])
        assert_allclose(pct[1], [0.0, 0.0])  # empty row stays zero

    def test_nonempty_percentage_rows_sum_to_hundred(self):
        rng = np.random.default_rng(3)
        counts = rng.integers(1, 20, size=(4, 4))
        pct = ConfusionMatrix(counts).percentages()
        assert_allclose(pct.sum(axis=1), 100.0, rtol=1e-12)


class TestComputeMetrics:
    def test_clean_two_class_matrix_scores_ones(self):
        # per class: 2 true positives, 2 true negatives, nothing wrong
        report = compute_metrics(ConfusionMatrix(np.array([[2, 0], [0, 2]])))
        for arr in (report.accuracy, report.precision, report.recall, report.f1):
            assert_allclose(arr, 1.0)
        assert report.overall_accuracy == 1.0
        assert report.undefined == ()

    def test_coin_flip_matrix_scores_halves(self):
        # per class: one of each of tp, fp, tn, fn
        report = compute_metrics(ConfusionMatrix(np.array([[1, 1], [1, 1]])))
        for arr in (report.accuracy, report.precision, report.recall, report.f1):
            assert_allclose(arr, 0.5)
        assert_allclose(report.macro_f1, 0.5)

    def test_never_predicted_class_flags_undefined_precision(self):
        report = compute_metrics(ConfusionMatrix(np.array([[2, 0], [3, 0]])))
        assert report.precision[1] == 0.0
        assert "precision[1]" in report.undefined
        assert "f1[1]" in report.undefined
        assert "recall[1]" not in report.undefined

    def test_macro_scores_average_the_classes_unweighted(self):
        counts = np.array([[5, 0, 0], [0, 1, 1], [2, 0, 2]])
        report = compute_metrics(ConfusionMatrix(counts))
        assert_allclose(report.macro_precision, report.precision.mean())
        assert_allclose(report.macro_recall, report.recall.mean())
        assert_allclose(report.macro_f1, report.f1.mean())
        assert_allclose(report.macro_accuracy, report.accuracy.mean())

    def test_overall_accuracy_is_the_trace_share(self):
        counts = np.array([[5, 1], [3, 7]])
        report = compute_metrics(ConfusionMatrix(counts))
        assert_allclose(report.overall_accuracy, 12.0 / 16.0)

    def test_matches_independent_recomputation(self):
        rng = np.random.default_rng(5)
        for _ in range(20):
            k = int(rng.integers(2, 6))
            counts = rng.integers(0, 25, size=(k, k))
            if counts.sum() == 0:
                continue
            report = compute_metrics(ConfusionMatrix(counts))
            expected = metrics_oracle(counts)
            assert_allclose(report.accuracy, expected[:, 0], rtol=1e-12)
            assert_allclose(report.precision, expected[:, 1], rtol=1e-12)
            assert_allclose(report.recall, expected[:, 2], rtol=1e-12)
            assert_allclose(report.f1, expected[:, 3], rtol=1e-12)


class TestMetricsCsv:
    def test_round_trip_preserves_values_exactly(self, tmp_path):
        cm = ConfusionMatrix(np.array([[5, 1, 0], [2, 6, 1], [0, 3, 9]]))
        report = compute_metrics(cm, subject="S1", model="knn")
        path = tmp_path / "metrics.csv"
        write_metrics_csv(path, [report])
        rows = load_metrics_csv(path)
        assert len(rows) == 3
        for c, row in enumerate(rows):
            assert row["subject"] == "S1"
            assert row["model"] == "knn"
            assert float(row["precision"]) == report.precision[c]
            assert float(row["f1"]) == report.f1[c]

    def test_summary_lists_one_row_per_report(self, tmp_path):
        cm = ConfusionMatrix(np.eye(2, dtype=int) * 3)
        reports = [compute_metrics(cm, subject="S1", model=m) for m in ("a", "b")]
        path = tmp_path / "summary.csv"
        write_summary_csv(path, reports)
        lines = path.read_text().splitlines()
        assert lines[0].startswith("subject,model,overall_accuracy")
        assert len(lines) == 3

    def test_confusion_csv_layout(self, tmp_path):
        cm = ConfusionMatrix(np.array([[1, 2], [3, 4]]))
        path = tmp_path / "confusion.csv"
        write_confusion_csv(path, cm)
        lines = path.read_text().splitlines()
        assert lines[0].split(",")[0] == "actual\\predicted"
        assert lines[1] == "0,1,2"
        assert lines[2] == "1,3,4"

    def test_percent_variant_uses_row_percentages(self, tmp_path):
        cm = ConfusionMatrix(np.array([[3, 1], [0, 4]]))
        path = tmp_path / "confusion_pct.csv"
        write_confusion_csv(path, cm, percent=True)
        body = path.read_text().splitlines()[1]
        assert body.split(",")[1:] == ["75.0", "25.0"]


class TestRunExperiment:
    def trainers(self):
        return {
            "knn": lambda ds, seed: fit_knn(ds.features, ds.labels, k=3),
            "nb": lambda ds, seed: fit_gaussian_nb(ds.features, ds.labels),
        }

    def datasets(self, seed=7):
        rng = np.random.default_rng(seed)
        X, y = make_blobs(rng, n_per_class=20, n_classes=3)
        return {"S1": Dataset(X, y, 3)}

    def test_one_report_per_subject_and_model(self):
        result = run_experiment(self.datasets(), self.trainers(), seed=1)
        assert [(r.subject, r.model) for r in result.reports] == \
            [("S1", "knn"), ("S1", "nb")]
        assert result.failures == []
        for report in result.reports:
            assert report.overall_accuracy >= 0.9

    def test_failed_trainer_is_recorded_and_the_run_continues(self):
        def broken(ds, seed):
            raise ModelError("deliberately broken")

        trainers = {"bad": broken, **self.trainers()}
        result = run_experiment(self.datasets(), trainers, seed=1)
        assert [(r.subject, r.model) for r in result.reports] == \
            [("S1", "knn"), ("S1", "nb")]
        assert len(result.failures) == 1
        subject, name, message = result.failures[0]
        assert (subject, name) == ("S1", "bad")
        assert "deliberately broken" in message

    def test_outputs_written_and_rerun_byte_identical(self, tmp_path):
        out_a = tmp_path / "a"
        out_b = tmp_path / "b"
        run_experiment(self.datasets(), self.trainers(), seed=3, out_dir=out_a)
        run_experiment(self.datasets(), self.trainers(), seed=3, out_dir=out_b)
        names_a = sorted(p.name for p in out_a.iterdir())
        assert "metrics.csv" in names_a
        assert "summary.csv" in names_a
        assert "confusion_S1_knn.csv" in names_a
        assert "confusion_S1_knn_pct.csv" in names_a
        assert names_a == sorted(p.name for p in out_b.iterdir())
        for name in names_a:
            assert (out_a / name).read_bytes() == (out_b / name).read_bytes()

    def test_split_depends_on_the_experiment_seed(self):
        a = run_experiment(self.datasets(), self.trainers(), seed=1)
        b = run_experiment(self.datasets(), self.trainers(), seed=2)
        cms_a = a.confusions[("S1", "knn")].counts
        cms_b = b.confusions[("S1", "knn")].counts
        assert cms_a.sum() == cms_b.sum()  # same test-set size either way

    def test_subjects_evaluated_in_sorted_order(self):
        rng = np.random.default_rng(11)
        X, y = make_blobs(rng, n_per_class=15, n_classes=2)
        datasets = {"S2": Dataset(X, y, 2), "S1": Dataset(X, y, 2)}
        result = run_experiment(datasets, self.trainers(), seed=1)
        assert [r.subject for r in result.reports] == ["S1", "S1", "S2", "S2"]
