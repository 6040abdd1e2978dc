"""Trainer contract: fixed hyperparameters, determinism, metric rules."""

import numpy as np
import pytest

from admetbench.errors import HarnessError
from admetbench.gbdt import (
    GBDT_PARAMS,
    BenchmarkRun,
    gbdt_train_eval,
    score_metric,
    train_gbdt,
)
from admetbench.tasks import metric_for


def separable_data(n=60, seed=0):
    rng = np.random.default_rng(seed)
    x = rng.normal(size=(n, 5))
    y = (x[:, 0] > 0).astype(int)
    return x, y


class TestTrainer:
    def test_fixed_hyperparameters_bound(self):
        x, y = separable_data()
        model = train_gbdt(x, y, seed=1)
        assert model.max_iter == GBDT_PARAMS["iterations"] == 1000
        assert model.max_depth == GBDT_PARAMS["depth"] == 6
        assert model.learning_rate == GBDT_PARAMS["learning_rate"] == 0.05
        assert model.early_stopping is False

    def test_deterministic_given_seed(self):
        x, y = separable_data()
        a = train_gbdt(x, y, seed=3).predict_proba(x)
        b = train_gbdt(x, y, seed=3).predict_proba(x)
        assert np.array_equal(a, b)

    def test_separable_task_scores_perfectly(self):
        x, y = separable_data()
        run, model = gbdt_train_eval(
            x, y, x, y, benchmark="hERG", mode="baseline", seed=1,
            metric="auroc",
        )
        assert run.value == 1.0
        assert model.predict(x[:1]).shape == (1,)

    def test_auprc_metric_path(self):
        x, y = separable_data()
        run, _ = gbdt_train_eval(
            x, y, x, y, benchmark="CYP2D6_Sub", mode="quantum", seed=2,
            metric="auprc",
        )
        assert run.metric == "auprc"
        assert 0.0 <= run.value <= 1.0


class TestMetrics:
    def test_single_class_test_split_rejected(self):
        with pytest.raises(HarnessError, match="single class"):
            score_metric("auroc", [1, 1, 1], [0.2, 0.4, 0.9])

    def test_unknown_metric_rejected(self):
        with pytest.raises(HarnessError, match="unknown metric"):
            score_metric("rmse", [0, 1], [0.1, 0.9])

    def test_substrate_tasks_use_auprc(self):
        assert metric_for("CYP2D6_Sub") == "auprc"
        assert metric_for("CYP2C9_Sub") == "auprc"

    def test_other_tasks_use_auroc(self):
        for task in ("hERG", "BBB_Martins", "HIA_Hou", "AMES",
                     "CYP3A4_Sub"):
            assert metric_for(task) == "auroc"

    def test_unknown_task_lists_supported(self):
        with pytest.raises(HarnessError, match="AMES"):
            metric_for("NotATask")


class TestBenchmarkRun:
    def test_payload_records_trainer_substitution(self):
        run = BenchmarkRun("hERG", 1, "quantum", "auroc", 0.9)
        payload = run.to_json_dict()
        assert payload["trainer"] == "sklearn.HistGradientBoostingClassifier"
        assert payload["trainer_params"] == GBDT_PARAMS
        assert payload["value"] == 0.9

    def test_invalid_metric_rejected(self):
        with pytest.raises(HarnessError):
            BenchmarkRun("hERG", 1, "quantum", "accuracy", 0.9)

    def test_out_of_range_value_rejected(self):
        with pytest.raises(HarnessError):
            BenchmarkRun("hERG", 1, "quantum", "auroc", 1.2)
