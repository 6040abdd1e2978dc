"""Gradient-boosted-tree training with the fixed benchmark hyperparameters.

The reference trainer is CatBoost with iterations=1000, depth=6,
learning_rate=0.05 held constant across tasks. CatBoost is not available
on this package index, so scikit-learn's HistGradientBoostingClassifier
stands in with the same three knobs mapped directly (max_iter, max_depth,
learning_rate) and early stopping disabled so the iteration count actually
binds. The substitution is recorded in every result payload.
"""

from dataclasses import dataclass

import numpy as np
from sklearn.ensemble import HistGradientBoostingClassifier
from sklearn.metrics import average_precision_score, roc_auc_score

from .errors import HarnessError

GBDT_PARAMS = {"iterations": 1000, "depth": 6, "learning_rate": 0.05}
TRAINER_NAME = "sklearn.HistGradientBoostingClassifier"

_METRICS = {
    "auroc": roc_auc_score,
    "auprc": average_precision_score,
}


@dataclass(frozen=True)
class BenchmarkRun:
    benchmark: str
    seed: int
    mode: str
    metric: str
    value: float

    def __post_init__(self):
        if self.metric not in _METRICS:
            raise HarnessError(f"unknown metric {self.metric!r}")
        if not 0.0 <= self.value <= 1.0:
            raise HarnessError(f"metric value {self.value} outside [0, 1]")

    def to_json_dict(self) -> dict:
        return {
            "benchmark": self.benchmark,
            "seed": self.seed,
            "mode": self.mode,
            "metric": self.metric,
            "value": self.value,
            "trainer": TRAINER_NAME,
            "trainer_params": dict(GBDT_PARAMS),
        }


def train_gbdt(train_x, train_y, seed: int) -> HistGradientBoostingClassifier:
    model = HistGradientBoostingClassifier(
        max_iter=GBDT_PARAMS["iterations"],
        max_depth=GBDT_PARAMS["depth"],
        learning_rate=GBDT_PARAMS["learning_rate"],
        early_stopping=False,
        random_state=seed,
    )
    model.fit(np.asarray(train_x), np.asarray(train_y))
    return model


def score_metric(metric: str, labels, scores) -> float:
    if metric not in _METRICS:
        raise HarnessError(f"unknown metric {metric!r}")
    labels = np.asarray(labels)
    if labels.min() == labels.max():
        raise HarnessError("test split has a single class; metric undefined")
    return float(_METRICS[metric](labels, np.asarray(scores)))


def gbdt_train_eval(train_x, train_y, test_x, test_y, *, benchmark: str,
                    mode: str, seed: int, metric: str) -> tuple[
                        BenchmarkRun, HistGradientBoostingClassifier]:
    """Train on the fit rows, score the held-out rows with the task metric.

    Returns the run record together with the fitted model so importance
    analysis can reuse it without retraining.
    """
    model = train_gbdt(train_x, train_y, seed)
    scores = model.predict_proba(np.asarray(test_x))[:, 1]
    value = score_metric(metric, test_y, scores)
    return BenchmarkRun(benchmark, seed, mode, metric, value), model
