"""Sampling-based SHAP importance and the quantum-share breakdown.

Exact TreeSHAP needs access to tree internals; this module instead uses
the model-agnostic sampling estimator of Shapley values (Monte Carlo over
feature orderings against a background sample, Štrumbelj & Kononenko
style). It is an approximation, but an unbiased one, and fully
deterministic for a fixed seed. For the breakdown reported here only mean
absolute attributions are needed, which the sampler estimates well at
modest sample counts.
"""

import logging
from dataclasses import dataclass

import numpy as np

from .errors import HarnessError

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class ImportanceBreakdown:
    quantum_importance_fraction: float
    top50_quantum_fraction: float

    def __post_init__(self):
        for name in ("quantum_importance_fraction", "top50_quantum_fraction"):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise HarnessError(f"{name} {value} outside [0, 1]")

    def to_json_dict(self) -> dict:
        return {
            "quantum_importance_fraction": self.quantum_importance_fraction,
            "top50_quantum_fraction": self.top50_quantum_fraction,
        }


def sampling_shap(predict, x, background, *, n_orderings: int = 32,
                  seed: int = 0) -> np.ndarray:
    """Mean |Shapley value| per feature over the rows of x.

    predict maps a 2-D array to 1-D scores (probability of the positive
    class). background supplies the replacement values for features
    outside the coalition; a few dozen rows is plenty for importance
    ranking. Each ordering walks background -> sample one feature at a
    time; the whole walk is scored in a single batched predict call, so
    the model sees n_features + 1 rows per ordering, not one at a time.
    """
    x = np.asarray(x, dtype=np.float64)
    background = np.asarray(background, dtype=np.float64)
    if x.ndim != 2 or background.ndim != 2 or x.shape[1] != background.shape[1]:
        raise HarnessError("x and background must be 2-D with equal columns")
    rng = np.random.default_rng(seed)
    n_rows, n_features = x.shape
    steps = np.arange(n_features + 1)[:, None]
    totals = np.zeros(n_features)
    for row in range(n_rows):
        sample = x[row]
        contributions = np.zeros(n_features)
        for _ in range(n_orderings):
            order = rng.permutation(n_features)
            base = background[rng.integers(background.shape[0])]
            position = np.empty(n_features, dtype=np.intp)
            position[order] = np.arange(n_features)
            # walk k has the first k features of the ordering switched on
            walks = np.where(position[None, :] < steps,
                             sample[None, :], base[None, :])
            scores = np.asarray(predict(walks), dtype=np.float64)
            contributions[order] += np.diff(scores)
        totals += np.abs(contributions / n_orderings)
    return totals / n_rows


def shap_importance(model, features, feature_names, *,
                    quantum_prefix: str = "q_", background=None,
                    n_rows: int = 32, n_orderings: int = 16,
                    seed: int = 0) -> ImportanceBreakdown:
    """Quantum share of model importance.

    quantum fraction = sum of quantum-feature importance / sum of all;
    top-50 fraction = (# quantum features among the 50 largest) / 50.
    A model with no quantum columns gets fraction 0 with a log notice.
    """
    feature_names = list(feature_names)
    features = np.asarray(features, dtype=np.float64)
    if features.shape[1] != len(feature_names):
        raise HarnessError("feature matrix and name list disagree")
    quantum_mask = np.array(
        [name.startswith(quantum_prefix) for name in feature_names]
    )
    if not quantum_mask.any():
        log.info("no %s* columns present; quantum importance is 0",
                 quantum_prefix)
        return ImportanceBreakdown(0.0, 0.0)

    rng = np.random.default_rng(seed)
    rows = rng.choice(features.shape[0], size=min(n_rows, features.shape[0]),
                      replace=False)
    if background is None:
        picks = rng.choice(features.shape[0],
                           size=min(64, features.shape[0]), replace=False)
        background = features[picks]

    def predict(batch):
        return model.predict_proba(batch)[:, 1]

    importance = sampling_shap(
        predict, features[rows], background,
        n_orderings=n_orderings, seed=seed,
    )
    total = float(importance.sum())
    if total <= 0.0:
        log.info("all attributions are zero; reporting zero quantum share")
        return ImportanceBreakdown(0.0, 0.0)
    quantum_share = float(importance[quantum_mask].sum()) / total
    top = np.argsort(-importance)[:50]
    top50 = float(quantum_mask[top].sum()) / 50.0
    return ImportanceBreakdown(quantum_share, top50)
