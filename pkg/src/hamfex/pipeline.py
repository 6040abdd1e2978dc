"""End-to-end orchestration: configuration, the six-stage extraction flow,
feature caching, a desk-scale linear classifier, and the evaluation
statistics (AUROC, AUPRC, paired t-test).

Fitting (ranking, pair/triad selection, couplings) sees only the
train+valid view; the fitted selection is then applied to every row,
test included, so downstream consumers receive a full augmented matrix.
"""

from __future__ import annotations

import hashlib
import json
import logging
import math
import os
import tempfile
from dataclasses import asdict, dataclass, fields
from pathlib import Path

import numpy as np

from . import qsim
from .dataset import (
    FeatureMatrix,
    LabeledDataset,
    binarize_values,
    fit_view,
    labeled_csv_text,
    load_labeled_csv,
)
from .errors import CacheError, ValidationError
from .selection import (
    CouplingTable,
    MiRanking,
    PairSet,
    TriadSet,
    derive_couplings,
    derive_qubit_map,
    polynomial_interactions,
    prefilter_top_k,
    select_pairs,
    select_triads,
)
from .special import student_t_two_sided_p

log = logging.getLogger(__name__)

MODES = ("quantum", "polynomial", "baseline")
METRICS = ("auroc", "auprc")


@dataclass
class PipelineConfig:
    k: int = 100
    theta_pair: float = 0.1
    theta_triad: float = 0.15
    t: float = 0.5
    steps: int = 1
    alpha: float = math.pi / 4
    max_pairs: int = 30
    max_triads: int = 10
    mixing: bool = True
    seed: int = 0
    mode: str = "quantum"

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValidationError(f"mode must be one of {MODES}, got {self.mode!r}")
        if self.mode == "baseline":
            # the ablation contract: baseline means no interaction features
            self.max_pairs = 0
            self.max_triads = 0
        if self.k < 1:
            raise ValidationError("k must be >= 1")
        if self.steps < 1:
            raise ValidationError("steps must be >= 1")
        if not 0.0 < self.alpha < math.pi / 2:
            raise ValidationError("alpha must lie strictly inside (0, pi/2)")
        if self.max_pairs < 0 or self.max_triads < 0:
            raise ValidationError("max_pairs and max_triads must be >= 0")
        for name in ("theta_pair", "theta_triad", "t"):
            if not math.isfinite(getattr(self, name)):
                raise ValidationError(f"{name} must be finite")
        if self.theta_pair < 0 or self.theta_triad < 0:
            raise ValidationError("thresholds are magnitudes and must be >= 0")

    def canonical_json(self) -> str:
        return json.dumps(asdict(self), sort_keys=True, separators=(",", ":"))


def load_config(path) -> PipelineConfig:
    """Read a JSON config holding exactly the PipelineConfig fields.

    Unknown keys are a hard error so a typo cannot silently fall back to a
    default; missing keys take the documented defaults.
    """
    with open(path, "r", encoding="utf-8") as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ValidationError(f"{path}: invalid JSON ({exc})") from None
    if not isinstance(data, dict):
        raise ValidationError(f"{path}: config must be a JSON object")
    known = {f.name for f in fields(PipelineConfig)}
    unknown = sorted(set(data) - known)
    if unknown:
        raise ValidationError(
            f"{path}: unknown config keys {unknown}; known keys: {sorted(known)}"
        )
    return PipelineConfig(**data)


@dataclass(frozen=True)
class SelectionResult:
    """Everything fitted on the train+valid view, applied later to all rows."""

    ranking: MiRanking
    pairs: PairSet
    triads: TriadSet
    couplings: CouplingTable
    qubit_map: dict


def fit_selection(config: PipelineConfig, dataset: LabeledDataset) -> SelectionResult:
    view = fit_view(dataset)
    ranking = prefilter_top_k(view, config.k, seed=config.seed)
    pairs = select_pairs(ranking, view, config.theta_pair, config.max_pairs)
    triads = select_triads(pairs, view, config.theta_triad, config.max_triads)
    couplings = derive_couplings(pairs, triads)
    qubit_map = derive_qubit_map(pairs, triads)
    return SelectionResult(ranking, pairs, triads, couplings, qubit_map)


def _concat_features(base: FeatureMatrix, extra: FeatureMatrix) -> FeatureMatrix:
    return FeatureMatrix(
        base.column_names + extra.column_names,
        np.hstack([base.values, extra.values]),
        base.column_kinds + extra.column_kinds,
    )


def quantum_feature_matrix(selection: SelectionResult, features: FeatureMatrix,
                           config: PipelineConfig) -> FeatureMatrix:
    """Simulate every row through the fitted Hamiltonian family and return
    the expectation-value columns (may be zero columns when nothing was
    selected)."""
    qubit_map = selection.qubit_map
    columns = sorted(qubit_map, key=qubit_map.__getitem__)
    bits_rows = binarize_values(features.values[:, columns]) if columns else \
        np.zeros((features.n_rows, 0))
    expectation_sets = qsim.extract_features(
        bits_rows, selection.couplings, qubit_map,
        t=config.t, steps=config.steps, alpha=config.alpha,
        mixing=config.mixing,
    )
    terms = qsim.feature_terms(selection.couplings, qubit_map)
    names = ["q_" + "".join(f"Z{q}" for q in term) for term in terms]
    values = np.zeros((features.n_rows, len(names)), dtype=np.float64)
    for i, exp_set in enumerate(expectation_sets):
        values[i] = exp_set.values()
    return FeatureMatrix(names, values, ["continuous"] * len(names))


def extract_augmented(config: PipelineConfig, dataset: LabeledDataset) -> LabeledDataset:
    """The uncached six-stage flow. Returns the dataset with its feature
    matrix augmented according to the mode; labels/split/ids unchanged."""
    if config.mode == "baseline":
        return dataset
    selection = fit_selection(config, dataset)
    if config.mode == "polynomial":
        extra = polynomial_interactions(
            dataset.features, selection.ranking.selected_indices()
        )
    else:
        extra = quantum_feature_matrix(selection, dataset.features, config)
    return LabeledDataset(
        _concat_features(dataset.features, extra),
        dataset.labels,
        dataset.split,
        dataset.ids,
    )


def dataset_fingerprint(dataset: LabeledDataset) -> str:
    return hashlib.sha256(labeled_csv_text(dataset).encode("utf-8")).hexdigest()


def default_cache_dir() -> Path:
    env = os.environ.get("HAMFEX_CACHE_DIR")
    if env:
        return Path(env)
    return Path.home() / ".cache" / "hamfex"


def cache_paths(config: PipelineConfig, dataset: LabeledDataset,
                cache_dir=None) -> tuple[Path, Path]:
    """(csv path, sidecar path) of the cache entry for this config+dataset."""
    cache_dir = Path(cache_dir) if cache_dir is not None else default_cache_dir()
    key_material = config.canonical_json() + "\n" + dataset_fingerprint(dataset)
    key = hashlib.sha256(key_material.encode("utf-8")).hexdigest()
    return cache_dir / f"{key}.csv", cache_dir / f"{key}.json"


def _atomic_write(path: Path, text: str) -> None:
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except OSError as exc:
        try:
            os.unlink(tmp)
        except OSError:
            pass
        raise CacheError(f"cannot write cache entry {path}: {exc}") from exc


def _load_cached(csv_path: Path, sidecar_path: Path) -> LabeledDataset | None:
    """A verified cache entry, or None if absent/corrupt (corruption warns)."""
    if not (csv_path.exists() and sidecar_path.exists()):
        return None
    try:
        text = csv_path.read_text(encoding="utf-8")
        meta = json.loads(sidecar_path.read_text(encoding="utf-8"))
        if meta.get("csv_sha256") != hashlib.sha256(text.encode("utf-8")).hexdigest():
            raise ValueError("content hash mismatch")
        has_split = meta.get("has_split", True)
        return load_labeled_csv(
            csv_path, "label", "split" if has_split else None
        )
    except (OSError, ValueError, ValidationError, json.JSONDecodeError) as exc:
        log.warning("cache entry %s is corrupt (%s); recomputing", csv_path, exc)
        return None


def run_extraction(config: PipelineConfig, dataset: LabeledDataset,
                   cache_dir=None) -> LabeledDataset:
    """Cached six-stage extraction.

    The cache entry is the augmented CSV itself plus a sidecar recording the
    config, the dataset fingerprint, and the CSV's own hash; a corrupt entry
    is recomputed with a warning, and identical config+data always reproduce
    byte-identical cache content. Cache write failures raise CacheError.
    """
    csv_path, sidecar_path = cache_paths(config, dataset, cache_dir)
    cached = _load_cached(csv_path, sidecar_path)
    if cached is not None:
        return cached
    augmented = extract_augmented(config, dataset)
    text = labeled_csv_text(augmented)
    try:
        csv_path.parent.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise CacheError(f"cannot create cache directory {csv_path.parent}: {exc}") \
            from exc
    sidecar = {
        "config": json.loads(config.canonical_json()),
        "dataset_sha256": dataset_fingerprint(dataset),
        "csv_sha256": hashlib.sha256(text.encode("utf-8")).hexdigest(),
        "has_split": augmented.split is not None,
    }
    _atomic_write(csv_path, text)
    _atomic_write(sidecar_path, json.dumps(sidecar, sort_keys=True, indent=2) + "\n")
    return augmented


@dataclass(frozen=True)
class MetricReport:
    metric: str
    per_seed: tuple
    mean: float
    std: float

    def __post_init__(self):
        if self.metric not in METRICS:
            raise ValidationError(f"metric must be one of {METRICS}")
        for v in self.per_seed:
            if not 0.0 <= v <= 1.0:
                raise ValidationError(f"metric value {v} outside [0, 1]")

    @classmethod
    def from_values(cls, metric: str, values) -> "MetricReport":
        values = tuple(float(v) for v in values)
        if not values:
            raise ValidationError("a metric report needs at least one value")
        mean = float(np.mean(values))
        std = float(np.std(values, ddof=1)) if len(values) > 1 else 0.0
        return cls(metric, values, mean, std)

    def to_json_dict(self) -> dict:
        return {
            "metric": self.metric,
            "per_seed": list(self.per_seed),
            "mean": self.mean,
            "std": self.std,
        }


def auroc(scores, labels) -> float:
    """Mann-Whitney AUROC: probability a random positive outranks a random
    negative, with tied scores counted 1/2 via average ranks."""
    scores = np.asarray(scores, dtype=np.float64)
    labels = np.asarray(labels)
    if scores.shape != labels.shape or scores.ndim != 1:
        raise ValidationError("scores and labels must be equal-length vectors")
    if not np.all(np.isin(labels, (0, 1))):
        raise ValidationError("labels must be binary")
    n_pos = int(np.sum(labels == 1))
    n_neg = int(np.sum(labels == 0))
    if n_pos == 0 or n_neg == 0:
        raise ValidationError("AUROC needs both classes present")
    order = np.argsort(scores, kind="mergesort")
    ranks = np.empty(scores.size, dtype=np.float64)
    sorted_scores = scores[order]
    i = 0
    while i < scores.size:
        j = i
        while j + 1 < scores.size and sorted_scores[j + 1] == sorted_scores[i]:
            j += 1
        ranks[order[i : j + 1]] = 0.5 * (i + j) + 1.0  # average 1-based rank
        i = j + 1
    rank_sum = float(np.sum(ranks[labels == 1]))
    return (rank_sum - n_pos * (n_pos + 1) / 2.0) / (n_pos * n_neg)


def auprc(scores, labels) -> float:
    """Non-interpolated average precision with block tie handling.

    Scores are ranked descending; a group of tied scores enters as one
    block, contributing (its recall mass) x (precision at the block end).
    With no ties this is the usual precision-at-each-positive average, and
    a fully tied ranking scores exactly p/n, the precision of the single
    all-inclusive block.
    """
    scores = np.asarray(scores, dtype=np.float64)
    labels = np.asarray(labels)
    if scores.shape != labels.shape or scores.ndim != 1:
        raise ValidationError("scores and labels must be equal-length vectors")
    if not np.all(np.isin(labels, (0, 1))):
        raise ValidationError("labels must be binary")
    total_pos = int(np.sum(labels == 1))
    if total_pos == 0:
        raise ValidationError("AUPRC needs at least one positive")
    order = np.argsort(-scores, kind="mergesort")
    sorted_scores = scores[order]
    sorted_labels = labels[order]
    area = 0.0
    tp = 0
    i = 0
    while i < scores.size:
        j = i
        while j + 1 < scores.size and sorted_scores[j + 1] == sorted_scores[i]:
            j += 1
        block_tp = int(np.sum(sorted_labels[i : j + 1] == 1))
        tp += block_tp
        if block_tp:
            precision_at_end = tp / (j + 1)
            area += (block_tp / total_pos) * precision_at_end
        i = j + 1
    return area


_METRIC_FUNCTIONS = {"auroc": auroc, "auprc": auprc}


def _sigmoid(z: np.ndarray) -> np.ndarray:
    out = np.empty_like(z)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    expz = np.exp(z[~pos])
    out[~pos] = expz / (1.0 + expz)
    return out


def _spectral_norm_sq(x: np.ndarray) -> float:
    """Largest squared singular value, via deterministic power iteration."""
    if x.size == 0:
        return 0.0
    v = np.ones(x.shape[1]) / math.sqrt(x.shape[1])
    for _ in range(60):
        w = x.T @ (x @ v)
        norm = float(np.linalg.norm(w))
        if norm == 0.0:
            return 0.0
        v = w / norm
    return float(v @ (x.T @ (x @ v)))


def train_eval_linear(train_x, train_y, test_x, test_y, l2: float = 1e-3,
                      epochs: int = 2000, seed: int = 0,
                      metric: str = "auroc") -> MetricReport:
    """L2-regularized logistic regression by full-batch gradient descent.

    Features are standardized by train statistics. The step size is
    1/L for the loss's curvature bound L, so the iteration is a plain
    deterministic descent to the unique optimum; the seed only sets the
    (nearly irrelevant) starting point. Returns the metric on test scores.
    """
    train_x = np.asarray(train_x, dtype=np.float64)
    test_x = np.asarray(test_x, dtype=np.float64)
    train_y = np.asarray(train_y, dtype=np.float64)
    test_y = np.asarray(test_y)
    if train_x.ndim != 2 or test_x.ndim != 2:
        raise ValidationError("feature matrices must be 2-D")
    if train_x.shape[0] != train_y.size or test_x.shape[0] != test_y.size:
        raise ValidationError("row/label count mismatch")
    if train_x.shape[1] != test_x.shape[1]:
        raise ValidationError("train and test column counts differ")
    if l2 < 0 or epochs < 1:
        raise ValidationError("l2 must be >= 0 and epochs >= 1")
    classes = np.unique(train_y)
    if classes.size < 2:
        raise ValidationError("training labels contain a single class")

    mu = train_x.mean(axis=0)
    sigma = train_x.std(axis=0)
    sigma[sigma == 0] = 1.0
    xt = (train_x - mu) / sigma
    xs = (test_x - mu) / sigma

    n, d = xt.shape
    lipschitz = _spectral_norm_sq(xt) / (4.0 * n) + l2 + 0.25
    step = 1.0 / lipschitz
    rng = np.random.default_rng(seed)
    w = rng.normal(0.0, 0.01, d)
    b = 0.0
    for _ in range(epochs):
        p = _sigmoid(xt @ w + b)
        residual = p - train_y
        w -= step * (xt.T @ residual / n + l2 * w)
        b -= step * float(np.mean(residual))

    scores = xs @ w + b
    value = _METRIC_FUNCTIONS[metric](scores, test_y)
    return MetricReport.from_values(metric, [value])


@dataclass(frozen=True)
class ComparisonResult:
    p_value: float
    cohens_d: float
    n_seeds: int

    def __post_init__(self):
        if not 0.0 <= self.p_value <= 1.0:
            raise ValidationError(f"p-value {self.p_value} outside [0, 1]")
        if self.n_seeds < 2:
            raise ValidationError("need at least 2 paired seeds")


def paired_ttest(a, b) -> ComparisonResult:
    """Two-sided paired t-test on d = a - b with n-1 degrees of freedom.

    t = mean(d) / (sd(d)/sqrt(n)) with sample sd (n-1 denominator), p from
    the t CDF via the regularized incomplete beta function, and Cohen's d
    for paired designs = mean(d)/sd(d) = t/sqrt(n).
    """
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != b.shape or a.ndim != 1:
        raise ValidationError("paired samples must be equal-length vectors")
    n = a.size
    if n < 2:
        raise ValidationError("need at least 2 paired observations")
    d = a - b
    sd = float(np.std(d, ddof=1))
    if sd == 0.0:
        raise ValidationError("zero-variance differences: t is undefined")
    mean = float(np.mean(d))
    t = mean / (sd / math.sqrt(n))
    p = student_t_two_sided_p(t, n - 1)
    # t/sqrt(n) rather than mean/sd keeps d = t/sqrt(n) bit-exact
    return ComparisonResult(p, t / math.sqrt(n), n)


def stratified_split_indices(labels: np.ndarray, train_fraction: float,
                             seed: int) -> tuple[np.ndarray, np.ndarray]:
    """Per-class shuffled train/test indices; every class contributes at
    least one row to each side when it has two or more rows."""
    rng = np.random.default_rng(seed)
    train_idx = []
    test_idx = []
    for cls in np.unique(labels):
        members = np.flatnonzero(labels == cls)
        members = members[rng.permutation(members.size)]
        cut = int(round(train_fraction * members.size))
        cut = min(max(cut, 1), members.size - 1) if members.size > 1 else members.size
        train_idx.append(members[:cut])
        test_idx.append(members[cut:])
    return np.sort(np.concatenate(train_idx)), np.sort(np.concatenate(test_idx))


def evaluate_features(dataset: LabeledDataset, seeds: int, metric: str,
                      l2: float = 1e-3, epochs: int = 2000) -> MetricReport:
    """Per-seed linear evaluation of a feature matrix.

    With split tags, train+valid rows train and test rows evaluate, and the
    seed varies only the classifier start. Without tags, each seed draws a
    stratified 80/20 resample.
    """
    if metric not in METRICS:
        raise ValidationError(f"metric must be one of {METRICS}")
    if seeds < 1:
        raise ValidationError("seeds must be >= 1")
    values = []
    x = dataset.features.values
    y = dataset.labels
    for seed in range(seeds):
        if dataset.split is not None:
            train_mask = np.isin(dataset.split, ("train", "valid"))
            test_mask = dataset.split == "test"
            if not np.any(test_mask):
                raise ValidationError("no rows tagged test to evaluate on")
            train_idx = np.flatnonzero(train_mask)
            test_idx = np.flatnonzero(test_mask)
        else:
            train_idx, test_idx = stratified_split_indices(y, 0.8, seed)
        report = train_eval_linear(
            x[train_idx], y[train_idx], x[test_idx], y[test_idx],
            l2=l2, epochs=epochs, seed=seed, metric=metric,
        )
        values.append(report.per_seed[0])
    return MetricReport.from_values(metric, values)
