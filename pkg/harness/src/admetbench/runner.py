"""Benchmark orchestration: split CSVs in, result JSONs and tables out.

The harness never computes mutual information or quantum features itself.
Every augmentation is a subprocess call to the ``hamfex extract`` command,
so each run also exercises the cross-package process boundary. All three
modes consume the same per-seed descriptor CSV, which makes the mode
comparisons paired by construction.

Output layout under ``out_dir``:

    work/<task>/seed<k>/descriptors.csv     shared input per task and seed
    work/<task>/seed<k>/<mode>.csv          augmented features from hamfex
    results/<task>/<mode>/seed<k>.json      one metric record per run
    table1.csv  table2.csv  table3.csv      aggregated reports
"""

import csv
import json
import logging
import math
import shutil
import subprocess
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy import stats

from .data import fetch_benchmark, read_split_csv
from .descriptors import maplight_descriptors
from .errors import HarnessError
from .gbdt import BenchmarkRun, gbdt_train_eval
from .shap_values import ImportanceBreakdown, shap_importance
from .tasks import (
    MODES,
    SEEDS,
    TABLE1_ORDER,
    TABLE2_ORDER,
    TABLE3_ORDER,
    metric_for,
)

log = logging.getLogger(__name__)

SPLIT_COLUMN = "split"


def _format_cell(value: float) -> str:
    if value == math.floor(value) and abs(value) < 1e16:
        return str(int(value))
    return repr(float(value))


def write_feature_csv(path, ids, names, rows, labels, split_tags) -> None:
    """Descriptor CSV in the layout the extraction CLI consumes:
    ``id, <features...>, label, split``."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["id", *names, "label", SPLIT_COLUMN])
        for mol_id, row, label, tag in zip(ids, rows, labels, split_tags):
            writer.writerow(
                [mol_id, *(_format_cell(v) for v in row), int(label), tag]
            )


@dataclass
class FeatureTable:
    ids: list
    names: list
    x: np.ndarray
    labels: np.ndarray
    split: list

    def rows(self, *tags) -> tuple[np.ndarray, np.ndarray]:
        mask = np.array([tag in tags for tag in self.split])
        return self.x[mask], self.labels[mask]


def read_feature_csv(path) -> FeatureTable:
    """Parse a feature CSV (descriptor input or augmented output)."""
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None:
            raise HarnessError(f"{path}: empty file")
        if "label" not in header or SPLIT_COLUMN not in header:
            raise HarnessError(f"{path}: need label and split columns")
        has_id = header[0] == "id"
        label_idx = header.index("label")
        split_idx = header.index(SPLIT_COLUMN)
        special = {label_idx, split_idx}
        if has_id:
            special.add(0)
        feat_idx = [j for j in range(len(header)) if j not in special]
        ids, values, labels, tags = [], [], [], []
        for row in reader:
            if len(row) != len(header):
                raise HarnessError(f"{path}: ragged row of {len(row)} cells")
            ids.append(row[0] if has_id else str(len(ids)))
            values.append([float(row[j]) for j in feat_idx])
            labels.append(int(float(row[label_idx])))
            tags.append(row[split_idx])
    return FeatureTable(
        ids,
        [header[j] for j in feat_idx],
        np.asarray(values, dtype=np.float64),
        np.asarray(labels),
        tags,
    )


def build_task_csv(task: str, seed: int, out_path, *, data_dir=None) -> Path:
    """Describe every molecule of one task and seed into a single CSV with
    split tags. Unparseable SMILES are dropped with a warning, never
    silently."""
    out_path = Path(out_path)
    if out_path.exists():
        return out_path
    splits = fetch_benchmark(task, data_dir, seeds=(seed,))[seed]
    ids, smiles, labels, tags = [], [], [], []
    for tag, split_path in splits.as_dict().items():
        for mol_id, smi, label in read_split_csv(split_path):
            ids.append(mol_id)
            smiles.append(smi)
            labels.append(label)
            tags.append(tag)
    result = maplight_descriptors(smiles)
    for index, smi, reason in result.excluded:
        log.warning("%s seed %s: dropped %s (%s): %s",
                    task, seed, ids[index], smi, reason)
    if not result.kept_indices:
        raise HarnessError(f"{task} seed {seed}: no molecule parsed")
    kept = result.kept_indices
    write_feature_csv(
        out_path,
        [ids[i] for i in kept],
        result.names,
        result.rows,
        [labels[i] for i in kept],
        [tags[i] for i in kept],
    )
    return out_path


def _hamfex_command(hamfex_bin=None) -> str:
    if hamfex_bin:
        return str(hamfex_bin)
    found = shutil.which("hamfex")
    if found is None:
        raise HarnessError(
            "the 'hamfex' command is not on PATH; install the "
            "feature-extraction package first"
        )
    return found


def run_extract(input_csv, out_csv, mode: str, *, config_overrides=None,
                hamfex_bin=None, cache_dir=None) -> Path:
    """Invoke the extraction CLI as a subprocess and return the augmented
    CSV path."""
    out_csv = Path(out_csv)
    out_csv.parent.mkdir(parents=True, exist_ok=True)
    config = {"mode": mode}
    config.update(config_overrides or {})
    config_path = out_csv.with_suffix(".config.json")
    config_path.write_text(json.dumps(config, sort_keys=True, indent=2))
    argv = [
        _hamfex_command(hamfex_bin), "extract",
        "--input", str(input_csv),
        "--split-col", SPLIT_COLUMN,
        "--config", str(config_path),
        "--out", str(out_csv),
    ]
    if cache_dir is not None:
        argv += ["--cache-dir", str(cache_dir)]
    proc = subprocess.run(argv, capture_output=True, text=True)
    if proc.returncode != 0:
        raise HarnessError(
            f"hamfex extract failed (exit {proc.returncode}): "
            f"{proc.stderr.strip()[-2000:]}"
        )
    return out_csv


def run_one(task: str, seed: int, mode: str, *, out_dir, data_dir=None,
            config_overrides=None, hamfex_bin=None) -> tuple[
                BenchmarkRun, object, FeatureTable]:
    """One benchmark x seed x mode run.

    Returns the metric record, the fitted model, and the augmented feature
    table so importance analysis can reuse both without retraining.
    """
    out_dir = Path(out_dir)
    seed_dir = out_dir / "work" / task / f"seed{seed}"
    descriptors = build_task_csv(
        task, seed, seed_dir / "descriptors.csv", data_dir=data_dir
    )
    augmented = run_extract(
        descriptors, seed_dir / f"{mode}.csv", mode,
        config_overrides=config_overrides, hamfex_bin=hamfex_bin,
        cache_dir=seed_dir / "cache",
    )
    table = read_feature_csv(augmented)
    train_x, train_y = table.rows("train", "valid")
    test_x, test_y = table.rows("test")
    run, model = gbdt_train_eval(
        train_x, train_y, test_x, test_y,
        benchmark=task, mode=mode, seed=seed, metric=metric_for(task),
    )
    record = out_dir / "results" / task / mode / f"seed{seed}.json"
    record.parent.mkdir(parents=True, exist_ok=True)
    record.write_text(json.dumps(run.to_json_dict(), sort_keys=True,
                                 indent=2) + "\n")
    return run, model, table


@dataclass
class MatrixResult:
    runs: list = field(default_factory=list)
    importance: dict = field(default_factory=dict)


def run_matrix(tasks, *, out_dir, seeds=SEEDS, modes=MODES, data_dir=None,
               config_overrides=None, hamfex_bin=None, shap_rows: int = 24,
               shap_orderings: int = 8) -> MatrixResult:
    """Run every task x seed x mode combination and write the three
    aggregate tables.

    SHAP importance is computed once per task, on the quantum model of the
    first seed, over test rows.
    """
    out_dir = Path(out_dir)
    result = MatrixResult()
    for task in tasks:
        for seed in seeds:
            for mode in modes:
                log.info("running %s seed=%s mode=%s", task, seed, mode)
                run, model, table = run_one(
                    task, seed, mode, out_dir=out_dir, data_dir=data_dir,
                    config_overrides=config_overrides, hamfex_bin=hamfex_bin,
                )
                result.runs.append(run)
                if mode == "quantum" and seed == seeds[0]:
                    test_x, _ = table.rows("test")
                    result.importance[task] = shap_importance(
                        model, test_x, table.names,
                        n_rows=shap_rows, n_orderings=shap_orderings,
                        seed=seed,
                    )
    write_table1(result.runs, out_dir / "table1.csv")
    write_table2(result.runs, out_dir / "table2.csv")
    write_table3(result.importance, out_dir / "table3.csv")
    return result


def _ordered_tasks(present, preferred) -> list:
    ordered = [t for t in preferred if t in present]
    ordered += sorted(t for t in present if t not in preferred)
    return ordered


def _by_task_mode(runs) -> dict:
    grouped: dict = {}
    for run in runs:
        grouped.setdefault((run.benchmark, run.mode), []).append(run)
    for group in grouped.values():
        group.sort(key=lambda r: r.seed)
    return grouped


def _mean_std_text(values) -> str:
    mean = float(np.mean(values))
    std = float(np.std(values, ddof=1)) if len(values) > 1 else 0.0
    return f"{mean:.3f} ± {std:.3f}"


def _write_csv(path, header, rows) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)


def write_table1(runs, path) -> None:
    """Per-task metric summary, one mean +/- std cell per mode."""
    grouped = _by_task_mode(runs)
    tasks = _ordered_tasks({run.benchmark for run in runs}, TABLE1_ORDER)
    rows = []
    for task in tasks:
        row = [task, metric_for(task)]
        for mode in MODES:
            group = grouped.get((task, mode))
            row.append(
                _mean_std_text([r.value for r in group]) if group else ""
            )
        rows.append(row)
    _write_csv(path, ["benchmark", "metric", *MODES], rows)


def _paired_seeds(grouped, task, mode_a, mode_b):
    runs_a = {r.seed: r.value for r in grouped.get((task, mode_a), [])}
    runs_b = {r.seed: r.value for r in grouped.get((task, mode_b), [])}
    common = sorted(set(runs_a) & set(runs_b))
    a = np.array([runs_a[s] for s in common])
    b = np.array([runs_b[s] for s in common])
    return a, b


def write_table2(runs, path) -> None:
    """Paired t-tests across seeds: quantum vs baseline and quantum vs
    polynomial, with Cohen's d for the quantum-baseline contrast."""
    grouped = _by_task_mode(runs)
    tasks = _ordered_tasks({run.benchmark for run in runs}, TABLE2_ORDER)
    rows = []
    for task in tasks:
        q, b = _paired_seeds(grouped, task, "quantum", "baseline")
        q2, p = _paired_seeds(grouped, task, "quantum", "polynomial")
        # a comparison needs two or more paired seeds; report whichever
        # contrasts the run matrix actually produced
        cells = {"q_vs_b_p": "", "q_vs_p_p": "", "cohens_d": ""}
        if len(q) >= 2:
            t_qb = stats.ttest_rel(q, b)
            cells["q_vs_b_p"] = f"{float(t_qb.pvalue):.6g}"
            cells["cohens_d"] = \
                f"{float(t_qb.statistic) / math.sqrt(len(q)):.6g}"
        if len(q2) >= 2:
            t_qp = stats.ttest_rel(q2, p)
            cells["q_vs_p_p"] = f"{float(t_qp.pvalue):.6g}"
        if any(cells.values()):
            rows.append([task, cells["q_vs_b_p"], cells["q_vs_p_p"],
                         cells["cohens_d"]])
    _write_csv(path, ["benchmark", "q_vs_b_p", "q_vs_p_p", "cohens_d"], rows)


def write_table3(importance, path) -> None:
    """Quantum share of SHAP importance per task, as percentages."""
    tasks = _ordered_tasks(set(importance), TABLE3_ORDER)
    rows = [
        [
            task,
            f"{importance[task].quantum_importance_fraction * 100:.2f}",
            f"{importance[task].top50_quantum_fraction * 100:.2f}",
        ]
        for task in tasks
    ]
    _write_csv(path, ["benchmark", "quantum_pct", "top50_quantum_pct"], rows)
