"""hamfex command-line interface.

Subcommands: extract, eval, compare, mi-rank, select, simulate.
Exit codes: 0 success, 2 validation/input error, 3 cache error.

Fitting subcommands (extract, mi-rank, select) need split tags to know the
train+valid rows; when --split-col is omitted they treat every row as
train. eval keeps the distinction: without --split-col it draws a fresh
stratified 80/20 resample per seed instead of using fixed tags.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import shutil
import sys

import numpy as np

from . import qsim
from .dataset import (
    LabeledDataset,
    binarize_values,
    fit_view,
    format_value,
    load_labeled_csv,
)
from .errors import CacheError, ValidationError
from .mi import MiScore
from .pipeline import (
    PipelineConfig,
    cache_paths,
    evaluate_features,
    load_config,
    paired_ttest,
    run_extraction,
)
from .selection import (
    CouplingTable,
    MiRanking,
    derive_couplings,
    derive_qubit_map,
    prefilter_top_k,
    select_pairs,
    select_triads,
)


def _load_dataset(path: str, label_col: str, split_col: str | None,
                  all_train_fallback: bool) -> LabeledDataset:
    dataset = load_labeled_csv(path, label_col, split_col)
    if dataset.split is None and all_train_fallback:
        dataset = LabeledDataset(
            dataset.features,
            dataset.labels,
            np.array(["train"] * dataset.n_rows, dtype=object),
            dataset.ids,
        )
    return dataset


def _add_input_args(parser: argparse.ArgumentParser, split_help: str) -> None:
    parser.add_argument("--input", required=True, help="labeled CSV file")
    parser.add_argument("--label-col", default="label",
                        help="label column name (default: label)")
    parser.add_argument("--split-col", default=None, help=split_help)


def _cmd_extract(args) -> int:
    config = load_config(args.config) if args.config else PipelineConfig()
    dataset = _load_dataset(args.input, args.label_col, args.split_col,
                            all_train_fallback=True)
    run_extraction(config, dataset, args.cache_dir)
    cache_csv, _ = cache_paths(config, dataset, args.cache_dir)
    shutil.copyfile(cache_csv, args.out)
    print(f"wrote {args.out} (cache entry {cache_csv.name})")
    return 0


def _cmd_mi_rank(args) -> int:
    dataset = _load_dataset(args.input, args.label_col, args.split_col,
                            all_train_fallback=True)
    view = fit_view(dataset)
    ranking = prefilter_top_k(view, args.top_k, seed=args.seed)
    with open(args.out, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["feature_name", "mi_nats", "estimator"])
        for j, score in ranking.entries[: ranking.k_selected]:
            writer.writerow([
                view.column_names[j], format_value(score.value), score.estimator,
            ])
    print(f"wrote {args.out} ({ranking.k_selected} of {view.n_columns} columns)")
    return 0


def _read_ranking(path: str, dataset: LabeledDataset) -> MiRanking:
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header != ["feature_name", "mi_nats", "estimator"]:
            raise ValidationError(
                f"{path}: expected header feature_name,mi_nats,estimator"
            )
        entries = []
        for row in reader:
            if len(row) != 3:
                raise ValidationError(f"{path}: malformed row {row}")
            name, value, estimator = row
            j = dataset.features.column_index(name)
            entries.append((j, MiScore(float(value), estimator)))
    if not entries:
        raise ValidationError(f"{path}: ranking is empty")
    return MiRanking(tuple(entries), len(entries))


def _cmd_select(args) -> int:
    dataset = _load_dataset(args.input, args.label_col, args.split_col,
                            all_train_fallback=True)
    view = fit_view(dataset)
    ranking = _read_ranking(args.ranking, dataset)
    pairs = select_pairs(ranking, view, args.theta_pair, args.max_pairs)
    triads = select_triads(pairs, view, args.theta_triad, args.max_triads)
    couplings = derive_couplings(pairs, triads)
    qubit_map = derive_qubit_map(pairs, triads)
    names = dataset.features.column_names
    payload = {
        "pairs": [{"i": i, "j": j, "score": s} for i, j, s in pairs.pairs],
        "triads": [
            {"i": i, "j": j, "k": k, "score": s} for i, j, k, s in triads.triads
        ],
        "couplings": {
            "pairs": [
                {"i": i, "j": j, "c": c} for i, j, c in couplings.pair_couplings
            ],
            "triads": [
                {"i": i, "j": j, "k": k, "c": c}
                for i, j, k, c in couplings.triad_couplings
            ],
            "normalization": couplings.normalization,
        },
        "qubit_map": [
            {"column": col, "column_name": names[col], "qubit": q}
            for col, q in sorted(qubit_map.items())
        ],
        "selected_columns": list(pairs.selected_columns),
    }
    with open(args.out, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2)
        fh.write("\n")
    print(
        f"wrote {args.out} ({len(pairs.pairs)} pairs, {len(triads.triads)} "
        f"triads, {len(qubit_map)} qubits)"
    )
    return 0


def _read_selection(path: str) -> tuple[CouplingTable, dict, dict]:
    with open(path, "r", encoding="utf-8") as fh:
        try:
            payload = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ValidationError(f"{path}: invalid JSON ({exc})") from None
    try:
        couplings = CouplingTable(
            tuple((e["i"], e["j"], e["c"]) for e in payload["couplings"]["pairs"]),
            tuple(
                (e["i"], e["j"], e["k"], e["c"])
                for e in payload["couplings"]["triads"]
            ),
            payload["couplings"]["normalization"],
        )
        qubit_map = {e["column"]: e["qubit"] for e in payload["qubit_map"]}
        column_names = {
            e["column"]: e["column_name"]
            for e in payload["qubit_map"]
            if "column_name" in e
        }
    except (KeyError, TypeError) as exc:
        raise ValidationError(f"{path}: malformed selection file ({exc})") from None
    return couplings, qubit_map, column_names


def _cmd_simulate(args) -> int:
    dataset = _load_dataset(args.input, args.label_col, args.split_col,
                            all_train_fallback=True)
    couplings, qubit_map, column_names = _read_selection(args.selection)
    columns = sorted(qubit_map, key=qubit_map.__getitem__)
    for col in columns:
        if not 0 <= col < dataset.features.n_columns:
            raise ValidationError(f"selection column {col} not in {args.input}")
        expected = column_names.get(col)
        actual = dataset.features.column_names[col]
        if expected is not None and expected != actual:
            raise ValidationError(
                f"selection column {col} is named {expected!r} but {args.input} "
                f"has {actual!r} there; check --label-col/--split-col match the "
                "selection run"
            )
    bits = (
        binarize_values(dataset.features.values[:, columns])
        if columns else np.zeros((dataset.n_rows, 0))
    )
    expectation_sets = qsim.extract_features(
        bits, couplings, qubit_map,
        t=args.time, steps=args.steps, alpha=args.alpha,
        mixing=args.mixing == "on",
    )
    terms = qsim.feature_terms(couplings, qubit_map)
    names = ["q_" + "".join(f"Z{q}" for q in term) for term in terms]
    with open(args.out, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(names)
        for exp_set in expectation_sets:
            writer.writerow([format_value(v) for v in exp_set.values()])
    print(f"wrote {args.out} ({dataset.n_rows} rows, {len(names)} features)")
    return 0


def _cmd_eval(args) -> int:
    dataset = load_labeled_csv(args.features, args.label_col, args.split_col)
    report = evaluate_features(
        dataset, args.seeds, args.metric, l2=args.l2, epochs=args.epochs
    )
    with open(args.report, "w", encoding="utf-8") as fh:
        json.dump(report.to_json_dict(), fh, indent=2)
        fh.write("\n")
    print(
        f"{args.metric} over {args.seeds} seeds: "
        f"mean {report.mean:.4f}, std {report.std:.4f}"
    )
    return 0


def _read_report(path: str) -> dict:
    with open(path, "r", encoding="utf-8") as fh:
        try:
            report = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ValidationError(f"{path}: invalid JSON ({exc})") from None
    if "per_seed" not in report:
        raise ValidationError(f"{path}: report has no per_seed values")
    return report


def _cmd_compare(args) -> int:
    report_a = _read_report(args.report_a)
    report_b = _read_report(args.report_b)
    result = paired_ttest(report_a["per_seed"], report_b["per_seed"])
    print(json.dumps({
        "p_value": result.p_value,
        "cohens_d": result.cohens_d,
        "n_seeds": result.n_seeds,
    }))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hamfex",
        description="MI-guided Hamiltonian feature extraction for "
                    "labeled descriptor matrices",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("extract", help="run the full pipeline, write "
                                       "the augmented feature CSV")
    _add_input_args(p, "split column; omitted = every row is train")
    p.add_argument("--config", default=None, help="pipeline config JSON")
    p.add_argument("--out", required=True, help="augmented CSV path")
    p.add_argument("--cache-dir", default=None,
                   help="feature cache directory (default: "
                        "$HAMFEX_CACHE_DIR or ~/.cache/hamfex)")
    p.set_defaults(func=_cmd_extract)

    p = sub.add_parser("eval", help="train/evaluate the linear classifier "
                                    "on a feature CSV")
    p.add_argument("--features", required=True, help="feature CSV file")
    p.add_argument("--label-col", default="label")
    p.add_argument("--split-col", default=None,
                   help="split column; omitted = stratified 80/20 "
                        "resample per seed")
    p.add_argument("--seeds", type=int, default=5)
    p.add_argument("--metric", choices=["auroc", "auprc"], default="auroc")
    p.add_argument("--l2", type=float, default=1e-3)
    p.add_argument("--epochs", type=int, default=2000)
    p.add_argument("--report", required=True, help="output report JSON")
    p.set_defaults(func=_cmd_eval)

    p = sub.add_parser("compare", help="paired t-test between two reports")
    p.add_argument("--report-a", required=True)
    p.add_argument("--report-b", required=True)
    p.set_defaults(func=_cmd_compare)

    p = sub.add_parser("mi-rank", help="rank columns by MI with the label")
    _add_input_args(p, "split column; omitted = every row is train")
    p.add_argument("--top-k", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True, help="output ranking CSV")
    p.set_defaults(func=_cmd_mi_rank)

    p = sub.add_parser("select", help="select pairs/triads and derive "
                                      "couplings from a ranking")
    _add_input_args(p, "split column; omitted = every row is train")
    p.add_argument("--ranking", required=True, help="ranking CSV from mi-rank")
    p.add_argument("--theta-pair", type=float, default=0.1)
    p.add_argument("--theta-triad", type=float, default=0.15)
    p.add_argument("--max-pairs", type=int, default=30)
    p.add_argument("--max-triads", type=int, default=10)
    p.add_argument("--out", required=True, help="output selection JSON")
    p.set_defaults(func=_cmd_select)

    p = sub.add_parser("simulate", help="extract quantum features from a "
                                        "selection file")
    _add_input_args(p, "split column (unused for simulation)")
    p.add_argument("--selection", required=True, help="selection JSON")
    p.add_argument("--time", type=float, default=0.5)
    p.add_argument("--steps", type=int, default=1)
    p.add_argument("--alpha", type=float, default=math.pi / 4)
    p.add_argument("--mixing", choices=["on", "off"], default="on")
    p.add_argument("--out", required=True, help="output feature CSV")
    p.set_defaults(func=_cmd_simulate)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CacheError as exc:
        print(f"cache error: {exc}", file=sys.stderr)
        return 3
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
