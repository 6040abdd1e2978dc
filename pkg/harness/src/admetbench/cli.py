"""Command line front end for the benchmark harness."""

import argparse
import csv
import json
import logging
import sys

from .data import data_available, default_data_dir, fetch_benchmark
from .descriptors import maplight_descriptors
from .errors import DataUnavailableError, HarnessError, SmilesError
from .runner import run_matrix
from .tasks import MODES, SEEDS, TASKS, metric_for


def _cmd_tasks(args) -> int:
    for name, (dataset, metric) in TASKS.items():
        status = "cached" if data_available(name, args.data_dir) else "missing"
        print(f"{name}\t{dataset}\t{metric}\t{status}")
    return 0


def _cmd_fetch(args) -> int:
    for task in args.task:
        splits = fetch_benchmark(task, args.data_dir)
        for seed, files in sorted(splits.items()):
            print(f"{task} seed{seed}: {files.train.parent}")
    return 0


def _cmd_describe(args) -> int:
    with open(args.input, encoding="utf-8") as fh:
        smiles = [line.strip() for line in fh if line.strip()]
    result = maplight_descriptors(smiles)
    with open(args.out, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["row", *result.names])
        for index, row in zip(result.kept_indices, result.rows):
            writer.writerow([index, *row])
    for index, smi, reason in result.excluded:
        print(f"excluded row {index}: {smi!r}: {reason}", file=sys.stderr)
    print(f"{len(result.rows)} rows x {len(result.names)} columns "
          f"({result.version})")
    return 0


def _cmd_run(args) -> int:
    tasks = args.task or list(TASKS)
    overrides = json.loads(args.config_overrides) if args.config_overrides \
        else None
    result = run_matrix(
        tasks,
        out_dir=args.out_dir,
        seeds=tuple(args.seeds),
        modes=tuple(args.modes),
        data_dir=args.data_dir,
        config_overrides=overrides,
        hamfex_bin=args.hamfex_bin,
    )
    for run in result.runs:
        print(f"{run.benchmark}\tseed{run.seed}\t{run.mode}\t"
              f"{run.metric}={run.value:.4f}")
    return 0


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="admetbench",
        description="ADMET benchmark harness: molecular descriptors, "
        "quantum-augmented features via the hamfex CLI, gradient-boosted "
        "trees, and importance tables.",
    )
    parser.add_argument("--data-dir", default=None,
                        help=f"split cache (default {default_data_dir()})")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("tasks", help="list the ten benchmarks and their "
                       "cache status")
    p.set_defaults(func=_cmd_tasks)

    p = sub.add_parser("fetch", help="download or verify benchmark splits")
    p.add_argument("task", nargs="+")
    p.set_defaults(func=_cmd_fetch)

    p = sub.add_parser("describe", help="compute descriptor rows for a "
                       "file of SMILES, one per line")
    p.add_argument("--input", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_describe)

    p = sub.add_parser("run", help="run the benchmark matrix and write "
                       "result JSONs plus table1-3 CSVs")
    p.add_argument("--task", action="append", default=None,
                   help="repeatable; default: all ten")
    p.add_argument("--out-dir", required=True)
    p.add_argument("--seeds", type=int, nargs="+", default=list(SEEDS))
    p.add_argument("--modes", nargs="+", default=list(MODES),
                   choices=list(MODES))
    p.add_argument("--config-overrides", default=None,
                   help="JSON object merged into the extraction config")
    p.add_argument("--hamfex-bin", default=None,
                   help="path to the hamfex executable (default: PATH)")
    p.set_defaults(func=_cmd_run)

    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        return args.func(args)
    except (HarnessError, SmilesError, DataUnavailableError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
