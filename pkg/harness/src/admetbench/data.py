"""Benchmark data access: local split cache first, TDC download if present.

The cache layout is plain CSV so runs are reproducible without network:

    <data_dir>/<task>/seed<k>/train.csv
    <data_dir>/<task>/seed<k>/valid.csv
    <data_dir>/<task>/seed<k>/test.csv

each with header ``id,smiles,label``. ``fetch_benchmark`` serves from this
cache when it exists; otherwise it tries the ``tdc`` package (scaffold
split, seeds 1-5) and writes the cache; if neither is possible it raises
DataUnavailableError with instructions rather than fabricating data.
"""

import csv
import os
from dataclasses import dataclass
from pathlib import Path

from .errors import DataUnavailableError, HarnessError
from .tasks import SEEDS, require_task

SPLIT_NAMES = ("train", "valid", "test")


def default_data_dir() -> Path:
    env = os.environ.get("ADMETBENCH_DATA_DIR")
    if env:
        return Path(env)
    return Path.home() / ".cache" / "admetbench" / "data"


@dataclass(frozen=True)
class SplitFiles:
    task: str
    seed: int
    train: Path
    valid: Path
    test: Path

    def as_dict(self) -> dict[str, Path]:
        return {"train": self.train, "valid": self.valid, "test": self.test}


def split_dir(data_dir: Path, task: str, seed: int) -> Path:
    return Path(data_dir) / task / f"seed{seed}"


def _have_all_splits(directory: Path) -> bool:
    return all((directory / f"{name}.csv").exists() for name in SPLIT_NAMES)


def read_split_csv(path: Path) -> list[tuple[str, str, int]]:
    """Rows of (id, smiles, label) from one split file."""
    out = []
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        required = {"id", "smiles", "label"}
        if reader.fieldnames is None or not required <= set(reader.fieldnames):
            raise HarnessError(
                f"{path}: expected columns id,smiles,label, "
                f"got {reader.fieldnames}"
            )
        for row_no, row in enumerate(reader, start=1):
            label = row["label"].strip()
            if label not in {"0", "1"}:
                raise HarnessError(
                    f"{path} row {row_no}: label must be 0 or 1, got {label!r}"
                )
            out.append((row["id"], row["smiles"], int(label)))
    return out


def write_split_csv(path: Path, rows) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["id", "smiles", "label"])
        for mol_id, smiles, label in rows:
            writer.writerow([mol_id, smiles, int(label)])


def _download_with_tdc(task: str, data_dir: Path) -> None:
    dataset_name, _ = require_task(task)
    try:
        from tdc.single_pred import ADME, Tox
    except ImportError as exc:
        raise DataUnavailableError(
            f"no cached splits for {task} under {data_dir} and the 'tdc' "
            "package is not installed; either install pytdc on a networked "
            "machine and re-run, or place train/valid/test CSVs "
            "(columns id,smiles,label) under "
            f"{split_dir(data_dir, task, 1)} etc."
        ) from exc

    loaders = (ADME, Tox)
    data = None
    for loader in loaders:
        try:
            data = loader(name=dataset_name)
            break
        except Exception:  # noqa: BLE001 - try the other loader group
            continue
    if data is None:
        raise DataUnavailableError(
            f"tdc could not load dataset {dataset_name!r} for task {task}"
        )
    for seed in SEEDS:
        splits = data.get_split(method="scaffold", seed=seed)
        for name in SPLIT_NAMES:
            frame = splits[name]
            rows = [
                (str(row["Drug_ID"]), str(row["Drug"]), int(row["Y"]))
                for _, row in frame.iterrows()
            ]
            write_split_csv(
                split_dir(data_dir, task, seed) / f"{name}.csv", rows
            )


def fetch_benchmark(task: str, data_dir=None,
                    seeds=SEEDS) -> dict[int, SplitFiles]:
    """Split files per seed for one task, from cache or TDC.

    Repeated calls are served from the cache byte-for-byte; the download
    path writes the cache once and subsequent calls never touch it again.
    """
    require_task(task)
    data_dir = Path(data_dir) if data_dir is not None else default_data_dir()
    missing = [
        seed for seed in seeds
        if not _have_all_splits(split_dir(data_dir, task, seed))
    ]
    if missing:
        _download_with_tdc(task, data_dir)
        still_missing = [
            seed for seed in seeds
            if not _have_all_splits(split_dir(data_dir, task, seed))
        ]
        if still_missing:
            raise DataUnavailableError(
                f"task {task}: seeds {still_missing} unavailable after "
                "download"
            )
    out = {}
    for seed in seeds:
        base = split_dir(data_dir, task, seed)
        out[seed] = SplitFiles(
            task, seed,
            base / "train.csv", base / "valid.csv", base / "test.csv",
        )
    return out


def data_available(task: str, data_dir=None, seeds=SEEDS) -> bool:
    """True when every requested split is already cached locally."""
    try:
        require_task(task)
    except HarnessError:
        return False
    data_dir = Path(data_dir) if data_dir is not None else default_data_dir()
    return all(
        _have_all_splits(split_dir(data_dir, task, seed)) for seed in seeds
    )
