"""Labeled descriptor matrices: loading, validation, binarization, split views.

The on-disk interchange format is CSV (UTF-8, header row, optional leading
``id`` column). Row order is molecule identity: nothing here ever sorts or
deduplicates rows, so externally generated descriptor files stay aligned.

Information boundary: estimators and selection routines accept a
:class:`SplitView`, never a full :class:`LabeledDataset`. The only view the
pipeline hands them is the train+valid view from :func:`fit_view`, so test
rows are unreachable during fitting by construction.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ValidationError

COUNT = "count"
CONTINUOUS = "continuous"
BINARY = "binary"
_KINDS = (COUNT, CONTINUOUS, BINARY)

SPLIT_TAGS = ("train", "valid", "test")
FIT_TAGS = ("train", "valid")


def _infer_kind(column: np.ndarray) -> str:
    values = np.unique(column)
    if np.all(np.isin(values, (0.0, 1.0))):
        return BINARY
    if np.all(values >= 0) and np.all(values == np.floor(values)):
        return COUNT
    return CONTINUOUS


def binarize_values(values: np.ndarray) -> np.ndarray:
    """Presence threshold: strictly positive -> 1, everything else -> 0."""
    return (np.asarray(values) > 0).astype(np.float64)


@dataclass
class FeatureMatrix:
    """Dense matrix of named descriptor columns with per-column kind tags."""

    column_names: list[str]
    values: np.ndarray
    column_kinds: list[str]

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=np.float64)
        if self.values.ndim != 2:
            raise ValidationError("feature values must be a 2-D matrix")
        if self.values.shape[1] != len(self.column_names):
            raise ValidationError(
                f"{self.values.shape[1]} value columns but "
                f"{len(self.column_names)} column names"
            )
        if len(set(self.column_names)) != len(self.column_names):
            raise ValidationError("column names must be unique")
        if len(self.column_kinds) != len(self.column_names):
            raise ValidationError("one kind tag required per column")
        for name, kind in zip(self.column_names, self.column_kinds):
            if kind not in _KINDS:
                raise ValidationError(f"unknown column kind {kind!r} for {name!r}")
        if not np.all(np.isfinite(self.values)):
            bad = np.argwhere(~np.isfinite(self.values))[0]
            raise ValidationError(
                f"non-finite value at row {bad[0] + 1}, "
                f"column {self.column_names[bad[1]]!r}"
            )
        for j, kind in enumerate(self.column_kinds):
            col = self.values[:, j]
            if kind == BINARY and not np.all(np.isin(col, (0.0, 1.0))):
                raise ValidationError(
                    f"column {self.column_names[j]!r} tagged binary has non-0/1 values"
                )
            if kind == COUNT and (np.any(col < 0) or np.any(col != np.floor(col))):
                raise ValidationError(
                    f"column {self.column_names[j]!r} tagged count has "
                    "negative or non-integer values"
                )
        self.values.flags.writeable = False

    @classmethod
    def from_values(cls, column_names: list[str], values: np.ndarray) -> "FeatureMatrix":
        """Build a matrix with kinds inferred per column."""
        values = np.asarray(values, dtype=np.float64)
        kinds = [_infer_kind(values[:, j]) for j in range(values.shape[1])]
        return cls(list(column_names), values, kinds)

    @property
    def n_rows(self) -> int:
        return self.values.shape[0]

    @property
    def n_columns(self) -> int:
        return self.values.shape[1]

    def column_index(self, name: str) -> int:
        try:
            return self.column_names.index(name)
        except ValueError:
            raise ValidationError(f"no column named {name!r}") from None


def binarize(matrix: FeatureMatrix, columns) -> FeatureMatrix:
    """Map the selected columns through the presence threshold (v > 0 -> 1).

    Idempotent; untouched columns keep their values and kinds.
    """
    columns = list(columns)
    for j in columns:
        if not 0 <= j < matrix.n_columns:
            raise ValidationError(f"column index {j} out of range")
    values = matrix.values.copy()
    kinds = list(matrix.column_kinds)
    for j in columns:
        values[:, j] = binarize_values(values[:, j])
        kinds[j] = BINARY
    return FeatureMatrix(list(matrix.column_names), values, kinds)


@dataclass
class LabeledDataset:
    """Feature matrix plus binary labels, optional split tags, optional ids."""

    features: FeatureMatrix
    labels: np.ndarray
    split: np.ndarray | None = None
    ids: list[str] | None = None

    def __post_init__(self):
        self.labels = np.asarray(self.labels, dtype=np.int64)
        n = self.features.n_rows
        if self.labels.shape != (n,):
            raise ValidationError("labels length must equal row count")
        if not np.all(np.isin(self.labels, (0, 1))):
            bad = int(np.argwhere(~np.isin(self.labels, (0, 1)))[0][0])
            raise ValidationError(f"non-binary label at row {bad + 1}")
        if self.split is not None:
            self.split = np.asarray(self.split, dtype=object)
            if self.split.shape != (n,):
                raise ValidationError("split length must equal row count")
            for i, tag in enumerate(self.split):
                if tag not in SPLIT_TAGS:
                    raise ValidationError(
                        f"unknown split tag {tag!r} at row {i + 1}; "
                        f"expected one of {'/'.join(SPLIT_TAGS)}"
                    )
        if self.ids is not None and len(self.ids) != n:
            raise ValidationError("ids length must equal row count")
        self.labels.flags.writeable = False

    @property
    def n_rows(self) -> int:
        return self.features.n_rows


@dataclass
class SplitView:
    """Read-only window over the rows of a dataset carrying given split tags.

    Estimators take a SplitView rather than a LabeledDataset so that rows
    outside the fit view are unrepresentable in their inputs.
    """

    dataset: LabeledDataset
    tags: tuple[str, ...]
    row_indices: np.ndarray = field(init=False)

    def __post_init__(self):
        if self.dataset.split is None:
            mask = np.ones(self.dataset.n_rows, dtype=bool)
        else:
            mask = np.isin(self.dataset.split, self.tags)
        self.row_indices = np.flatnonzero(mask)
        self.row_indices.flags.writeable = False

    @property
    def n_rows(self) -> int:
        return int(self.row_indices.size)

    @property
    def n_columns(self) -> int:
        return self.dataset.features.n_columns

    @property
    def column_names(self) -> list[str]:
        return self.dataset.features.column_names

    @property
    def column_kinds(self) -> list[str]:
        return self.dataset.features.column_kinds

    def column_values(self, j: int) -> np.ndarray:
        return self.dataset.features.values[self.row_indices, j]

    def binary_column(self, j: int) -> np.ndarray:
        return binarize_values(self.column_values(j))

    def labels(self) -> np.ndarray:
        return self.dataset.labels[self.row_indices]


def fit_view(dataset: LabeledDataset) -> SplitView:
    """The train+valid view used for all MI estimation and selection."""
    if dataset.split is None:
        raise ValidationError(
            "dataset has no split tags; load it with a split column "
            "(or tag every row 'train') before fitting"
        )
    view = SplitView(dataset, FIT_TAGS)
    if view.n_rows == 0:
        raise ValidationError("fit view is empty: no rows tagged train or valid")
    return view


def _parse_cell(text: str, row: int, column: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise ValidationError(
            f"cannot parse {text!r} at row {row}, column {column!r}"
        ) from None
    if math.isnan(value) or math.isinf(value):
        raise ValidationError(f"non-finite value at row {row}, column {column!r}")
    return value


def load_labeled_csv(
    path,
    label_column: str,
    split_column: str | None = None,
) -> LabeledDataset:
    """Load a labeled descriptor CSV.

    Header row required. A leading ``id`` column is carried through as row
    identifiers. Column kinds are inferred: values all in {0,1} -> binary,
    non-negative integers -> count, anything else -> continuous.
    """
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ValidationError(f"{path}: empty file, header row required") from None
        rows = list(reader)

    if label_column not in header:
        raise ValidationError(f"{path}: no column named {label_column!r}")
    if split_column is not None and split_column not in header:
        raise ValidationError(f"{path}: no column named {split_column!r}")

    has_id = bool(header) and header[0] == "id"
    label_idx = header.index(label_column)
    split_idx = header.index(split_column) if split_column is not None else None
    special = {label_idx}
    if split_idx is not None:
        special.add(split_idx)
    if has_id:
        special.add(0)
    feature_idx = [j for j in range(len(header)) if j not in special]
    feature_names = [header[j] for j in feature_idx]

    ids: list[str] | None = [] if has_id else None
    labels: list[int] = []
    split: list[str] | None = [] if split_column is not None else None
    values = np.empty((len(rows), len(feature_idx)), dtype=np.float64)

    for i, row in enumerate(rows):
        row_no = i + 1
        if len(row) != len(header):
            raise ValidationError(
                f"{path}: row {row_no} has {len(row)} cells, expected {len(header)}"
            )
        label = _parse_cell(row[label_idx], row_no, label_column)
        if label not in (0.0, 1.0):
            raise ValidationError(
                f"{path}: non-binary label {row[label_idx]!r} at row {row_no}"
            )
        labels.append(int(label))
        if split is not None:
            tag = row[split_idx]
            if tag not in SPLIT_TAGS:
                raise ValidationError(
                    f"{path}: unknown split tag {tag!r} at row {row_no}"
                )
            split.append(tag)
        if ids is not None:
            ids.append(row[0])
        for k, j in enumerate(feature_idx):
            values[i, k] = _parse_cell(row[j], row_no, header[j])

    features = FeatureMatrix.from_values(feature_names, values)
    return LabeledDataset(
        features,
        np.asarray(labels),
        np.asarray(split, dtype=object) if split is not None else None,
        ids,
    )


def format_value(value) -> str:
    """Shortest decimal text that parses back to the identical float."""
    value = float(value)
    if value == math.floor(value) and abs(value) < 1e16:
        return str(int(value))
    return repr(value)


def _csv_rows(dataset: LabeledDataset, label_column: str, split_column: str):
    features = dataset.features
    header: list[str] = []
    if dataset.ids is not None:
        header.append("id")
    header.extend(features.column_names)
    header.append(label_column)
    if dataset.split is not None:
        header.append(split_column)
    yield header
    for i in range(dataset.n_rows):
        row: list[str] = []
        if dataset.ids is not None:
            row.append(dataset.ids[i])
        row.extend(format_value(v) for v in features.values[i])
        row.append(str(int(dataset.labels[i])))
        if dataset.split is not None:
            row.append(str(dataset.split[i]))
        yield row


def labeled_csv_text(dataset: LabeledDataset, label_column: str = "label",
                     split_column: str = "split") -> str:
    """The dataset's canonical CSV serialization as a string."""
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    for row in _csv_rows(dataset, label_column, split_column):
        writer.writerow(row)
    return buffer.getvalue()


def save_labeled_csv(dataset: LabeledDataset, path, label_column: str = "label",
                     split_column: str = "split") -> None:
    """Write a dataset back to CSV; loading the file reproduces it bit-exactly."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(labeled_csv_text(dataset, label_column, split_column))
