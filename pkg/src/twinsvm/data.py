"""Labeled-matrix data model, file parsers/writers, scaling, and splits.

A :class:`Dataset` stores a dense float64 sample matrix together with
integer label indices and a ``class_map`` listing the original label
values in order of first appearance (so label ``i`` means
``class_map[i]``).  Datasets are immutable after construction.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field

import numpy as np

from .errors import ParseError, ValidationError
from .validation import as_matrix


def _parse_label(token: str):
    """Canonicalize a label token: int if possible, then float, else str."""
    token = token.strip()
    try:
        return int(token)
    except ValueError:
        pass
    try:
        return float(token)
    except ValueError:
        return token


def _format_value(v: float) -> str:
    """Shortest decimal that round-trips to the same float64."""
    return repr(float(v))


@dataclass(frozen=True)
class Dataset:
    """Immutable labeled sample matrix.

    ``labels[i]`` indexes into ``class_map``; ``class_map`` holds the
    original label values in order of first appearance.
    """

    samples: np.ndarray
    labels: np.ndarray
    class_map: tuple = field(default_factory=tuple)

    def __post_init__(self) -> None:
        samples = np.ascontiguousarray(self.samples, dtype=np.float64)
        labels = np.asarray(self.labels, dtype=np.int64)
        if samples.ndim != 2:
            raise ValidationError("samples must be a 2-D matrix")
        if labels.ndim != 1 or labels.shape[0] != samples.shape[0]:
            raise ValidationError("labels length must equal the sample row count")
        if labels.size and (labels.min() < 0 or labels.max() >= len(self.class_map)):
            raise ValidationError("labels must index into class_map")
        samples.setflags(write=False)
        labels.setflags(write=False)
        object.__setattr__(self, "samples", samples)
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "class_map", tuple(self.class_map))

    @property
    def sample_count(self) -> int:
        return self.samples.shape[0]

    @property
    def feature_count(self) -> int:
        return self.samples.shape[1]

    @property
    def class_count(self) -> int:
        return len(self.class_map)

    @classmethod
    def from_arrays(cls, X, y) -> "Dataset":
        """Build a Dataset from a sample matrix and raw label values.

        The class map is the distinct label values in order of first
        appearance.
        """
        X = as_matrix(X, "X")
        y = np.asarray(y)
        if y.ndim != 1 or y.shape[0] != X.shape[0]:
            raise ValidationError("y must be 1-D with one label per row of X")
        class_map: list = []
        index: dict = {}
        labels = np.empty(y.shape[0], dtype=np.int64)
        for i, value in enumerate(y):
            key = value.item() if isinstance(value, np.generic) else value
            if key not in index:
                index[key] = len(class_map)
                class_map.append(key)
            labels[i] = index[key]
        return cls(X, labels, tuple(class_map))

    def original_labels(self) -> np.ndarray:
        """Labels as their original values, in row order."""
        return np.asarray([self.class_map[i] for i in self.labels])

    def subset(self, indices) -> "Dataset":
        """Row subset sharing this dataset's class map."""
        idx = np.asarray(indices, dtype=np.int64)
        return Dataset(self.samples[idx], self.labels[idx], self.class_map)


def _require_two_classes(class_map) -> None:
    if len(class_map) < 2:
        raise ValidationError(
            f"dataset must contain at least 2 classes, found {len(class_map)}"
        )


def parse_csv(text: str, label_column: int = 0, has_header: bool = False,
              *, require_two_classes: bool = True) -> Dataset:
    """Parse comma-separated rows with one label column.

    Every row must have the same field count; feature fields must parse as
    real numbers.  Raises :class:`ParseError` with the offending 1-based
    line number otherwise.  ``require_two_classes=False`` admits files with
    a single label value (useful for test sets fed to a trained model).
    """
    reader = csv.reader(io.StringIO(text))
    rows: list[list[str]] = []
    line_numbers: list[int] = []
    for lineno, row in enumerate(reader, start=1):
        if not row or (len(row) == 1 and row[0].strip() == ""):
            continue
        rows.append(row)
        line_numbers.append(lineno)
    if has_header and rows:
        rows = rows[1:]
        line_numbers = line_numbers[1:]
    if not rows:
        raise ParseError("empty input: no data rows found")

    width = len(rows[0])
    if not 0 <= label_column < width:
        raise ValidationError(
            f"label column {label_column} out of range for {width}-field rows"
        )
    n, d = len(rows), width - 1
    samples = np.empty((n, d))
    raw_labels = []
    for i, (row, lineno) in enumerate(zip(rows, line_numbers)):
        if len(row) != width:
            raise ParseError(
                f"line {lineno}: expected {width} fields, found {len(row)}"
            )
        raw_labels.append(_parse_label(row[label_column]))
        j = 0
        for col, cell in enumerate(row):
            if col == label_column:
                continue
            try:
                samples[i, j] = float(cell)
            except ValueError:
                raise ParseError(
                    f"line {lineno}: non-numeric feature value {cell.strip()!r}"
                ) from None
            j += 1
    ds = Dataset.from_arrays(samples, np.asarray(raw_labels, dtype=object))
    if require_two_classes:
        _require_two_classes(ds.class_map)
    return ds


def parse_csv_matrix(text: str, has_header: bool = False) -> np.ndarray:
    """Parse unlabeled comma-separated rows: every field is a feature."""
    reader = csv.reader(io.StringIO(text))
    rows: list[np.ndarray] = []
    width = None
    seen = 0
    for lineno, row in enumerate(reader, start=1):
        if not row or (len(row) == 1 and row[0].strip() == ""):
            continue
        seen += 1
        if has_header and seen == 1:
            continue
        if width is None:
            width = len(row)
        elif len(row) != width:
            raise ParseError(
                f"line {lineno}: expected {width} fields, found {len(row)}"
            )
        try:
            rows.append(np.asarray([float(cell) for cell in row]))
        except ValueError:
            raise ParseError(f"line {lineno}: non-numeric feature value") from None
    if not rows:
        raise ParseError("empty input: no data rows found")
    return np.vstack(rows)


def parse_libsvm(text: str, *, require_two_classes: bool = True) -> Dataset:
    """Parse sparse ``<label> <index>:<value> ...`` lines into a dense Dataset.

    Indices are 1-based and must be strictly increasing within a line; the
    feature count is the maximum index seen anywhere.
    """
    entries: list[tuple[object, list[tuple[int, float]]]] = []
    max_index = 0
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        label = _parse_label(parts[0])
        pairs: list[tuple[int, float]] = []
        prev = 0
        for part in parts[1:]:
            try:
                idx_str, val_str = part.split(":", 1)
                idx = int(idx_str)
                val = float(val_str)
            except ValueError:
                raise ParseError(f"line {lineno}: malformed entry {part!r}") from None
            if idx < 1:
                raise ParseError(f"line {lineno}: feature index {idx} is below 1")
            if idx <= prev:
                raise ParseError(
                    f"line {lineno}: feature index {idx} is not increasing"
                )
            prev = idx
            pairs.append((idx, val))
            max_index = max(max_index, idx)
        entries.append((label, pairs))
    if not entries:
        raise ParseError("empty input: no data rows found")
    if max_index == 0:
        raise ValidationError("no feature values found in any row")

    samples = np.zeros((len(entries), max_index))
    raw_labels = []
    for i, (label, pairs) in enumerate(entries):
        raw_labels.append(label)
        for idx, val in pairs:
            samples[i, idx - 1] = val
    ds = Dataset.from_arrays(samples, np.asarray(raw_labels, dtype=object))
    if require_two_classes:
        _require_two_classes(ds.class_map)
    return ds


def write_csv(ds: Dataset, header: bool = False) -> str:
    """Serialize with the label in column 0; inverse of :func:`parse_csv`."""
    out = io.StringIO()
    if header:
        out.write("label," + ",".join(f"f{j}" for j in range(ds.feature_count)) + "\n")
    originals = ds.original_labels()
    for i in range(ds.sample_count):
        cells = [str(originals[i])]
        cells.extend(_format_value(v) for v in ds.samples[i])
        out.write(",".join(cells) + "\n")
    return out.getvalue()


def write_libsvm(ds: Dataset) -> str:
    """Serialize to the sparse LIBSVM format, omitting zero entries.

    Trailing all-zero feature columns are not representable in this format,
    so the reparsed dimension matches only when some row has a nonzero
    value in the last column.
    """
    out = io.StringIO()
    originals = ds.original_labels()
    for i in range(ds.sample_count):
        parts = [str(originals[i])]
        row = ds.samples[i]
        for j in np.nonzero(row)[0]:
            parts.append(f"{j + 1}:{_format_value(row[j])}")
        out.write(" ".join(parts) + "\n")
    return out.getvalue()


def load_dataset(path, fmt: str = "csv", label_column: int = 0,
                 has_header: bool = False, *,
                 require_two_classes: bool = True) -> Dataset:
    """Read a dataset file in either supported format."""
    with open(path, "r", encoding="utf-8") as fh:
        text = fh.read()
    if fmt == "csv":
        return parse_csv(text, label_column=label_column, has_header=has_header,
                         require_two_classes=require_two_classes)
    if fmt == "libsvm":
        return parse_libsvm(text, require_two_classes=require_two_classes)
    raise ValidationError(f"unknown dataset format {fmt!r}")


@dataclass(frozen=True)
class ScalerParams:
    """Per-feature min/max of the training data, for [0, 1] scaling."""

    minimum: np.ndarray
    maximum: np.ndarray

    def __post_init__(self) -> None:
        mn = np.asarray(self.minimum, dtype=np.float64)
        mx = np.asarray(self.maximum, dtype=np.float64)
        if mn.shape != mx.shape or mn.ndim != 1:
            raise ValidationError("scaler min/max must be 1-D vectors of equal length")
        if np.any(mn > mx):
            raise ValidationError("scaler requires min <= max per feature")
        mn.setflags(write=False)
        mx.setflags(write=False)
        object.__setattr__(self, "minimum", mn)
        object.__setattr__(self, "maximum", mx)

    def transform(self, X) -> np.ndarray:
        """Map features to [0, 1]; values outside the fitted range clamp."""
        X = as_matrix(X, "X", allow_empty=True)
        if X.shape[1] != self.minimum.shape[0]:
            raise ValidationError(
                f"scaler fitted on {self.minimum.shape[0]} features, data has {X.shape[1]}"
            )
        span = self.maximum - self.minimum
        safe = np.where(span > 0, span, 1.0)
        scaled = (X - self.minimum) / safe
        scaled[:, span == 0] = 0.0
        return np.clip(scaled, 0.0, 1.0)


def fit_scaler(ds: Dataset) -> ScalerParams:
    """Per-feature minimum and maximum over the dataset."""
    return ScalerParams(ds.samples.min(axis=0), ds.samples.max(axis=0))


def apply_scaler(ds: Dataset, sp: ScalerParams) -> Dataset:
    """Dataset with features mapped through ``sp`` (labels unchanged)."""
    return Dataset(sp.transform(ds.samples), ds.labels, ds.class_map)


@dataclass(frozen=True)
class FoldPlan:
    """Assignment of each sample to one of ``k`` cross-validation folds."""

    k: int
    assignments: np.ndarray
    seed: int

    def __post_init__(self) -> None:
        a = np.asarray(self.assignments, dtype=np.int64)
        a.setflags(write=False)
        object.__setattr__(self, "assignments", a)

    def _check_fold(self, fold: int) -> None:
        if not 0 <= fold < self.k:
            raise ValidationError(
                f"fold index {fold} out of range for {self.k} folds")

    def test_indices(self, fold: int) -> np.ndarray:
        self._check_fold(fold)
        return np.flatnonzero(self.assignments == fold)

    def train_indices(self, fold: int) -> np.ndarray:
        self._check_fold(fold)
        return np.flatnonzero(self.assignments != fold)


def kfold_split(n: int, k: int, seed: int) -> FoldPlan:
    """Random near-equal folds: a seeded permutation chunked into k parts."""
    if k < 2 or k > n:
        raise ValidationError(f"fold count must satisfy 2 <= k <= n, got k={k}, n={n}")
    rng = np.random.default_rng(seed)
    perm = rng.permutation(n)
    assignments = np.empty(n, dtype=np.int64)
    for fold, chunk in enumerate(np.array_split(perm, k)):
        assignments[chunk] = fold
    return FoldPlan(k, assignments, seed)


def train_test_split(ds: Dataset, test_fraction: float, seed: int) -> tuple[Dataset, Dataset]:
    """Disjoint, exhaustive row partition, deterministic per seed."""
    if not 0.0 < test_fraction < 1.0:
        raise ValidationError("test_fraction must lie strictly between 0 and 1")
    n = ds.sample_count
    n_test = int(np.floor(test_fraction * n + 0.5))
    n_test = min(max(n_test, 1), n - 1)
    perm = np.random.default_rng(seed).permutation(n)
    test_idx = np.sort(perm[:n_test])
    train_idx = np.sort(perm[n_test:])
    return ds.subset(train_idx), ds.subset(test_idx)
