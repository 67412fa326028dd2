"""Tabular data handling: CSV ingestion, one-hot encoding, dedup, splitting.

A Dataset is an immutable n x d float64 matrix with named columns. Class
labels live in LabelVector objects whose integer ids come from one shared
string-to-id map built in first-occurrence order, so ids from different
label columns of the same file are directly comparable.
"""

from __future__ import annotations

import csv
import hashlib
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import (
    DegenerateSplit,
    EmptyDataset,
    LengthMismatch,
    MissingColumn,
    ParseError,
)


@dataclass(frozen=True)
class Dataset:
    """Immutable feature matrix with column names.

    categorical_levels records, for columns ingested as strings, the distinct
    raw values in first-occurrence order; the matrix then stores the level
    index of each cell until one-hot encoding replaces the column.
    """

    columns: tuple[str, ...]
    values: np.ndarray
    categorical_levels: dict[str, tuple[str, ...]] = field(default_factory=dict)

    def __post_init__(self):
        vals = np.ascontiguousarray(self.values, dtype=np.float64)
        if vals.ndim != 2:
            raise LengthMismatch("values must be a 2-d matrix")
        object.__setattr__(self, "values", vals)
        vals.setflags(write=False)
        if len(self.columns) != vals.shape[1]:
            raise LengthMismatch(
                f"{len(self.columns)} column names for {vals.shape[1]} columns"
            )
        if len(set(self.columns)) != len(self.columns):
            raise LengthMismatch("column names must be unique")
        if vals.shape[1] < 1:
            raise EmptyDataset("dataset needs at least one feature column")
        if vals.size and not np.isfinite(vals).all():
            raise ParseError(-1, "?", "non-finite value")

    @property
    def n(self) -> int:
        return self.values.shape[0]

    @property
    def d(self) -> int:
        return self.values.shape[1]

    def column_index(self, name: str) -> int:
        try:
            return self.columns.index(name)
        except ValueError:
            raise MissingColumn(name, "dataset") from None

    def take_rows(self, idx: np.ndarray) -> "Dataset":
        return Dataset(self.columns, self.values[idx], self.categorical_levels)

    def fingerprint(self) -> str:
        h = hashlib.sha256()
        h.update(repr(self.columns).encode())
        h.update(str(self.values.shape).encode())
        h.update(self.values.tobytes())
        return h.hexdigest()


@dataclass(frozen=True)
class LabelVector:
    """Dense non-negative integer class ids, plus the id -> name map."""

    labels: np.ndarray
    num_classes: int
    classes: tuple[str, ...] = ()

    def __post_init__(self):
        arr = np.ascontiguousarray(self.labels, dtype=np.int64)
        object.__setattr__(self, "labels", arr)
        arr.setflags(write=False)
        if arr.ndim != 1:
            raise LengthMismatch("labels must be one-dimensional")
        if arr.size and (arr.min() < 0 or arr.max() >= self.num_classes):
            raise LengthMismatch("class ids must lie in [0, num_classes)")

    def __len__(self) -> int:
        return self.labels.shape[0]

    def take(self, idx: np.ndarray) -> "LabelVector":
        return LabelVector(self.labels[idx], self.num_classes, self.classes)


@dataclass(frozen=True)
class SplitSpec:
    train_fraction: float
    seed: int

    def __post_init__(self):
        if not (0.0 < self.train_fraction < 1.0):
            raise DegenerateSplit(
                f"train_fraction must be in (0, 1), got {self.train_fraction}"
            )


def labels_from_strings(
    raw_columns: Sequence[Sequence[str]], classes: Sequence[str] | None = None
) -> list[LabelVector]:
    """Encode one or more string label columns against one shared map.

    The map is built in first-occurrence order scanning rows, and within a
    row the columns in the given order, so ids are comparable across columns.
    """
    if classes is None:
        mapping: dict[str, int] = {}
        n = len(raw_columns[0])
        for i in range(n):
            for col in raw_columns:
                v = col[i]
                if v not in mapping:
                    mapping[v] = len(mapping)
    else:
        mapping = {c: i for i, c in enumerate(classes)}
        # values absent from the supplied map get fresh ids past its end
        for col in raw_columns:
            for v in col:
                if v not in mapping:
                    mapping[v] = len(mapping)
    names = tuple(sorted(mapping, key=mapping.get))
    out = []
    for col in raw_columns:
        ids = np.fromiter((mapping[v] for v in col), dtype=np.int64, count=len(col))
        out.append(LabelVector(ids, len(mapping), names))
    return out


def load_csv(
    path,
    label_columns: Sequence[str],
    categorical: Sequence[str] = (),
) -> tuple[Dataset, list[LabelVector]]:
    """Read an RFC-4180-style CSV with a header row.

    label_columns become LabelVectors (shared class-id encoding); columns in
    `categorical` may hold arbitrary strings and are stored as level codes
    for later one-hot encoding; all remaining cells must parse as floats
    ('.' decimal point) or a ParseError names the offending cell.
    """
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise EmptyDataset(f"{path}: no header row") from None
        rows = [r for r in reader if r]

    for name in list(label_columns) + list(categorical):
        if name not in header:
            raise MissingColumn(name, str(path))
    if not rows:
        raise EmptyDataset(f"{path}: no data rows")

    label_set = set(label_columns)
    feat_names = [c for c in header if c not in label_set]
    if not feat_names:
        raise EmptyDataset(f"{path}: no feature columns outside {label_columns}")
    cat_set = set(categorical) - label_set
    col_of = {c: i for i, c in enumerate(header)}

    n = len(rows)
    for rix, row in enumerate(rows):
        if len(row) != len(header):
            raise ParseError(rix, "<row>", f"{len(row)} cells, expected {len(header)}")

    values = np.empty((n, len(feat_names)), dtype=np.float64)
    levels: dict[str, tuple[str, ...]] = {}
    for j, name in enumerate(feat_names):
        src = col_of[name]
        if name in cat_set:
            seen: dict[str, int] = {}
            for i, row in enumerate(rows):
                cell = row[src]
                code = seen.setdefault(cell, len(seen))
                values[i, j] = float(code)
            levels[name] = tuple(sorted(seen, key=seen.get))
        else:
            for i, row in enumerate(rows):
                cell = row[src]
                try:
                    v = float(cell)
                except ValueError:
                    raise ParseError(i, name, cell) from None
                if not np.isfinite(v):
                    raise ParseError(i, name, cell)
                values[i, j] = v

    raw_labels = [[row[col_of[c]] for row in rows] for c in label_columns]
    labels = labels_from_strings(raw_labels) if label_columns else []
    return Dataset(tuple(feat_names), values, levels), labels


def _format_level(value: float) -> str:
    if value == int(value):
        return str(int(value))
    return repr(value)


def encode_one_hot(ds: Dataset, categorical: Sequence[str]) -> Dataset:
    """Replace each categorical column in place by one 0/1 indicator column
    per distinct value, named "col=value" (value order: first occurrence for
    string columns, ascending numeric order otherwise)."""
    for name in categorical:
        if name not in ds.columns:
            raise MissingColumn(name, "dataset")
    cat_set = set(categorical)
    new_cols: list[str] = []
    new_mats: list[np.ndarray] = []
    for j, name in enumerate(ds.columns):
        col = ds.values[:, j]
        if name not in cat_set:
            new_cols.append(name)
            new_mats.append(col[:, None])
            continue
        if name in ds.categorical_levels:
            level_names = ds.categorical_levels[name]
            codes = list(range(len(level_names)))
        else:
            codes = sorted(set(col.tolist()))
            level_names = [_format_level(v) for v in codes]
        for code, lname in zip(codes, level_names):
            new_cols.append(f"{name}={lname}")
            new_mats.append((col == code).astype(np.float64)[:, None])
    remaining = {
        k: v for k, v in ds.categorical_levels.items() if k not in cat_set
    }
    return Dataset(tuple(new_cols), np.hstack(new_mats), remaining)


def dedup_indices(values: np.ndarray) -> np.ndarray:
    """Indices of first occurrences of each distinct row (bitwise identity),
    in original order."""
    seen: set[bytes] = set()
    keep = []
    for i in range(values.shape[0]):
        key = values[i].tobytes()
        if key not in seen:
            seen.add(key)
            keep.append(i)
    return np.asarray(keep, dtype=np.int64)


def preprocess(ds: Dataset, categorical: Sequence[str] = ()) -> Dataset:
    """One-hot encode the declared categorical columns, then drop duplicate
    feature rows (first occurrence kept)."""
    encoded = encode_one_hot(ds, categorical)
    keep = dedup_indices(encoded.values)
    return encoded.take_rows(keep)


def preprocess_labeled(
    ds: Dataset,
    labels: Sequence[LabelVector],
    categorical: Sequence[str] = (),
) -> tuple[Dataset, list[LabelVector]]:
    """preprocess() that keeps label vectors row-aligned through the dedup.

    Dedup compares feature rows only; the rows it drops are removed from
    every label vector as well.
    """
    for lv in labels:
        if len(lv) != ds.n:
            raise LengthMismatch(f"label length {len(lv)} != {ds.n} rows")
    encoded = encode_one_hot(ds, categorical)
    keep = dedup_indices(encoded.values)
    return encoded.take_rows(keep), [lv.take(keep) for lv in labels]


def split(
    ds: Dataset,
    labels: Sequence[LabelVector],
    spec: SplitSpec,
) -> tuple[tuple[Dataset, list[LabelVector]], tuple[Dataset, list[LabelVector]]]:
    """Seeded train/test split.

    Procedure (pinned for reproducibility): draw a permutation of [0, n)
    from numpy's PCG64 generator seeded with spec.seed (Fisher-Yates, via
    numpy.random.Generator.permutation), take the first round(fraction * n)
    positions as the train set, and sort each side ascending.
    """
    for lv in labels:
        if len(lv) != ds.n:
            raise LengthMismatch(f"label length {len(lv)} != {ds.n} rows")
    n = ds.n
    n_train = int(round(spec.train_fraction * n))
    if n_train <= 0 or n_train >= n:
        raise DegenerateSplit(
            f"fraction {spec.train_fraction} of {n} rows leaves an empty side"
        )
    perm = np.random.default_rng(spec.seed).permutation(n)
    tr = np.sort(perm[:n_train])
    te = np.sort(perm[n_train:])
    train = (ds.take_rows(tr), [lv.take(tr) for lv in labels])
    test = (ds.take_rows(te), [lv.take(te) for lv in labels])
    return train, test
