"""Reading labelled CSV data, seeded stratified splitting and
standardization.
"""
import dataclasses
import math
import os
import typing as t
import warnings

import numpy as np
import pandas as pd
from sklearn.preprocessing import StandardScaler

from . import sgsvp_matrix
from .sgsvp_errors import ArtifactError, InputError, SplitError
from .sgsvp_matrix import DenseMatrix

PARTITIONS = ("train", "validation", "test")
SPLIT_MANIFEST = "split.csv"
SPLIT_SUMMARY = "split_summary.txt"

# Guards floor() against products like 0.7 * 30 landing just below an integer.
FLOOR_GUARD = 1e-9


@dataclasses.dataclass
class LabeledDataset:
    X: DenseMatrix
    y: np.ndarray
    feature_names: t.Tuple[str, ...]
    # row numbers in the original file (0-based, header excluded)
    indices: np.ndarray = None
    # original label values of class 0 and class 1
    class_names: t.Tuple[str, str] = ("0", "1")

    def __post_init__(self):
        self.y = np.asarray(self.y, dtype=np.int64)
        if self.indices is None:
            self.indices = np.arange(self.X.shape[0])
        if self.y.shape != (self.X.shape[0],):
            raise InputError(
                f"{self.y.shape[0]} labels for {self.X.shape[0]} samples"
            )
        if len(self.feature_names) != self.X.shape[1]:
            raise InputError(
                f"{len(self.feature_names)} feature names for "
                f"{self.X.shape[1]} features"
            )
        if not np.isin(self.y, (0, 1)).all():
            raise InputError("labels must be 0 or 1")
        for label in (0, 1):
            if not (self.y == label).any():
                raise InputError(f"dataset has no samples of class {label}")

    def subset(self, rows: np.ndarray) -> "LabeledDataset":
        return LabeledDataset(
            X=sgsvp_matrix.as_matrix(self.X[rows]),
            y=self.y[rows],
            feature_names=self.feature_names,
            indices=self.indices[rows],
            class_names=self.class_names,
        )

    def class_blocks(self) -> t.Tuple[DenseMatrix, DenseMatrix]:
        """(Class 0 rows, Class 1 rows)."""
        return self.X[self.y == 0], self.X[self.y == 1]

    def select_columns(self, columns: t.Sequence[int]) -> "LabeledDataset":
        columns = list(columns)
        return LabeledDataset(
            X=sgsvp_matrix.as_matrix(self.X[:, columns]),
            y=self.y,
            feature_names=tuple(self.feature_names[c] for c in columns),
            indices=self.indices,
            class_names=self.class_names,
        )


@dataclasses.dataclass(frozen=True)
class SplitSpec:
    """Keyword args:
    train_fraction: fraction of each class used for training.
    holdout_val_fraction: fraction of the remaining samples of each class
        that goes to validation; the rest is the test set.
    seed: seed of the Philox generator that shuffles each class.
    stratified: must be True (splits are always per class).
    """

    train_fraction: float = 0.70
    holdout_val_fraction: float = 0.60
    seed: int = 42
    stratified: bool = True

    def __post_init__(self):
        for name in ("train_fraction", "holdout_val_fraction"):
            if not 0 < getattr(self, name) < 1:
                raise InputError(f"{name} must lie in (0, 1)")
        if not self.stratified:
            raise InputError("only stratified splits are supported")

    def counts(self, n: int) -> t.Tuple[int, int, int]:
        """(train, validation, test) sizes for a class of n samples."""
        n_train = math.floor(self.train_fraction * n + FLOOR_GUARD)
        rem = n - n_train
        n_val = math.floor(self.holdout_val_fraction * rem + FLOOR_GUARD)
        return n_train, n_val, rem - n_val


@dataclasses.dataclass
class DatasetSplit:
    train: LabeledDataset
    validation: LabeledDataset
    test: LabeledDataset

    def partitions(self) -> t.Dict[str, LabeledDataset]:
        return {name: getattr(self, name) for name in PARTITIONS}


@dataclasses.dataclass
class Standardization:
    mean: np.ndarray
    scale: np.ndarray


def load_csv(
    path,
    label_column: str,
    positive_label,
    drop_columns: t.Sequence[str] = (),
) -> LabeledDataset:
    """Reads a CSV with a header row (comma or semicolon delimited).

    Every column except `label_column` and `drop_columns` is a feature;
    columns that are entirely empty are dropped. Rows labelled
    `positive_label` become class 1, the other label class 0.

    Raises:
        InputError for a missing file, a missing label column, a label
        column without exactly two distinct values, or a non-numeric
        feature cell (the message names the row and column).
    """
    path = os.path.abspath(os.path.expandvars(os.path.expanduser(str(path))))
    if not os.path.exists(path):
        raise InputError(f"dataset file {path} does not exist")
    try:
        frame = pd.read_csv(
            path,
            sep=None,
            engine="python",
            dtype=str,
            keep_default_na=False,
            encoding="utf-8",
        )
    except (pd.errors.ParserError, UnicodeDecodeError) as exc:
        raise InputError(f"could not parse {path}: {exc}") from exc
    frame.columns = [str(col).strip() for col in frame.columns]
    frame = frame.apply(lambda col: col.str.strip())
    if label_column not in frame.columns:
        raise InputError(f"{path}: no label column {label_column!r}")
    for col in drop_columns:
        if col not in frame.columns:
            warnings.warn(f"{path}: column {col!r} to drop is not present")
    empty = [
        col for col in frame.columns if col != label_column and (frame[col] == "").all()
    ]
    features = frame.drop(
        columns=[label_column]
        + [col for col in drop_columns if col in frame.columns]
        + empty
    )
    features = features.loc[:, [col for col in features.columns if col != label_column]]

    labels = frame[label_column]
    distinct = sorted(labels.unique())
    if len(distinct) < 2:
        raise InputError(f"{path}: label column {label_column!r} is constant")
    if len(distinct) > 2:
        raise InputError(
            f"{path}: label column {label_column!r} has {len(distinct)} "
            f"distinct values {distinct[:5]}; expected 2"
        )
    positive = str(positive_label)
    if positive not in distinct:
        raise InputError(
            f"{path}: positive label {positive!r} not among {distinct}"
        )
    negative = distinct[0] if distinct[1] == positive else distinct[1]

    values = features.apply(pd.to_numeric, errors="coerce").to_numpy(dtype=np.float64)
    bad = np.argwhere(~np.isfinite(values))
    if bad.size:
        row, col = bad[0]
        raise InputError(
            f"{path}: data row {row + 1} (line {row + 2}), column "
            f"{features.columns[col]!r}: non-numeric value "
            f"{features.iat[row, col]!r}"
        )
    return LabeledDataset(
        X=sgsvp_matrix.as_matrix(values, "features"),
        y=(labels == positive).to_numpy().astype(np.int64),
        feature_names=tuple(features.columns),
        class_names=(negative, positive),
    )


def stratified_split(ds: LabeledDataset, spec: SplitSpec) -> DatasetSplit:
    """Shuffles each class with a Philox generator seeded by spec.seed and
    cuts it into train/validation/test by SplitSpec.counts().

    Raises:
        SplitError if some partition would get no sample of some class.
    """
    rng = np.random.Generator(np.random.Philox(spec.seed))
    parts = {name: [] for name in PARTITIONS}
    for label in (0, 1):
        shuffled = rng.permutation(np.flatnonzero(ds.y == label))
        sizes = spec.counts(len(shuffled))
        start = 0
        for name, size in zip(PARTITIONS, sizes):
            if size < 1:
                raise SplitError(
                    f"class {label} ({len(shuffled)} samples) leaves the "
                    f"{name} partition empty"
                )
            parts[name].append(shuffled[start : start + size])
            start += size
    return DatasetSplit(
        **{name: ds.subset(np.sort(np.concatenate(rows))) for name, rows in parts.items()}
    )


def standardize(
    train: LabeledDataset, others: t.Sequence[LabeledDataset] = ()
) -> t.Tuple[LabeledDataset, t.Tuple[LabeledDataset, ...], Standardization]:
    """Centres and scales every dataset with the training statistics.
    Constant training columns are centred and keep scale 1."""
    scaler = StandardScaler().fit(train.X)

    def _apply(ds):
        return dataclasses.replace(
            ds, X=sgsvp_matrix.as_matrix(scaler.transform(ds.X))
        )

    return (
        _apply(train),
        tuple(_apply(ds) for ds in others),
        Standardization(mean=scaler.mean_.copy(), scale=scaler.scale_.copy()),
    )


def write_standardization(path, stats: Standardization, feature_names):
    pd.DataFrame(
        {"feature": feature_names, "mean": stats.mean, "scale": stats.scale}
    ).to_csv(path, index=False, lineterminator="\n", encoding="utf-8")


def split_counts(split: DatasetSplit) -> t.Dict[str, t.Tuple[int, int]]:
    """partition -> (class 0 count, class 1 count)"""
    return {
        name: (int((ds.y == 0).sum()), int((ds.y == 1).sum()))
        for name, ds in split.partitions().items()
    }


def format_split_summary(split: DatasetSplit) -> str:
    counts = split_counts(split)
    rows = [("Class", "Training", "Validation", "Test")]
    for label, class_name in enumerate(split.train.class_names):
        rows.append(
            (f"{class_name} ({label})",)
            + tuple(str(counts[name][label]) for name in PARTITIONS)
        )
    widths = [max(len(row[i]) for row in rows) for i in range(4)]
    return "\n".join(
        "  ".join(cell.rjust(width) for cell, width in zip(row, widths))
        for row in rows
    )


def write_split_manifest(out_dir, split: DatasetSplit):
    """Writes split.csv (index,partition,label) and split_summary.txt."""
    os.makedirs(out_dir, exist_ok=True)
    rows = [
        (int(index), name, int(label))
        for name, ds in split.partitions().items()
        for index, label in zip(ds.indices, ds.y)
    ]
    pd.DataFrame(rows, columns=("index", "partition", "label")).to_csv(
        os.path.join(out_dir, SPLIT_MANIFEST),
        index=False,
        lineterminator="\n",
        encoding="utf-8",
    )
    with open(
        os.path.join(out_dir, SPLIT_SUMMARY), "w", encoding="utf-8", newline="\n"
    ) as outf:
        outf.write(format_split_summary(split) + "\n")


def read_split_manifest(out_dir, ds: LabeledDataset) -> DatasetSplit:
    """Rebuilds a split of `ds` from out_dir/split.csv.

    Raises:
        ArtifactError if the manifest is missing or does not fit `ds`.
    """
    path = os.path.join(out_dir, SPLIT_MANIFEST)
    if not os.path.exists(path):
        raise ArtifactError(f"split manifest {path} does not exist")
    try:
        frame = pd.read_csv(path, encoding="utf-8")
        parts = {
            name: frame.loc[frame["partition"] == name, "index"].to_numpy(dtype=np.intp)
            for name in PARTITIONS
        }
        labels = frame["label"].to_numpy()
        indices = frame["index"].to_numpy()
    except (KeyError, ValueError, pd.errors.ParserError) as exc:
        raise ArtifactError(f"corrupt split manifest {path}: {exc}") from exc
    n = ds.X.shape[0]
    # every sample in exactly one partition
    if (
        len(indices) != n
        or not frame["partition"].isin(PARTITIONS).all()
        or indices.min(initial=0) < 0
        or indices.max(initial=0) >= n
        or len(np.unique(indices)) != len(indices)
        or not np.array_equal(ds.y[indices], labels)
    ):
        raise ArtifactError(
            f"split manifest {path} does not match the dataset "
            f"({n} samples); delete it to re-split"
        )
    try:
        return DatasetSplit(**{name: ds.subset(rows) for name, rows in parts.items()})
    except InputError as exc:
        raise ArtifactError(f"split manifest {path}: {exc}") from exc
