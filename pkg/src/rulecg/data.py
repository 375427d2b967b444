"""Dataset ingestion, synthetic generators, fold splitting, binarization."""
from __future__ import annotations

import csv
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from .errors import (
    IngestionError,
    ParameterError,
    SchemaError,
    UnsupportedTaskError,
)
from .ruleset import Literal

CONTINUOUS = "continuous"
CATEGORICAL = "categorical"


@dataclass(frozen=True)
class Dataset:
    """Binary-classification dataset with per-feature kind tags."""

    features: np.ndarray  # (n_samples, n_features) float64
    labels: np.ndarray  # (n_samples,) int64 in {0, 1}
    feature_names: tuple[str, ...]
    feature_kinds: tuple[str, ...]

    def __post_init__(self):
        features = np.asarray(self.features, dtype=np.float64)
        labels = np.asarray(self.labels, dtype=np.int64)
        if features.ndim != 2:
            raise IngestionError("features must be a 2-D matrix")
        if labels.shape != (features.shape[0],):
            raise IngestionError("labels length must equal the number of samples")
        if not np.isin(labels, (0, 1)).all():
            raise IngestionError("labels must be 0 or 1")
        if not np.isfinite(features).all():
            bad = np.argwhere(~np.isfinite(features))[0]
            raise IngestionError(
                f"non-finite feature value at row {bad[0]}, column {bad[1]}"
            )
        if len(self.feature_names) != features.shape[1]:
            raise IngestionError("feature_names length mismatch")
        if len(self.feature_kinds) != features.shape[1]:
            raise IngestionError("feature_kinds length mismatch")
        for kind in self.feature_kinds:
            if kind not in (CONTINUOUS, CATEGORICAL):
                raise IngestionError(f"unknown feature kind {kind!r}")
        object.__setattr__(self, "features", features)
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "feature_names", tuple(self.feature_names))
        object.__setattr__(self, "feature_kinds", tuple(self.feature_kinds))

    @property
    def n_samples(self) -> int:
        return self.features.shape[0]

    @property
    def n_features(self) -> int:
        return self.features.shape[1]

    def subset(self, indices: np.ndarray) -> "Dataset":
        return Dataset(
            features=self.features[indices],
            labels=self.labels[indices],
            feature_names=self.feature_names,
            feature_kinds=self.feature_kinds,
        )


@dataclass(frozen=True)
class FoldSplit:
    """One train/test partition of the sample indices."""

    train_indices: np.ndarray
    test_indices: np.ndarray
    seed: int

    def __post_init__(self):
        object.__setattr__(
            self, "train_indices", np.asarray(self.train_indices, dtype=np.int64)
        )
        object.__setattr__(
            self, "test_indices", np.asarray(self.test_indices, dtype=np.int64)
        )


@dataclass(frozen=True)
class LiteralCatalog:
    """Ordered threshold literals over input features.

    ``constant_features`` records features that produced no literals
    (constant continuous columns).
    """

    literals: tuple[Literal, ...]
    constant_features: tuple[int, ...] = ()

    def __len__(self) -> int:
        return len(self.literals)


@dataclass(frozen=True)
class BinarizedDataset:
    """Literal catalog plus the sample x literal satisfaction bit matrix."""

    catalog: LiteralCatalog
    bits: np.ndarray  # (n_samples, n_literals) bool

    def __post_init__(self):
        bits = np.asarray(self.bits, dtype=bool)
        if bits.ndim != 2 or bits.shape[1] != len(self.catalog):
            raise ParameterError("bit matrix shape must be (n_samples, n_literals)")
        object.__setattr__(self, "bits", bits)

    @property
    def n_samples(self) -> int:
        return self.bits.shape[0]

    @property
    def n_literals(self) -> int:
        return self.bits.shape[1]


# ---------------------------------------------------------------------------
# ingestion
# ---------------------------------------------------------------------------

def load_csv(
    path: str | Path,
    label_column: str,
    feature_kinds: dict[str, str] | None = None,
    delimiter: str = ",",
) -> Dataset:
    """Load a headered CSV into a binary-classification Dataset.

    Labels are remapped to {0, 1} with the lexicographically smaller
    original label becoming 0. Feature kinds are taken from
    ``feature_kinds`` when given, else inferred: a column where every cell
    parses as a float is continuous, anything else categorical.
    Categorical values are encoded as sorted-unique category codes.
    """
    path = Path(path)
    if not path.exists():
        raise SchemaError(f"no such file: {path}")
    with open(path, newline="") as fh:
        reader = csv.reader(fh, delimiter=delimiter)
        try:
            header = next(reader)
        except StopIteration:
            raise SchemaError(f"{path}: empty file") from None
        rows = [row for row in reader if row]
    header = [h.strip() for h in header]
    if label_column not in header:
        raise SchemaError(f"{path}: label column {label_column!r} not in header")
    label_idx = header.index(label_column)
    feature_names = [h for i, h in enumerate(header) if i != label_idx]
    feature_cols = [i for i in range(len(header)) if i != label_idx]

    for r, row in enumerate(rows):
        if len(row) != len(header):
            raise IngestionError(
                f"{path}: row {r + 2} has {len(row)} cells, expected {len(header)}"
            )

    raw_labels = [row[label_idx].strip() for row in rows]
    classes = sorted(set(raw_labels))
    if len(classes) > 2:
        raise UnsupportedTaskError(
            f"{path}: found {len(classes)} classes, only binary tasks are supported"
        )
    if len(classes) < 2:
        raise UnsupportedTaskError(f"{path}: label column has a single class")
    label_map = {classes[0]: 0, classes[1]: 1}
    labels = np.array([label_map[v] for v in raw_labels], dtype=np.int64)

    kinds: list[str] = []
    columns: list[np.ndarray] = []
    for name, ci in zip(feature_names, feature_cols):
        cells = [row[ci].strip() for row in rows]
        declared = None if feature_kinds is None else feature_kinds.get(name)
        if declared is not None and declared not in (CONTINUOUS, CATEGORICAL):
            raise SchemaError(f"unknown feature kind {declared!r} for {name!r}")
        parsed = _parse_column(cells, name, declared)
        kind, values = parsed
        kinds.append(kind)
        columns.append(values)

    features = np.column_stack(columns) if columns else np.empty((len(rows), 0))
    return Dataset(
        features=features,
        labels=labels,
        feature_names=tuple(feature_names),
        feature_kinds=tuple(kinds),
    )


def _parse_column(cells, name, declared):
    """Parse one CSV column as continuous or categorical values."""
    numeric = np.empty(len(cells), dtype=np.float64)
    all_numeric = True
    for r, cell in enumerate(cells):
        try:
            numeric[r] = float(cell)
        except ValueError:
            all_numeric = False
            if declared == CONTINUOUS:
                raise IngestionError(
                    f"row {r + 2}, column {name!r}: cannot parse {cell!r} as a number"
                ) from None
            break
        if not np.isfinite(numeric[r]):
            raise IngestionError(
                f"row {r + 2}, column {name!r}: non-finite value {cell!r}"
            )
    if declared == CATEGORICAL or (declared is None and not all_numeric):
        categories = sorted(set(cells))
        code = {c: float(i) for i, c in enumerate(categories)}
        return CATEGORICAL, np.array([code[c] for c in cells], dtype=np.float64)
    return CONTINUOUS, numeric


# ---------------------------------------------------------------------------
# synthetic generators
# ---------------------------------------------------------------------------

def generate_xor(n_samples: int, dims: int, seed: int) -> Dataset:
    """Uniform features on [0,1]; label = round(x1) XOR round(x2)."""
    if dims < 2:
        raise ParameterError("generate_xor requires dims >= 2")
    if n_samples < 1:
        raise ParameterError("generate_xor requires n_samples >= 1")
    rng = np.random.default_rng(seed)
    X = rng.random((n_samples, dims))
    y = (np.round(X[:, 0]).astype(np.int64) ^ np.round(X[:, 1]).astype(np.int64))
    return Dataset(
        features=X,
        labels=y,
        feature_names=tuple(f"x{i + 1}" for i in range(dims)),
        feature_kinds=(CONTINUOUS,) * dims,
    )


def generate_hard_xor(
    n_samples: int, dims: int, noise_rate: float, seed: int
) -> Dataset:
    """Three-way parity of the rounded first three dimensions plus label noise.

    A deliberately harder target than :func:`generate_xor`: the clean label
    is round(x1) XOR round(x2) XOR round(x3) and each label is flipped
    independently with probability ``noise_rate``.
    """
    if dims < 3:
        raise ParameterError("generate_hard_xor requires dims >= 3")
    if n_samples < 1:
        raise ParameterError("generate_hard_xor requires n_samples >= 1")
    if not 0.0 <= noise_rate < 1.0:
        raise ParameterError("noise_rate must lie in [0, 1)")
    rng = np.random.default_rng(seed)
    X = rng.random((n_samples, dims))
    y = (
        np.round(X[:, 0]).astype(np.int64)
        ^ np.round(X[:, 1]).astype(np.int64)
        ^ np.round(X[:, 2]).astype(np.int64)
    )
    flips = rng.random(n_samples) < noise_rate
    y = y ^ flips.astype(np.int64)
    return Dataset(
        features=X,
        labels=y,
        feature_names=tuple(f"x{i + 1}" for i in range(dims)),
        feature_kinds=(CONTINUOUS,) * dims,
    )


# ---------------------------------------------------------------------------
# fold splitting
# ---------------------------------------------------------------------------

def split_folds(ds: Dataset, k: int, seed: int) -> list[FoldSplit]:
    """Deterministic class-stratified k-fold splits.

    Within each class the (seeded) shuffled indices are dealt round-robin
    into k test buckets, so per-fold class balance is preserved to within
    one sample.
    """
    if k < 2:
        raise ParameterError("split_folds requires k >= 2")
    if k > ds.n_samples:
        raise ParameterError("k must not exceed the number of samples")
    rng = np.random.default_rng(seed)
    buckets: list[list[int]] = [[] for _ in range(k)]
    for cls in (0, 1):
        cls_idx = np.flatnonzero(ds.labels == cls)
        cls_idx = cls_idx[rng.permutation(len(cls_idx))]
        for j, idx in enumerate(cls_idx):
            buckets[j % k].append(int(idx))
    all_idx = np.arange(ds.n_samples)
    folds = []
    for b in buckets:
        test = np.array(sorted(b), dtype=np.int64)
        train = np.setdiff1d(all_idx, test)
        folds.append(FoldSplit(train_indices=train, test_indices=test, seed=seed))
    return folds


# ---------------------------------------------------------------------------
# binarization
# ---------------------------------------------------------------------------

def _quantile_thresholds(values: np.ndarray, bins: int) -> list[float]:
    """Midpoint thresholds at the 1/(bins+1) .. bins/(bins+1) quantiles.

    Each threshold is the midpoint of the two order statistics straddling
    the quantile position, so thresholds avoid sitting exactly on data
    values whenever those statistics differ. Duplicates and thresholds
    that would make a literal constant over the data are dropped.
    """
    v = np.sort(values)
    n = len(v)
    if n < 2 or v[0] == v[-1]:
        return []
    out: list[float] = []
    for j in range(1, bins + 1):
        q = j / (bins + 1)
        pos = q * (n - 1)
        lo = int(np.floor(pos))
        hi = min(lo + 1, n - 1)
        t = (v[lo] + v[hi]) / 2.0
        if t < v[0] or t >= v[-1]:
            continue
        if not out or t != out[-1]:
            out.append(float(t))
    return sorted(set(out))


def binarize_matrix(
    X: np.ndarray, kinds: Sequence[str], bins: int
) -> BinarizedDataset:
    """Binarize a raw feature matrix given per-column kind tags."""
    if bins < 1:
        raise ParameterError("bins must be >= 1")
    X = np.asarray(X, dtype=np.float64)
    literals: list[Literal] = []
    constant: list[int] = []
    for f in range(X.shape[1]):
        col = X[:, f]
        if kinds[f] == CONTINUOUS:
            thresholds = _quantile_thresholds(col, bins)
            if not thresholds:
                constant.append(f)
                continue
            for t in thresholds:
                literals.append(Literal(feature=f, op="<=", threshold=t))
            for t in thresholds:
                literals.append(Literal(feature=f, op=">", threshold=t))
        else:
            for code in sorted(set(col.tolist())):
                literals.append(Literal(feature=f, op="==", threshold=float(code)))
    literals.sort(key=lambda l: l.sort_key)
    catalog = LiteralCatalog(
        literals=tuple(literals), constant_features=tuple(constant)
    )
    bits = np.empty((X.shape[0], len(literals)), dtype=bool)
    for j, lit in enumerate(literals):
        bits[:, j] = lit.column(X)
    return BinarizedDataset(catalog=catalog, bits=bits)


def binarize(ds: Dataset, bins: int) -> BinarizedDataset:
    """Binarize a Dataset's features; see :func:`binarize_matrix`."""
    return binarize_matrix(ds.features, ds.feature_kinds, bins)
