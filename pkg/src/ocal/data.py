"""Dataset container, CSV ingestion, fold planning, and the 2-d demo generator."""

import csv
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import ConfigurationError, CsvFormatError
from .validation import check_matrix

__all__ = [
    "Dataset",
    "FoldPlan",
    "SplitView",
    "load_csv",
    "save_csv",
    "make_folds",
    "rotate_roles",
    "gen_two_cluster",
]

TARGET_LABEL = 0
OUTLIER_LABEL = 1

# demo generator layout: three target clusters, three outlier clusters,
# isotropic and visually separable in the plane
DEMO_TARGET_MEANS = ((0.0, 0.0), (4.0, 0.0), (2.0, 3.5))
DEMO_OUTLIER_MEANS = ((2.0, -3.0), (6.0, 2.0), (-2.0, 2.5))
DEMO_CLUSTER_STD = 0.6
DEMO_CLUSTER_SIZE = 20


@dataclass(frozen=True)
class Dataset:
    """Feature matrix with one binary mark per row: 0 = target, 1 = outlier."""

    name: str
    features: np.ndarray
    labels: np.ndarray

    def __post_init__(self):
        features = check_matrix(self.features, "features", min_rows=2).copy()
        labels = np.asarray(self.labels)
        if labels.shape != (features.shape[0],):
            raise ValueError("labels must align one-to-one with feature rows")
        if not np.isin(labels, (TARGET_LABEL, OUTLIER_LABEL)).all():
            raise ValueError("labels must be 0 (target) or 1 (outlier)")
        labels = labels.astype(np.int64)
        if not (labels == TARGET_LABEL).any():
            raise ValueError("dataset needs at least one target sample")
        features.setflags(write=False)
        labels.setflags(write=False)
        object.__setattr__(self, "features", features)
        object.__setattr__(self, "labels", labels)

    @property
    def n(self):
        return self.features.shape[0]

    @property
    def d(self):
        return self.features.shape[1]

    @property
    def target_ids(self):
        return np.flatnonzero(self.labels == TARGET_LABEL)

    @property
    def outlier_ids(self):
        return np.flatnonzero(self.labels == OUTLIER_LABEL)


@dataclass(frozen=True)
class FoldPlan:
    """Per-sample fold assignment in 1..k, stratified by label."""

    fold_of: np.ndarray
    k: int
    seed: int


@dataclass(frozen=True)
class SplitView:
    """Role assignment of one rotation: initial targets, unlabeled pool, test set."""

    rotation: int
    init_ids: np.ndarray
    pool_ids: np.ndarray
    test_ids: np.ndarray
    dropped_ids: np.ndarray


def load_csv(path):
    """Read a dataset from CSV: header ``f0,...,f{d-1},label``, labels in {0, 1}."""
    path = Path(path)
    with path.open(newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None:
            raise CsvFormatError(f"{path}: file is empty")
        if len(header) < 2 or header[-1].strip() != "label":
            raise CsvFormatError(
                f"{path}: header must name feature columns plus a final 'label' column"
            )
        d = len(header) - 1
        features = []
        labels = []
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != d + 1:
                raise CsvFormatError(
                    f"{path}: row {lineno}: expected {d + 1} fields, got {len(row)}"
                )
            try:
                features.append([float(v) for v in row[:d]])
            except ValueError:
                raise CsvFormatError(
                    f"{path}: row {lineno}: feature fields must be decimal floats"
                ) from None
            mark = row[d].strip()
            if mark not in ("0", "1"):
                raise CsvFormatError(
                    f"{path}: row {lineno}: label must be 0 or 1, got {mark!r}"
                )
            labels.append(int(mark))
    if not features:
        raise CsvFormatError(f"{path}: no data rows")
    return Dataset(path.stem, np.asarray(features, dtype=np.float64), np.asarray(labels))


def save_csv(dataset, path):
    """Write a dataset in the canonical CSV layout; floats round-trip exactly."""
    path = Path(path)
    with path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow([f"f{j}" for j in range(dataset.d)] + ["label"])
        for row, mark in zip(dataset.features, dataset.labels):
            writer.writerow([repr(float(v)) for v in row] + [int(mark)])


def make_folds(dataset, k=10, seed=0):
    """Stratified fold assignment: per-label round-robin after a seeded shuffle."""
    if k < 3:
        raise ConfigurationError(f"k must be at least 3, got {k}")
    if k > dataset.n:
        raise ConfigurationError(f"k={k} exceeds the dataset size {dataset.n}")
    rng = np.random.default_rng(seed)
    fold_of = np.zeros(dataset.n, dtype=np.int64)
    for label in (TARGET_LABEL, OUTLIER_LABEL):
        ids = np.flatnonzero(dataset.labels == label)
        if ids.size == 0:
            raise ConfigurationError(f"label stratum {label} is empty")
        order = rng.permutation(ids)
        fold_of[order] = np.arange(order.size) % k + 1
    fold_of.setflags(write=False)
    return FoldPlan(fold_of=fold_of, k=k, seed=seed)


def rotate_roles(plan, dataset, r):
    """Assign fold roles for rotation r.

    With sigma(j) = ((j - 1 + r) mod 10) + 1: the initial training set is
    fold sigma(1) restricted to targets (its outliers are dropped), the
    unlabeled pool is folds sigma(2)..sigma(6), the test set is folds
    sigma(7)..sigma(10).
    """
    if plan.k != 10:
        raise ConfigurationError(f"role rotation requires 10 folds, plan has {plan.k}")
    if not 0 <= r <= 9:
        raise ConfigurationError(f"rotation must lie in 0..9, got {r}")

    def sigma(j):
        return (j - 1 + r) % 10 + 1

    init_fold = sigma(1)
    pool_folds = {sigma(j) for j in range(2, 7)}
    test_folds = {sigma(j) for j in range(7, 11)}

    in_init = plan.fold_of == init_fold
    init_ids = np.flatnonzero(in_init & (dataset.labels == TARGET_LABEL))
    dropped_ids = np.flatnonzero(in_init & (dataset.labels == OUTLIER_LABEL))
    pool_ids = np.flatnonzero(np.isin(plan.fold_of, sorted(pool_folds)))
    test_ids = np.flatnonzero(np.isin(plan.fold_of, sorted(test_folds)))
    return SplitView(
        rotation=r,
        init_ids=init_ids,
        pool_ids=pool_ids,
        test_ids=test_ids,
        dropped_ids=dropped_ids,
    )


def gen_two_cluster(seed):
    """Two-dimensional demo data: 60 targets and 60 outliers in three clusters each.

    Returns ``(dataset, init_ids)`` where ``init_ids`` designates one
    initial training target per target cluster (the sample nearest its
    cluster mean).
    """
    rng = np.random.default_rng(seed)
    blocks = []
    labels = []
    for mean in DEMO_TARGET_MEANS:
        blocks.append(rng.normal(mean, DEMO_CLUSTER_STD, size=(DEMO_CLUSTER_SIZE, 2)))
        labels.extend([TARGET_LABEL] * DEMO_CLUSTER_SIZE)
    for mean in DEMO_OUTLIER_MEANS:
        blocks.append(rng.normal(mean, DEMO_CLUSTER_STD, size=(DEMO_CLUSTER_SIZE, 2)))
        labels.extend([OUTLIER_LABEL] * DEMO_CLUSTER_SIZE)
    features = np.vstack(blocks)
    dataset = Dataset("artificial", features, np.asarray(labels))

    init_ids = []
    for c, mean in enumerate(DEMO_TARGET_MEANS):
        start = c * DEMO_CLUSTER_SIZE
        cluster = features[start : start + DEMO_CLUSTER_SIZE]
        offsets = ((cluster - np.asarray(mean)) ** 2).sum(axis=1)
        init_ids.append(start + int(np.argmin(offsets)))
    return dataset, np.asarray(init_ids, dtype=np.int64)
