"""Balanced accuracy, hyperparameter grid search, and the 10-rotation benchmark."""

import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import engine
from .data import OUTLIER_LABEL, TARGET_LABEL, rotate_roles
from .errors import ConfigurationError, UndefinedMetricError
from .ocsvm import OneClassSVM
from .strategy import STRATEGY_KINDS, StrategyConfig

__all__ = [
    "DEFAULT_NU_GRID",
    "DEFAULT_GAMMA_LADDER",
    "default_gamma_grid",
    "gamma_scale",
    "ConfusionCounts",
    "GridSearchResult",
    "RotationCurve",
    "StrategyReport",
    "BenchReport",
    "bacc",
    "evaluate",
    "grid_search",
    "run_benchmark",
]

DEFAULT_NU_GRID = (0.01, 0.05, 0.1, 0.2)

# relative gamma ladder, anchored per dataset at 1 / (d * mean feature
# variance) so the search covers the same kernel-width range whatever the
# raw feature scale is
DEFAULT_GAMMA_LADDER = (
    2.0**-12,
    2.0**-10,
    2.0**-8,
    2.0**-6,
    2.0**-4,
    2.0**-2,
    1.0,
    4.0,
)


def gamma_scale(dataset):
    """Characteristic inverse squared length-scale of a dataset."""
    variance = float(dataset.features.var(axis=0).mean())
    return 1.0 / (dataset.d * max(variance, 1e-12))


def default_gamma_grid(dataset):
    scale = gamma_scale(dataset)
    return tuple(step * scale for step in DEFAULT_GAMMA_LADDER)

# strategy roster of a full benchmark: the seven query strategies plus the
# zero-query baseline
ALL_STRATEGIES = ("initial",) + STRATEGY_KINDS


@dataclass(frozen=True)
class ConfusionCounts:
    """Outliers are the positive class: tn counts correctly kept targets,
    tp counts correctly flagged outliers, out of n targets and p outliers."""

    tn: int
    tp: int
    n: int
    p: int

    def __post_init__(self):
        if not (0 <= self.tn <= self.n and 0 <= self.tp <= self.p):
            raise ValueError("confusion counts out of range")


def bacc(counts):
    """Balanced accuracy 0.5 * (tn/n + tp/p)."""
    if counts.n < 1 or counts.p < 1:
        raise UndefinedMetricError(
            f"balanced accuracy undefined for n={counts.n}, p={counts.p}"
        )
    return 0.5 * (counts.tn / counts.n + counts.tp / counts.p)


BOUNDARY_TOL = 1e-6


def evaluate(model, X, y):
    """Count the confusion of a target model on a test slice.

    Boundary samples are classified as targets. The boundary is the band
    |DV| <= 1e-6: margin support vectors sit at DV = 0 only up to the
    solver's KKT tolerance, so a bit-exact zero test would flip them at
    random.
    """
    y = np.asarray(y)
    dv = model.decision_values(X)
    flagged = dv > BOUNDARY_TOL
    return ConfusionCounts(
        tn=int(((y == TARGET_LABEL) & ~flagged).sum()),
        tp=int(((y == OUTLIER_LABEL) & flagged).sum()),
        n=int((y == TARGET_LABEL).sum()),
        p=int((y == OUTLIER_LABEL).sum()),
    )


@dataclass(frozen=True)
class GridSearchResult:
    nu: float
    gamma: float
    cells: tuple  # (nu, gamma, validation bacc) per grid cell


def _stratified_split(labels, train_fraction, seed):
    rng = np.random.default_rng(seed)
    train_ids = []
    val_ids = []
    for label in (TARGET_LABEL, OUTLIER_LABEL):
        ids = np.flatnonzero(labels == label)
        order = rng.permutation(ids)
        n_train = int(round(train_fraction * ids.size))
        if ids.size >= 2:
            n_train = min(max(n_train, 1), ids.size - 1)
        train_ids.extend(order[:n_train].tolist())
        val_ids.extend(order[n_train:].tolist())
    return sorted(train_ids), sorted(val_ids)


def grid_search(dataset, nu_grid=DEFAULT_NU_GRID, gamma_grid=None, seed=0):
    """Pick (nu, gamma) by validation balanced accuracy on a stratified 70/30 split.

    Models are trained on the training part's targets only. Ties resolve to
    the smaller gamma, then the smaller nu. When no gamma grid is given, the
    default ladder is anchored at the dataset's characteristic scale.
    """
    if gamma_grid is None:
        gamma_grid = default_gamma_grid(dataset)
    if not len(nu_grid) or not len(gamma_grid):
        raise ConfigurationError("hyperparameter grids must be non-empty")
    train_ids, val_ids = _stratified_split(dataset.labels, 0.7, seed)
    train_targets = [i for i in train_ids if dataset.labels[i] == TARGET_LABEL]
    val_labels = dataset.labels[val_ids]
    if not (val_labels == TARGET_LABEL).any() or not (val_labels == OUTLIER_LABEL).any():
        raise ConfigurationError("validation part is missing a class")
    if not train_targets:
        raise ConfigurationError("training part has no targets")

    train_X = dataset.features[train_targets]
    val_X = dataset.features[val_ids]
    cells = []
    best = None
    for gamma in sorted(float(g) for g in gamma_grid):
        for nu in sorted(float(v) for v in nu_grid):
            model = OneClassSVM(nu=nu, gamma=gamma).fit(train_X)
            score = bacc(evaluate(model, val_X, val_labels))
            cells.append((nu, gamma, score))
            if best is None or score > best[2]:
                best = (nu, gamma, score)
    return GridSearchResult(nu=best[0], gamma=best[1], cells=tuple(cells))


@dataclass(frozen=True)
class RotationCurve:
    r: int
    bacc_curve: tuple


@dataclass(frozen=True)
class StrategyReport:
    dataset: str
    strategy: str
    nu: float
    gamma: float
    batch: int
    iterations: int
    seed: int
    rotations: tuple
    mean_bacc: float
    std_bacc: float
    complete: bool
    errors: tuple

    def to_json_dict(self):
        doc = {
            "dataset": self.dataset,
            "strategy": self.strategy,
            "nu": self.nu,
            "gamma": self.gamma,
            "batch": self.batch,
            "iterations": self.iterations,
            "seed": self.seed,
            "rotations": [
                {"r": rc.r, "bacc_curve": list(rc.bacc_curve)} for rc in self.rotations
            ],
            "mean_bacc": self.mean_bacc,
            "std_bacc": self.std_bacc,
            "complete": self.complete,
        }
        if self.errors:
            doc["errors"] = list(self.errors)
        return doc


@dataclass(frozen=True)
class BenchReport:
    dataset: str
    entries: tuple

    def entry(self, strategy):
        for report in self.entries:
            if report.strategy == strategy:
                return report
        raise KeyError(strategy)


def mean_std(values):
    """Streaming (Welford) mean and sample standard deviation."""
    count = 0
    mean = 0.0
    m2 = 0.0
    for v in values:
        count += 1
        delta = v - mean
        mean += delta / count
        m2 += delta * (v - mean)
    if count == 0:
        return float("nan"), float("nan")
    std = (m2 / (count - 1)) ** 0.5 if count > 1 else 0.0
    return mean, std


def _run_seed(master_seed, strategy_index, rotation):
    return int(
        np.random.SeedSequence([int(master_seed), strategy_index, rotation]).generate_state(1)[0]
    )


def _run_rotation(dataset, plan, kind, r, hp, run_seed, iterations, batch, stop, lh_ensemble_size):
    split = rotate_roles(plan, dataset, r)
    if kind == "initial":
        _, _, models = engine.init_run(split, dataset, hp)
        counts = evaluate(
            models.target, dataset.features[split.test_ids], dataset.labels[split.test_ids]
        )
        return (bacc(counts),)
    cfg = StrategyConfig(kind=kind, seed=run_seed, lh_ensemble_size=lh_ensemble_size)
    result = engine.run(
        split,
        dataset,
        hp,
        cfg,
        iterations,
        batch,
        stop,
        engine.SimulatedOracle(dataset),
    )
    return tuple(result.bacc_per_iteration)


def run_benchmark(
    dataset,
    plan,
    strategies,
    iterations,
    batch,
    hp,
    seed=0,
    stop=None,
    lh_ensemble_size=10,
    n_workers=1,
):
    """Run every strategy over all 10 fold rotations with a simulated oracle.

    Failed rotations (e.g. a rotation whose test set has no outliers, leaving
    balanced accuracy undefined) are excluded with a warning and flagged in
    the report. Results are deterministic for a fixed master seed regardless
    of worker count.
    """
    strategies = list(strategies)
    if not strategies:
        raise ConfigurationError("at least one strategy is required")
    for kind in strategies:
        if kind != "initial" and kind not in STRATEGY_KINDS:
            raise ConfigurationError(f"unknown strategy {kind!r}")
    if stop is None:
        stop = engine.StoppingConfig()
    nu, gamma = hp

    jobs = {}
    if n_workers > 1:
        with ProcessPoolExecutor(max_workers=n_workers) as pool:
            futures = {}
            for s_idx, kind in enumerate(strategies):
                for r in range(10):
                    futures[(kind, r)] = pool.submit(
                        _run_rotation,
                        dataset,
                        plan,
                        kind,
                        r,
                        hp,
                        _run_seed(seed, s_idx, r),
                        iterations,
                        batch,
                        stop,
                        lh_ensemble_size,
                    )
            for key, future in futures.items():
                try:
                    jobs[key] = future.result()
                except (ValueError, RuntimeError) as exc:
                    jobs[key] = exc
    else:
        for s_idx, kind in enumerate(strategies):
            for r in range(10):
                try:
                    jobs[(kind, r)] = _run_rotation(
                        dataset,
                        plan,
                        kind,
                        r,
                        hp,
                        _run_seed(seed, s_idx, r),
                        iterations,
                        batch,
                        stop,
                        lh_ensemble_size,
                    )
                except (ValueError, RuntimeError) as exc:
                    jobs[(kind, r)] = exc

    entries = []
    for kind in strategies:
        rotations = []
        errors = []
        for r in range(10):
            outcome = jobs[(kind, r)]
            if isinstance(outcome, Exception):
                errors.append(f"rotation {r}: {outcome}")
                warnings.warn(
                    f"{dataset.name}/{kind}: rotation {r} failed and was excluded: {outcome}"
                )
            else:
                rotations.append(RotationCurve(r=r, bacc_curve=outcome))
        finals = [rc.bacc_curve[-1] for rc in rotations]
        mean, std = mean_std(finals)
        entries.append(
            StrategyReport(
                dataset=dataset.name,
                strategy=kind,
                nu=float(nu),
                gamma=float(gamma),
                batch=batch,
                iterations=iterations,
                seed=seed,
                rotations=tuple(rotations),
                mean_bacc=mean,
                std_bacc=std,
                complete=not errors,
                errors=tuple(errors),
            )
        )
    return BenchReport(dataset=dataset.name, entries=tuple(entries))
