"""The dual-classifier query loop: pool bookkeeping, conditional retraining,
decision-state updates, stopping criterion, and the oracle abstraction.

One run is strictly sequential; distinct runs are independent and draw all
randomness from their own seeds, so they may execute in parallel.
"""

import sys
from dataclasses import dataclass, field

import numpy as np

from .data import OUTLIER_LABEL, TARGET_LABEL
from .errors import ConfigurationError, OracleError
from .ocsvm import OneClassSVM
from .strategy import normalize_dv, score_pool, select_batch

__all__ = [
    "PoolState",
    "DecisionState",
    "StoppingConfig",
    "ModelPair",
    "RunResult",
    "SimulatedOracle",
    "InteractiveOracle",
    "init_run",
    "apply_labels",
    "should_stop",
    "run",
]


@dataclass
class PoolState:
    """Labeled target ids, labeled outlier ids, and the unlabeled pool."""

    T: list
    O: list
    U: list


@dataclass
class DecisionState:
    """Stored decision values of both classifiers, keyed by the current pool."""

    dvt: dict
    dvo: dict


@dataclass(frozen=True)
class StoppingConfig:
    """Thresholds of the early-stopping rule; disabled by default."""

    t_target: float = 0.0
    t_outlier: float = 0.0
    enabled: bool = False


@dataclass
class ModelPair:
    """The target-class model plus the outlier-class model once one exists."""

    target: OneClassSVM
    outlier: OneClassSVM = None


@dataclass
class RunResult:
    bacc_per_iteration: list
    queried: list
    outliers_shown: int
    final_target_model: OneClassSVM
    stopped_early: bool = False
    complete: bool = True


class SimulatedOracle:
    """Answers label queries from the dataset's ground truth."""

    def __init__(self, dataset):
        self._labels = dataset.labels

    def label_of(self, sample_id):
        return int(self._labels[sample_id])


class InteractiveOracle:
    """Prompts a human for each queried sample on the terminal."""

    def __init__(self, dataset, input_stream=None, output_stream=None):
        self._features = dataset.features
        self._in = input_stream if input_stream is not None else sys.stdin
        self._out = output_stream if output_stream is not None else sys.stdout

    def label_of(self, sample_id):
        values = ",".join(format(v, "g") for v in self._features[sample_id])
        while True:
            self._out.write(f"sample {sample_id}: {values} — label [t/o]? ")
            self._out.flush()
            line = self._in.readline()
            if line == "":
                raise OracleError("interactive oracle reached end of input")
            answer = line.strip().lower()
            if answer == "t":
                return TARGET_LABEL
            if answer == "o":
                return OUTLIER_LABEL


def _retest(model, pools, dataset):
    """Decision values of one model on the current pool, normalized, as a map."""
    if not pools.U:
        return {}
    dv = model.decision_values(dataset.features[pools.U])
    return dict(zip(pools.U, normalize_dv(dv).tolist()))


def init_run(split, dataset, hp):
    """Set up a run: labeled targets from the initial fold, full pool unlabeled,
    target model trained and tested, every outlier decision value at 1."""
    nu, gamma = hp
    if len(split.init_ids) == 0:
        raise ConfigurationError("initial training set is empty")
    pools = PoolState(
        T=[int(i) for i in split.init_ids],
        O=[],
        U=sorted(int(i) for i in split.pool_ids),
    )
    target = OneClassSVM(nu=nu, gamma=gamma).fit(dataset.features[pools.T])
    state = DecisionState(dvt={}, dvo={u: 1.0 for u in pools.U})
    state.dvt = _retest(target, pools, dataset)
    return pools, state, ModelPair(target=target)


def apply_labels(pools, state, batch, models, dataset):
    """Move freshly labeled samples out of the pool and retrain what changed.

    Each classifier is retrained at most once: the target model if the batch
    contains a target, the outlier model if it contains an outlier. Only the
    retrained side is retested and renormalized; the stored values of the
    untouched side survive unchanged for the remaining pool. Returns the
    updated model pair; pools and state are updated in place.
    """
    ids = [sample_id for sample_id, _ in batch]
    if len(set(ids)) != len(ids):
        raise ValueError("duplicate sample ids in batch")
    pool_set = set(pools.U)
    for sample_id in ids:
        if sample_id not in pool_set:
            raise ValueError(f"sample {sample_id} is not in the unlabeled pool")

    added_target = False
    added_outlier = False
    for sample_id, label in batch:
        if label == TARGET_LABEL:
            pools.T.append(sample_id)
            added_target = True
        elif label == OUTLIER_LABEL:
            pools.O.append(sample_id)
            added_outlier = True
        else:
            raise ValueError(f"label must be 0 or 1, got {label!r}")
    removed = set(ids)
    pools.U = [u for u in pools.U if u not in removed]
    for sample_id in ids:
        state.dvt.pop(sample_id, None)
        state.dvo.pop(sample_id, None)

    params = models.target.get_params()
    target = models.target
    outlier = models.outlier
    if added_target:
        target = OneClassSVM(**params).fit(dataset.features[pools.T])
        state.dvt = _retest(target, pools, dataset)
    if added_outlier:
        outlier = OneClassSVM(**params).fit(dataset.features[pools.O])
        state.dvo = _retest(outlier, pools, dataset)
    return ModelPair(target=target, outlier=outlier)


def should_stop(state, cfg):
    """True iff every pool sample has at least one decision value below its
    threshold; vacuously true on an empty pool."""
    return all(
        state.dvt[u] < cfg.t_target or state.dvo[u] < cfg.t_outlier
        for u in state.dvt
    )


def run(split, dataset, hp, cfg, iterations, batch, stop, oracle, on_iteration=None):
    """Execute the query loop for a configured strategy.

    Records the pre-query balanced accuracy on the test set, then repeats
    score/select/query/apply, recording balanced accuracy of the current
    target model after every iteration. Stops early when the pool empties or
    the stopping rule (if enabled) fires. An oracle failure aborts the run
    and marks the partial result incomplete.
    """
    from .bench import bacc, evaluate  # deferred: bench drives this module's runs

    if iterations < 1:
        raise ConfigurationError(f"iterations must be at least 1, got {iterations}")
    if batch < 1:
        raise ConfigurationError(f"batch size must be at least 1, got {batch}")

    pools, state, models = init_run(split, dataset, hp)
    test_X = dataset.features[split.test_ids]
    test_y = dataset.labels[split.test_ids]
    curve = [bacc(evaluate(models.target, test_X, test_y))]
    queried = []
    outliers_shown = 0
    stopped_early = False
    complete = True

    for iteration in range(1, iterations + 1):
        if not pools.U:
            stopped_early = True
            break
        if stop.enabled and should_stop(state, stop):
            stopped_early = True
            break
        scored = score_pool(cfg, state, pools, models, dataset)
        batch_ids = select_batch(scored, batch)
        try:
            pairs = [(int(i), oracle.label_of(int(i))) for i in batch_ids]
        except OracleError:
            complete = False
            break
        models = apply_labels(pools, state, pairs, models, dataset)
        queried.extend(pairs)
        outliers_shown += sum(1 for _, label in pairs if label == OUTLIER_LABEL)
        curve.append(bacc(evaluate(models.target, test_X, test_y)))
        if on_iteration is not None:
            on_iteration(iteration, pools, state, models)

    return RunResult(
        bacc_per_iteration=curve,
        queried=queried,
        outliers_shown=outliers_shown,
        final_target_model=models.target,
        stopped_early=stopped_early,
        complete=complete,
    )
