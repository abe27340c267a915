"""Query-strategy scoring: DV normalization, aggregation rules, batch selection.

Every strategy maps the frozen decision state of the unlabeled pool to one
score per pool sample; higher scores are queried earlier. Scoring never
mutates models, pools, or the decision state.
"""

from dataclasses import dataclass

import numpy as np

from .kde import GaussianKde, entropy_score, expected_margin_score
from .ocsvm import OneClassSVM

__all__ = [
    "STRATEGY_KINDS",
    "StrategyConfig",
    "ScoredPool",
    "normalize_dv",
    "agg_exploration",
    "agg_similarity",
    "score_pool",
    "select_batch",
]

STRATEGY_KINDS = (
    "random",
    "lh",
    "expected_margin",
    "entropy",
    "outlier",
    "similarity",
    "exploration",
)


@dataclass(frozen=True)
class StrategyConfig:
    kind: str
    seed: int = 0
    lh_ensemble_size: int = 10

    def __post_init__(self):
        if self.kind not in STRATEGY_KINDS:
            raise ValueError(
                f"unknown strategy {self.kind!r}; choose from {STRATEGY_KINDS}"
            )
        if self.kind == "lh" and self.lh_ensemble_size < 2:
            raise ValueError("lh needs an ensemble of at least 2 classifiers")


@dataclass(frozen=True)
class ScoredPool:
    ids: np.ndarray
    scores: np.ndarray

    def __post_init__(self):
        ids = np.asarray(self.ids, dtype=np.int64)
        scores = np.asarray(self.scores, dtype=np.float64)
        if ids.shape != scores.shape or ids.ndim != 1:
            raise ValueError("ids and scores must be aligned 1-d arrays")
        if scores.size and not np.all(np.isfinite(scores)):
            raise ValueError("scores must be finite")
        object.__setattr__(self, "ids", ids)
        object.__setattr__(self, "scores", scores)


def normalize_dv(dv):
    """Scale decision values to a maximum of exactly 1.

    When the maximum is not positive, divide by max(|dv|) instead so all
    values land in [-1, 0]; an all-zero vector passes through unchanged.
    """
    dv = np.asarray(dv, dtype=np.float64)
    if dv.size == 0:
        raise ValueError("dv must be non-empty")
    m = dv.max()
    if m > 0.0:
        return dv / m
    a = np.abs(dv).max()
    if a > 0.0:
        return dv / a
    return dv.copy()


def agg_exploration(dvt, dvo):
    """Aggregate for exploration sampling: the product of both decision values."""
    return dvt * dvo


def agg_similarity(dvt, dvo):
    """Aggregate for similarity sampling: -|dvt - dvo| on normalized values."""
    return -np.abs(dvt - dvo)


def score_pool(cfg, state, pools, models, dataset):
    """Score every unlabeled sample under the configured strategy."""
    ids = np.asarray(pools.U, dtype=np.int64)
    if ids.size == 0:
        return ScoredPool(ids=ids, scores=np.zeros(0))
    dvt = np.asarray([state.dvt[u] for u in pools.U])
    dvo = np.asarray([state.dvo[u] for u in pools.U])

    if cfg.kind == "exploration":
        scores = agg_exploration(dvt, dvo)
    elif cfg.kind == "similarity":
        scores = agg_similarity(dvt, dvo)
    elif cfg.kind == "outlier":
        scores = dvt
    elif cfg.kind == "random":
        scores = _random_priorities(cfg.seed, pools.U)
    elif cfg.kind == "lh":
        scores = _lh_scores(cfg, pools, models, dataset, dvt)
    elif cfg.kind in ("expected_margin", "entropy"):
        p_t, p_u = _density_pair(pools, dataset)
        if cfg.kind == "expected_margin":
            scores = -expected_margin_score(p_t, p_u)
        else:
            scores = entropy_score(p_t, p_u)
    else:  # pragma: no cover - StrategyConfig already validated the kind
        raise ValueError(f"unknown strategy {cfg.kind!r}")
    return ScoredPool(ids=ids, scores=np.asarray(scores, dtype=np.float64))


def select_batch(scored, b):
    """The min(b, pool) ids with highest scores; ties broken by lowest id."""
    if b < 1:
        raise ValueError(f"batch size must be at least 1, got {b}")
    if scored.ids.size == 0:
        return np.zeros(0, dtype=np.int64)
    order = np.lexsort((scored.ids, -scored.scores))
    return scored.ids[order[: min(b, scored.ids.size)]].copy()


def _random_priorities(seed, pool_ids):
    # fixed per-id priority: querying in this order is a seeded uniform
    # draw without replacement, stable as the pool shrinks
    return np.asarray(
        [np.random.default_rng([seed, int(u)]).random() for u in pool_ids]
    )


def _density_pair(pools, dataset):
    # joint rescaling per sample is exact for the ratio-based scores and
    # avoids underflow of the product kernel in high dimension
    pool_X = dataset.features[pools.U]
    log_pt = GaussianKde().fit(dataset.features[pools.T]).log_density(pool_X)
    log_pu = GaussianKde().fit(pool_X).log_density(pool_X)
    shift = np.maximum(log_pt, log_pu)
    return np.exp(log_pt - shift), np.exp(log_pu - shift)


def _lh_scores(cfg, pools, models, dataset, dvt):
    """Confidence rule: query estimated outliers with high ensemble agreement
    and estimated targets with low ensemble agreement.

    Agreement is measured against the main target model's estimated label by
    an ensemble fitted on bootstrap resamples of the labeled target set.
    """
    estimated_outlier = dvt > 0.0
    pool_X = dataset.features[pools.U]
    train_X = dataset.features[pools.T]
    params = models.target.get_params()
    # keyed on the target-set size: the set only grows during a run, so the
    # ensemble is redrawn exactly when new targets arrive
    rng = np.random.default_rng([cfg.seed, len(pools.T)])
    outlier_votes = np.zeros(len(pools.U))
    for _ in range(cfg.lh_ensemble_size):
        resample = rng.integers(0, train_X.shape[0], size=train_X.shape[0])
        member = OneClassSVM(**params).fit(train_X[resample])
        outlier_votes += member.decision_values(pool_X) > 0.0
    vote_fraction = outlier_votes / cfg.lh_ensemble_size
    confidence = np.where(estimated_outlier, vote_fraction, 1.0 - vote_fraction)
    base = np.where(estimated_outlier, confidence, 1.0 - confidence)
    # agreement takes only k+1 values and saturates far from the labeled
    # targets; the main model's certainty orders samples within one
    # agreement level and is scaled so it can never cross levels
    certainty = np.where(
        estimated_outlier, np.clip(dvt, 0.0, 1.0), np.clip(1.0 + dvt, 0.0, 1.0)
    )
    return base + certainty * (0.49 / cfg.lh_ensemble_size)
