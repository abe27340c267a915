"""Product-Gaussian kernel density estimation and the density-ratio scores.

Backs the two density-based query baselines: expected-margin sampling
(query the pool argmin of ``expected_margin_score``) and entropy sampling
(query the pool argmax of ``entropy_score``).
"""

import numpy as np
from sklearn.base import BaseEstimator

from .kernel import squared_distances
from .validation import check_fitted, check_matrix

__all__ = [
    "BANDWIDTH_FLOOR",
    "PRIOR_GRID",
    "GaussianKde",
    "silverman_bandwidth",
    "posterior",
    "expected_margin_score",
    "entropy_score",
]

BANDWIDTH_FLOOR = 1e-6

# class-prior grid the posterior is averaged over
PRIOR_GRID = np.round(np.arange(1, 11) * 0.1, 10)

_LOG_2PI = float(np.log(2.0 * np.pi))


def silverman_bandwidth(X):
    """Per-dimension rule-of-thumb bandwidth 1.06 * sigma * n^(-1/5).

    ``sigma`` is the sample standard deviation; dimensions with zero spread
    (or a single point) fall back to the floor of 1e-6.
    """
    X = check_matrix(X, "X")
    n = X.shape[0]
    sigma = X.std(axis=0, ddof=1) if n > 1 else np.zeros(X.shape[1])
    h = 1.06 * sigma * n ** (-0.2)
    return np.maximum(h, BANDWIDTH_FLOOR)


class GaussianKde(BaseEstimator):
    """Kernel density estimate with an axis-aligned Gaussian product kernel.

    The density at x is the mean over fitted points p of
    ``prod_j N(x_j; p_j, h_j^2)``. Bandwidths default to the per-dimension
    Silverman rule; pass ``bandwidth`` (scalar or per-dimension) to pin them.
    """

    def __init__(self, bandwidth=None):
        self.bandwidth = bandwidth

    def fit(self, X):
        X = check_matrix(X, "X")
        self.points_ = X.copy()
        if self.bandwidth is None:
            self.bandwidth_ = silverman_bandwidth(X)
        else:
            h = np.broadcast_to(
                np.asarray(self.bandwidth, dtype=np.float64), (X.shape[1],)
            ).copy()
            if not np.all(h > 0.0):
                raise ValueError("bandwidth components must be positive")
            self.bandwidth_ = h
        return self

    def log_density(self, X):
        """Log density per row of X, computed without intermediate underflow."""
        check_fitted(self, "points_")
        X = check_matrix(X, "X")
        if X.shape[1] != self.points_.shape[1]:
            raise ValueError(
                f"X has {X.shape[1]} features, model was fitted with "
                f"{self.points_.shape[1]}"
            )
        h = self.bandwidth_
        z2 = squared_distances(X / h, self.points_ / h)
        log_kernels = -0.5 * z2
        shift = log_kernels.max(axis=1, keepdims=True)
        log_mean = np.log(np.exp(log_kernels - shift).mean(axis=1)) + shift[:, 0]
        log_norm = 0.5 * X.shape[1] * _LOG_2PI + np.log(h).sum()
        return log_mean - log_norm

    def density(self, X):
        """Density per row of X; strictly positive up to float underflow."""
        return np.exp(self.log_density(X))


def posterior(p_t, p_u, delta):
    """Estimated probability that a sample is a target, given class prior delta.

    clip(delta * p_t / max(p_u, 1e-12), 0, 1); scalar or elementwise.
    """
    p_t = np.asarray(p_t, dtype=np.float64)
    p_u = np.asarray(p_u, dtype=np.float64)
    out = np.clip(delta * p_t / np.maximum(p_u, 1e-12), 0.0, 1.0)
    return float(out) if out.ndim == 0 else out


def _binary_entropy(p):
    # 0 * log(0) := 0 on both branches
    p = np.clip(p, 0.0, 1.0)
    with np.errstate(divide="ignore", invalid="ignore"):
        h = -np.where(p > 0.0, p * np.log(p), 0.0)
        h -= np.where(p < 1.0, (1.0 - p) * np.log(1.0 - p), 0.0)
    return h


def _posterior_over_grid(p_t, p_u):
    p_t = np.atleast_1d(np.asarray(p_t, dtype=np.float64))
    p_u = np.atleast_1d(np.asarray(p_u, dtype=np.float64))
    ratio = p_t / np.maximum(p_u, 1e-12)
    return np.clip(PRIOR_GRID[:, None] * ratio[None, :], 0.0, 1.0)


def expected_margin_score(p_t, p_u):
    """Mean of |2 * posterior - 1| over the prior grid; in [0, 1].

    Depends on (p_t, p_u) only through their ratio. The query strategy
    picks the pool argmin of this score.
    """
    scalar = np.ndim(p_t) == 0 and np.ndim(p_u) == 0
    scores = np.abs(2.0 * _posterior_over_grid(p_t, p_u) - 1.0).mean(axis=0)
    return float(scores[0]) if scalar else scores


def entropy_score(p_t, p_u):
    """Mean binary entropy of the posterior over the prior grid; in [0, ln 2].

    The query strategy picks the pool argmax of this score.
    """
    scalar = np.ndim(p_t) == 0 and np.ndim(p_u) == 0
    scores = _binary_entropy(_posterior_over_grid(p_t, p_u)).mean(axis=0)
    return float(scores[0]) if scalar else scores
