"""RBF kernel evaluation and Gram-matrix construction."""

import numpy as np

from .validation import check_matrix, check_vector

__all__ = ["check_gamma", "squared_distances", "rbf", "gram"]


def check_gamma(gamma):
    """Validate the inverse squared length-scale of the RBF kernel."""
    gamma = float(gamma)
    if not np.isfinite(gamma) or gamma <= 0.0:
        raise ValueError(f"gamma must be a positive finite real, got {gamma!r}")
    return gamma


def squared_distances(X, Y):
    """Pairwise squared Euclidean distances between rows of X and rows of Y.

    Accumulates per-feature contributions with Kahan compensation; the
    expanded ``|x|^2 - 2 x.y + |y|^2`` form is avoided because it cancels
    catastrophically for nearby points in high dimension.
    """
    if X.shape[1] != Y.shape[1]:
        raise ValueError(
            f"dimension mismatch: {X.shape[1]} vs {Y.shape[1]} feature columns"
        )
    total = np.zeros((X.shape[0], Y.shape[0]))
    comp = np.zeros_like(total)
    for j in range(X.shape[1]):
        term = (X[:, j, None] - Y[None, :, j]) ** 2
        y = term - comp
        t = total + y
        comp = (t - total) - y
        total = t
    return total


def rbf(x, y, gamma):
    """RBF kernel value exp(-gamma * |x - y|^2) for two feature vectors."""
    gamma = check_gamma(gamma)
    x = check_vector(x, "x")
    y = check_vector(y, "y")
    if x.shape != y.shape:
        raise ValueError(f"dimension mismatch: {x.shape[0]} vs {y.shape[0]}")
    d2 = squared_distances(x.reshape(1, -1), y.reshape(1, -1))[0, 0]
    return float(np.exp(-gamma * d2))


def gram(X, Y, gamma):
    """Kernel matrix with entry (i, j) = rbf(X[i], Y[j], gamma).

    For X is Y the result is exactly symmetric with unit diagonal.
    """
    gamma = check_gamma(gamma)
    X = check_matrix(X, "X")
    Y = check_matrix(Y, "Y")
    return np.exp(-gamma * squared_distances(X, Y))
