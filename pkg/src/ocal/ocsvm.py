"""nu-one-class SVM trained by pairwise working-set descent on its dual."""

import json

import numpy as np
from sklearn.base import BaseEstimator

from .kernel import check_gamma, gram
from .validation import check_fitted, check_matrix, check_unit_interval

__all__ = ["OneClassSVM", "ALPHA_PRUNE"]

# coefficients at or below this are dropped from the fitted model
ALPHA_PRUNE = 1e-9


class OneClassSVM(BaseEstimator):
    """One-class support vector machine with an RBF kernel.

    Training solves the dual problem

        minimize    0.5 * a' Q a
        subject to  sum(a) = 1,  0 <= a_i <= 1 / (nu * n)

    where Q is the RBF Gram matrix of the training rows. Mass is moved
    between the pair of coordinates that currently violates the KKT
    conditions the most; every pair update preserves the equality
    constraint, so the iterate stays feasible throughout.

    Decision values use the convention that trained-class samples get
    negative values:

        DV(x) = rho - sum_i a_i K(x, x_i)

    and a sample is classified to the outlier side iff DV(x) > 0.

    Parameters
    ----------
    nu : float in (0, 1]
        Upper bound on the fraction of training points left outside the
        fitted region and lower bound on the fraction of support vectors.
    gamma : float > 0
        RBF kernel coefficient (inverse squared length-scale).
    tol : float
        Maximal KKT violation allowed at convergence.
    max_updates : int
        Hard cap on the number of pair updates.

    Attributes
    ----------
    support_ : ndarray of shape (n_sv,)
        Indices of the kept support vectors in the training matrix.
    support_vectors_ : ndarray of shape (n_sv, d)
    alpha_ : ndarray of shape (n_sv,)
        Dual coefficients of the kept support vectors; sums to 1 up to the
        pruning loss.
    rho_ : float
        Offset, averaged over free support vectors (over all support
        vectors when none is free).
    kkt_violation_ : float
        Residual KKT violation measured on the refreshed gradient.
    dual_objective_ : float
        0.5 * a' Q a at the returned solution.
    """

    def __init__(self, nu=0.5, gamma=1.0, tol=1e-6, max_updates=10_000_000):
        self.nu = nu
        self.gamma = gamma
        self.tol = tol
        self.max_updates = max_updates

    def fit(self, X):
        X = check_matrix(X, "X")
        nu = check_unit_interval(self.nu, "nu")
        gamma = check_gamma(self.gamma)
        n = X.shape[0]
        box = 1.0 / (nu * n)

        Q = gram(X, X, gamma)
        alpha = self._initial_alpha(n, nu, box)
        grad = Q @ alpha

        updates = 0
        while updates < self.max_updates:
            up = np.where(alpha < box, grad, np.inf)
            i = int(np.argmin(up))
            down = np.where(alpha > 0.0, grad, -np.inf)
            j = int(np.argmax(down))
            violation = down[j] - up[i]
            if not violation >= self.tol:
                break

            quad = Q[i, i] + Q[j, j] - 2.0 * Q[i, j]
            step = violation / max(quad, 1e-12)
            room_i = box - alpha[i]
            if room_i <= alpha[j]:
                if step >= room_i:
                    step = room_i
                    alpha[i] = box
                    alpha[j] -= room_i
                else:
                    alpha[i] += step
                    alpha[j] -= step
            else:
                if step >= alpha[j]:
                    step = alpha[j]
                    alpha[i] += step
                    alpha[j] = 0.0
                else:
                    alpha[i] += step
                    alpha[j] -= step
            grad += step * (Q[:, i] - Q[:, j])
            updates += 1

        # refresh the gradient: incremental updates accumulate rounding
        grad = Q @ alpha
        kkt = 0.0
        can_up = alpha < box
        can_down = alpha > 0.0
        if can_up.any() and can_down.any():
            kkt = max(0.0, float(grad[can_down].max() - grad[can_up].min()))

        keep = alpha > ALPHA_PRUNE
        free = keep & (alpha < box - min(ALPHA_PRUNE, 0.5 * box))
        anchor = free if free.any() else keep

        self.n_train_ = n
        self.nu_ = nu
        self.gamma_ = gamma
        self.box_ = box
        self.support_ = np.flatnonzero(keep)
        self.support_vectors_ = X[keep].copy()
        self.alpha_ = alpha[keep].copy()
        self.rho_ = float(grad[anchor].mean())
        self.dual_objective_ = float(0.5 * (alpha @ grad))
        self.kkt_violation_ = kkt
        self.n_updates_ = updates
        return self

    @staticmethod
    def _initial_alpha(n, nu, box):
        # feasible start: leading floor(nu*n) coordinates at the box bound,
        # remainder on the next coordinate
        alpha = np.zeros(n)
        m = min(int(nu * n), n)
        alpha[:m] = box
        if m < n:
            alpha[m] = 1.0 - m * box
        return alpha

    def decision_values(self, X):
        """DV(x) = rho - sum_i a_i K(x, x_i) for every row of X.

        Negative strictly inside the fitted region, positive outside.
        """
        check_fitted(self, "rho_")
        X = check_matrix(X, "X")
        if X.shape[1] != self.support_vectors_.shape[1]:
            raise ValueError(
                f"X has {X.shape[1]} features, model was fitted with "
                f"{self.support_vectors_.shape[1]}"
            )
        K = gram(X, self.support_vectors_, self.gamma_)
        # einsum keeps the reduction order independent of the batch shape,
        # so batch evaluation is bit-identical to pointwise calls
        return self.rho_ - np.einsum("ij,j->i", K, self.alpha_)

    def predict(self, X):
        """Class marks matching the CSV convention: 1 = outlier side, 0 = target."""
        return (self.decision_values(X) > 0.0).astype(np.int64)

    def to_json(self):
        """Serialize the fitted model; floats survive the round trip exactly."""
        check_fitted(self, "rho_")
        return json.dumps(
            {
                "nu": self.nu_,
                "gamma": self.gamma_,
                "rho": self.rho_,
                "alpha": self.alpha_.tolist(),
                "sv": self.support_vectors_.tolist(),
            }
        )

    @classmethod
    def from_json(cls, text):
        doc = json.loads(text)
        model = cls(nu=doc["nu"], gamma=doc["gamma"])
        model.nu_ = check_unit_interval(doc["nu"], "nu")
        model.gamma_ = check_gamma(doc["gamma"])
        model.rho_ = float(doc["rho"])
        model.alpha_ = np.asarray(doc["alpha"], dtype=np.float64)
        model.support_vectors_ = np.asarray(doc["sv"], dtype=np.float64)
        if model.alpha_.shape[0] != model.support_vectors_.shape[0]:
            raise ValueError("alpha and sv row counts disagree")
        return model
