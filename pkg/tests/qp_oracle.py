"""Independent oracle for the one-class SVM dual.

Solves  min 0.5 a'Qa  s.t.  sum(a) = 1, 0 <= a_i <= box  by accelerated
projected gradient descent with an exact box-simplex projection and
adaptive restart. Deliberately shares no code with the package solver;
the step size comes from an eigendecomposition of Q.
"""

import numpy as np


def project_box_simplex(v, box, total=1.0):
    """Euclidean projection of v onto {0 <= a <= box, sum(a) = total}.

    The projection is clip(v - tau, 0, box) for the tau making the sum hit
    ``total``; tau is found exactly on the sorted breakpoint grid.
    """
    v = np.asarray(v, dtype=np.float64)
    bps = np.sort(np.concatenate([v, v - box]))
    sums = np.clip(v[None, :] - bps[:, None], 0.0, box).sum(axis=1)
    # sums is non-increasing in tau; locate the segment bracketing `total`
    k = int(np.searchsorted(-sums, -total, side="left"))
    if k == 0:
        tau = bps[0]
    elif k >= bps.size:
        tau = bps[-1]
    else:
        s_lo, s_hi = sums[k - 1], sums[k]
        if s_lo == s_hi:
            tau = bps[k - 1]
        else:
            frac = (s_lo - total) / (s_lo - s_hi)
            tau = bps[k - 1] + frac * (bps[k] - bps[k - 1])
    return np.clip(v - tau, 0.0, box)


def dual_objective(Q, a):
    return 0.5 * float(a @ Q @ a)


def solve_dual(Q, box, max_iters=200_000, check_every=200, stall_tol=1e-15):
    """Long-horizon projected-gradient solve of the one-class dual."""
    n = Q.shape[0]
    lipschitz = max(float(np.linalg.eigvalsh(Q)[-1]), 1e-12)
    a = project_box_simplex(np.full(n, 1.0 / n), box)
    z = a.copy()
    t = 1.0
    last_obj = dual_objective(Q, a)
    for it in range(1, max_iters + 1):
        a_next = project_box_simplex(z - (Q @ z) / lipschitz, box)
        # adaptive restart: drop momentum when it points uphill
        if (z - a_next) @ (a_next - a) > 0.0:
            t = 1.0
            z = a_next
        else:
            t_next = 0.5 * (1.0 + (1.0 + 4.0 * t * t) ** 0.5)
            z = a_next + ((t - 1.0) / t_next) * (a_next - a)
            t = t_next
        a = a_next
        if it % check_every == 0:
            obj = dual_objective(Q, a)
            if last_obj - obj < stall_tol:
                break
            last_obj = obj
    return a


def kkt_violation(Q, a, box):
    """max over movable pairs of the gradient gap; 0 at optimality."""
    g = Q @ a
    can_up = a < box - 1e-12
    can_down = a > 1e-12
    if not can_up.any() or not can_down.any():
        return 0.0
    return max(0.0, float(g[can_down].max() - g[can_up].min()))
