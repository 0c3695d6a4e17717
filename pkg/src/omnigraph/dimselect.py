"""Embedding-dimension selection by profile-likelihood scree-plot elbows.

Given eigenvalues sorted in nonincreasing order, a split point q is scored by
the Gaussian log-likelihood of modeling the first q values and the remaining
values as two groups with their own means and a shared pooled-MLE variance;
the elbow is the q maximizing that profile likelihood.  Further elbows repeat
the procedure on the tail left after the previous elbow.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import ConfigError


def _profile_loglik(values: np.ndarray, q: int) -> float:
    """Two-group Gaussian profile log-likelihood of splitting after q values.

    Zero pooled variance means the split fits exactly (each group constant);
    that is scored +inf so exact fits dominate, with ties resolved by the
    caller toward the smallest q.
    """
    head, tail = values[:q], values[q:]
    ss = ((head - head.mean()) ** 2).sum()
    if tail.size:
        ss += ((tail - tail.mean()) ** 2).sum()
    n = values.size
    var = ss / n
    if var == 0.0:
        return math.inf
    return -0.5 * n * math.log(2.0 * math.pi * var) - 0.5 * n


def zhu_ghodsi_elbows(eigenvalues, n_elbows: int = 1) -> list[int]:
    """Elbow dimensions of a nonincreasing positive eigenvalue sequence.

    Returns up to ``n_elbows`` cumulative dimensions (1-based counts into the
    input), fewer if the sequence is exhausted first.
    """
    if n_elbows < 1:
        raise ConfigError(f"n_elbows must be >= 1, got {n_elbows}")
    values = np.asarray(eigenvalues, dtype=float)
    if values.ndim != 1 or values.size < 2:
        raise ConfigError("need a 1-D sequence of at least 2 eigenvalues")
    if (np.diff(values) > 0).any():
        raise ConfigError("eigenvalues must be sorted nonincreasing")
    if (values <= 0).any():
        raise ConfigError("eigenvalues must be positive")

    elbows: list[int] = []
    offset = 0
    while len(elbows) < n_elbows and offset < values.size:
        tail = values[offset:]
        best_q, best_ll = 1, -math.inf
        for q in range(1, tail.size + 1):
            ll = _profile_loglik(tail, q)
            if ll > best_ll:
                best_q, best_ll = q, ll
        elbows.append(offset + best_q)
        offset += best_q
    return elbows
