"""Two-sample latent-position tests and classical multivariate tests.

The graph two-sample statistics both measure squared Frobenius distance
between estimated latent-position matrices: the joint-embedding statistic
compares the two blocks of a shared omnibus embedding directly, while the
pairwise statistic embeds each graph separately and aligns the embeddings by
orthogonal Procrustes first.  Null distributions come from Monte-Carlo
resampling of graph pairs from a common edge-probability matrix.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy import stats as spstats

from .errors import ConfigError, DataError
from .embed import ase, omni_embed, procrustes
from .rdpg import Graph, probability_matrix, sample_graph
from .seeds import Seed

# Test-method tags.
OMNI_FROBENIUS = "omni-frobenius"
PROCRUSTES_FROBENIUS = "procrustes-frobenius"
HOTELLING_T2 = "hotelling-t2"
MANOVA_WILKS = "manova-wilks"

TWO_SAMPLE_METHODS = (OMNI_FROBENIUS, PROCRUSTES_FROBENIUS)

_RIDGE = 1e-8


@dataclass(frozen=True)
class TestResult:
    """Outcome of a hypothesis test at level ``alpha``.

    ``null_sample`` is empty for closed-form tests.  The decision is derived,
    not stored: ``reject`` is exactly ``p_value < alpha``.
    """

    statistic: float
    p_value: float
    method: str
    alpha: float
    null_sample: np.ndarray = field(default_factory=lambda: np.empty(0))

    def __post_init__(self):
        if not 0.0 <= self.p_value <= 1.0:
            raise ValueError(f"p-value {self.p_value} outside [0, 1]")
        null = np.asarray(self.null_sample, dtype=float)
        null.flags.writeable = False
        object.__setattr__(self, "null_sample", null)

    @property
    def reject(self) -> bool:
        return self.p_value < self.alpha


def frobenius_stat(X1: np.ndarray, X2: np.ndarray) -> float:
    """Sum of squared row differences, i.e. ||X1 - X2||_F**2."""
    X1 = np.asarray(X1, dtype=float)
    X2 = np.asarray(X2, dtype=float)
    if X1.shape != X2.shape:
        raise DataError(f"shapes must match, got {X1.shape} and {X2.shape}")
    diff = X1 - X2
    return float((diff * diff).sum())


def omni_test_stat(A1: Graph, A2: Graph, d: int) -> float:
    """Squared Frobenius distance between the two blocks of the joint
    embedding of (A1, A2); no alignment step is needed."""
    E = omni_embed([A1, A2], d)
    return frobenius_stat(E.block(0), E.block(1))


def procrustes_test_stat(A1: Graph, A2: Graph, d: int) -> float:
    """Squared Procrustes-aligned distance between the separate embeddings."""
    E1 = ase(A1, d)
    E2 = ase(A2, d)
    return procrustes(E1.Y, E2.Y).residual ** 2


def _two_sample_stat(A1: Graph, A2: Graph, d: int, method: str) -> float:
    if method == OMNI_FROBENIUS:
        return omni_test_stat(A1, A2, d)
    if method == PROCRUSTES_FROBENIUS:
        return procrustes_test_stat(A1, A2, d)
    raise ConfigError(f"unknown two-sample method {method!r}")


def monte_carlo_null(P: np.ndarray, d: int, method: str, iters: int, seed: Seed) -> np.ndarray:
    """Null sample of the chosen statistic from graph pairs drawn from one P.

    Iterate j samples its pair from the child streams ``seed.derive(j, 0)``
    and ``seed.derive(j, 1)``.  Returned sorted ascending.
    """
    if iters < 1:
        raise ConfigError(f"need iters >= 1, got {iters}")
    if method not in TWO_SAMPLE_METHODS:
        raise ConfigError(f"unknown two-sample method {method!r}")
    stats = np.empty(iters)
    for j in range(iters):
        A1 = sample_graph(P, seed.derive(j, 0))
        A2 = sample_graph(P, seed.derive(j, 1))
        stats[j] = _two_sample_stat(A1, A2, d, method)
    stats.sort()
    return stats


def estimate_probability_matrix(graphs, d: int) -> np.ndarray:
    """Plug-in edge-probability estimate from the mean graph's embedding.

    Approximate: estimation noise in the null can dominate weak signals
    except on very large graphs, so prefer the known-P null when latent
    positions are available.
    """
    from .embed import abar_embed

    Xhat = abar_embed(graphs, d).Y
    return np.clip(Xhat @ Xhat.T, 0.0, 1.0)


def two_sample_test(
    A1: Graph,
    A2: Graph,
    d: int,
    method: str,
    null: np.ndarray,
    alpha: float = 0.05,
) -> TestResult:
    """Monte-Carlo two-sample test of equal latent positions.

    The p-value uses the add-one rule (1 + #{null >= stat}) / (1 + #null),
    which keeps it strictly positive and finite-sample valid.
    """
    null = np.asarray(null, dtype=float)
    if null.size == 0:
        raise ConfigError("null sample must be nonempty")
    if not 0.0 < alpha < 1.0:
        raise ConfigError(f"alpha must be in (0, 1), got {alpha}")
    stat = _two_sample_stat(A1, A2, d, method)
    p = (1.0 + (null >= stat).sum()) / (1.0 + null.size)
    return TestResult(
        statistic=stat, p_value=float(p), method=method, alpha=alpha, null_sample=np.sort(null)
    )


def _floored_eigh(S: np.ndarray):
    """Eigendecompose a symmetric PSD matrix with eigenvalues floored at a
    scale-aware 1e-8 ridge, so degenerate scatter stays invertible."""
    S = (S + S.T) / 2.0
    vals, vecs = np.linalg.eigh(S)
    floor = _RIDGE * max(1.0, float(vals.max(initial=0.0)))
    return np.maximum(vals, floor), vecs


def _ridged_solve(S: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Solve S x = b via the floored eigendecomposition."""
    vals, vecs = _floored_eigh(S)
    return vecs @ ((vecs.T @ b) / vals)


def hotelling_t2(S1: np.ndarray, S2: np.ndarray, alpha: float = 0.05) -> TestResult:
    """Two-sample Hotelling T-squared test of equal mean vectors.

    Uses the pooled covariance (ridge fallback when singular) and the exact
    F transform of the statistic for the p-value.
    """
    S1 = np.atleast_2d(np.asarray(S1, dtype=float))
    S2 = np.atleast_2d(np.asarray(S2, dtype=float))
    if S1.shape[1] != S2.shape[1]:
        raise DataError(f"dimension mismatch: {S1.shape[1]} vs {S2.shape[1]}")
    n1, n2, d = S1.shape[0], S2.shape[0], S1.shape[1]
    dof = n1 + n2 - d - 1
    if dof < 1 or n1 < 2 or n2 < 2:
        raise DataError(
            f"insufficient sample size for Hotelling T2: n1={n1}, n2={n2}, d={d}"
        )
    diff = S1.mean(axis=0) - S2.mean(axis=0)
    pooled = ((n1 - 1) * np.cov(S1, rowvar=False, ddof=1)
              + (n2 - 1) * np.cov(S2, rowvar=False, ddof=1)) / (n1 + n2 - 2)
    pooled = np.atleast_2d(pooled)
    t2 = float(n1 * n2 / (n1 + n2) * diff @ _ridged_solve(pooled, diff))
    t2 = max(t2, 0.0)
    f_stat = t2 * dof / ((n1 + n2 - 2) * d)
    p = float(spstats.f.sf(f_stat, d, dof))
    return TestResult(statistic=t2, p_value=p, method=HOTELLING_T2, alpha=alpha)


def wilks_lambda(groups: list[np.ndarray]) -> float:
    """Wilks' lambda det(W)/det(W+B) from within/between-group scatter."""
    groups = [np.atleast_2d(np.asarray(g, dtype=float)) for g in groups]
    if len(groups) < 2:
        raise DataError("need at least 2 groups")
    d = groups[0].shape[1]
    if any(g.shape[1] != d for g in groups):
        raise DataError("all groups must share the same dimension")
    total = np.vstack(groups)
    n = total.shape[0]
    if n - len(groups) < d:
        raise DataError(
            f"need total n - #groups >= d, got n={n}, g={len(groups)}, d={d}"
        )
    grand = total.mean(axis=0)
    W = np.zeros((d, d))
    B = np.zeros((d, d))
    for g in groups:
        mu = g.mean(axis=0)
        dev = g - mu
        W += dev.T @ dev
        centered = mu - grand
        B += g.shape[0] * np.outer(centered, centered)
    T = W + B
    # shared eigenvalue floor keeps lambda in (0, 1] on degenerate scatter
    floor = _RIDGE * max(1.0, float(np.linalg.eigvalsh((T + T.T) / 2.0).max(initial=0.0)))
    logdet_w = float(np.log(np.maximum(np.linalg.eigvalsh((W + W.T) / 2.0), floor)).sum())
    logdet_t = float(np.log(np.maximum(np.linalg.eigvalsh((T + T.T) / 2.0), floor)).sum())
    lam = float(np.exp(logdet_w - logdet_t))
    return min(lam, 1.0)


def manova_wilks(groups: list[np.ndarray], alpha: float = 0.05) -> TestResult:
    """One-way MANOVA via Wilks' lambda with Bartlett's chi-square p-value."""
    groups = [np.atleast_2d(np.asarray(g, dtype=float)) for g in groups]
    lam = wilks_lambda(groups)
    n = sum(g.shape[0] for g in groups)
    g = len(groups)
    d = groups[0].shape[1]
    scale = n - 1 - (d + g) / 2.0
    stat = max(-scale * np.log(max(lam, np.finfo(float).tiny)), 0.0)
    p = float(spstats.chi2.sf(stat, d * (g - 1)))
    return TestResult(statistic=float(stat), p_value=p, method=MANOVA_WILKS, alpha=alpha)
