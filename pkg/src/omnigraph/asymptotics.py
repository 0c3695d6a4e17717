"""Limiting covariance of joint-embedding residuals and empirical checks.

For latent rows drawn from a distribution with second-moment matrix D, the
scaled residual sqrt(n) * (aligned embedding row - true latent row) of any
fixed vertex/graph slot is asymptotically Gaussian with covariance

    Sigma(y) = (m + 3) / (4 m) * D^{-1} E[(y'X - (y'X)^2) X X'] D^{-1},

conditional on that vertex's latent position being y.  The (m+3)/(4m)
prefactor is the variance payoff of embedding m graphs jointly: 1 at m=1,
approaching 1/4 as m grows.  This module computes Sigma(y) exactly for
discrete mixtures, harvests empirical residual samples from simulated graph
collections, and compares the two.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, NumericalError
from .embed import omni_embed, procrustes
from .rdpg import DiscreteMixture, sample_jrdpg, sample_latents, second_moment
from .seeds import Seed


@dataclass(frozen=True)
class TheoreticalCovariance:
    """Limiting residual covariance at conditioning position y and graph
    count m; ``Sigma * 4m/(m+3)`` is the m-independent core."""

    y: np.ndarray
    m: int
    Sigma: np.ndarray

    def __post_init__(self):
        y = np.asarray(self.y, dtype=float)
        S = np.asarray(self.Sigma, dtype=float)
        y.flags.writeable = False
        S.flags.writeable = False
        object.__setattr__(self, "y", y)
        object.__setattr__(self, "Sigma", S)


@dataclass(frozen=True)
class ResidualSample:
    """Scaled residual rows, one per replicate, for a fixed (vertex, graph)
    slot; ``dropped`` counts replicates lost to embedding failures."""

    residuals: np.ndarray
    vertex: int
    graph_index: int
    n: int
    m: int
    dropped: int = 0

    def __post_init__(self):
        R = np.asarray(self.residuals, dtype=float)
        R.flags.writeable = False
        object.__setattr__(self, "residuals", R)


def sigma_tilde(dist: DiscreteMixture, y: np.ndarray) -> np.ndarray:
    """Exact E[(y'X - (y'X)^2) X X'] over a discrete mixture."""
    if not isinstance(dist, DiscreteMixture):
        raise ConfigError(
            f"sigma_tilde needs a DiscreteMixture (exact expectation), got {type(dist).__name__}"
        )
    y = np.asarray(y, dtype=float)
    if y.shape != (dist.dim,):
        raise ConfigError(f"y must have shape ({dist.dim},), got {y.shape}")
    p = dist.atoms @ y
    if (p < -1e-12).any() or (p > 1.0 + 1e-12).any():
        raise ConfigError("y'atom must lie in [0, 1] for every atom")
    p = np.clip(p, 0.0, 1.0)
    weights = dist.weights * (p - p * p)
    return np.einsum("k,ki,kj->ij", weights, dist.atoms, dist.atoms)


def theoretical_sigma(dist: DiscreteMixture, y: np.ndarray, m: int) -> TheoreticalCovariance:
    """Exact limiting covariance (m+3)/(4m) * D^{-1} sigma_tilde(y) D^{-1}."""
    if m < 1:
        raise ConfigError(f"need m >= 1, got {m}")
    delta = second_moment(dist)
    try:
        delta_inv = np.linalg.inv(delta)
    except np.linalg.LinAlgError as exc:
        raise NumericalError("second-moment matrix is singular") from exc
    if np.linalg.cond(delta) > 1e12:
        raise NumericalError("second-moment matrix is numerically singular")
    core = delta_inv @ sigma_tilde(dist, y) @ delta_inv
    sigma = (m + 3.0) / (4.0 * m) * core
    return TheoreticalCovariance(y=np.asarray(y, dtype=float), m=m, Sigma=sigma)


def residual_sample(
    dist: DiscreteMixture,
    y: np.ndarray,
    n: int,
    m: int,
    vertex: int,
    graph_index: int,
    replicates: int,
    d: int,
    seed: Seed,
) -> ResidualSample:
    """Scaled embedding residuals at one (vertex, graph) slot over replicates.

    Each replicate draws fresh latent rows from ``dist`` with row ``vertex``
    pinned to ``y`` (conditioning on that latent position), samples m graphs
    from the shared probability matrix, jointly embeds them, aligns the full
    embedding onto the stacked true latents by orthogonal Procrustes, and
    records sqrt(n) times row ``n*graph_index + vertex`` of the aligned
    difference.  Replicates whose embedding fails are dropped and counted.
    """
    if not isinstance(dist, DiscreteMixture):
        raise ConfigError("residual_sample needs a DiscreteMixture with known atoms")
    y = np.asarray(y, dtype=float)
    if not 0 <= vertex < n:
        raise ConfigError(f"vertex {vertex} out of range for n={n}")
    if not 0 <= graph_index < m:
        raise ConfigError(f"graph index {graph_index} out of range for m={m}")
    if replicates < 1:
        raise ConfigError(f"need replicates >= 1, got {replicates}")
    h = n * graph_index + vertex
    rows = []
    dropped = 0
    for r in range(replicates):
        s = seed.derive("residual", r)
        X = sample_latents(dist, n, s.derive("latents"))
        X[vertex] = y
        graphs = sample_jrdpg(X, m, s.derive("graphs"))
        Z = np.tile(X, (m, 1))
        try:
            E = omni_embed(graphs, d)
        except NumericalError:
            dropped += 1
            continue
        W = procrustes(Z, E.Y).W
        rows.append(np.sqrt(n) * (E.Y @ W - Z)[h])
    if not rows:
        raise NumericalError("every replicate failed to embed")
    return ResidualSample(
        residuals=np.array(rows),
        vertex=vertex,
        graph_index=graph_index,
        n=n,
        m=m,
        dropped=dropped,
    )


@dataclass(frozen=True)
class CovarianceCheck:
    """Agreement diagnostics between empirical residuals and theory."""

    rel_frobenius_error: float
    skewness: np.ndarray
    excess_kurtosis: np.ndarray


def covariance_check(rs: ResidualSample, theory: TheoreticalCovariance) -> CovarianceCheck:
    """Relative covariance error plus per-coordinate moment diagnostics."""
    R = rs.residuals
    if R.shape[0] < 50:
        raise ConfigError(f"need at least 50 replicates, got {R.shape[0]}")
    emp = np.cov(R, rowvar=False, ddof=1)
    emp = np.atleast_2d(emp)
    rel = float(np.linalg.norm(emp - theory.Sigma) / np.linalg.norm(theory.Sigma))
    centered = R - R.mean(axis=0)
    m2 = (centered**2).mean(axis=0)
    m3 = (centered**3).mean(axis=0)
    m4 = (centered**4).mean(axis=0)
    skew = m3 / m2**1.5
    kurt = m4 / m2**2 - 3.0
    return CovarianceCheck(
        rel_frobenius_error=rel, skewness=skew, excess_kurtosis=kurt
    )
