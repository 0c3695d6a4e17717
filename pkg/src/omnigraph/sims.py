"""Simulation harnesses: estimator accuracy and two-sample test power.

All harnesses draw latent rows from a Dirichlet (default alpha = (1,1,1))
unless told otherwise, derive per-trial seed streams so results are
reproducible regardless of scheduling, and report binomial standard errors
for power estimates and across-trial standard errors for accuracy estimates.
"""

from __future__ import annotations

import multiprocessing
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, NumericalError
from .embed import build_omnibus, procrustes, spectral_embed
from .hypotest import (
    OMNI_FROBENIUS,
    PROCRUSTES_FROBENIUS,
    monte_carlo_null,
    two_sample_test,
)
from .rdpg import Dirichlet, LatentDistribution, probability_matrix, sample_graph, sample_latents
from .seeds import Seed

DEFAULT_DIST = Dirichlet((1.0, 1.0, 1.0))

# Estimator tags for latent-position recovery.
EST_ASE1 = "ASE1"
EST_ABAR = "Abar"
EST_OMNI = "OMNI"
EST_OMNIBAR = "OMNIbar"
EST_PROCBAR = "PROCbar"
ESTIMATORS = (EST_ASE1, EST_ABAR, EST_OMNI, EST_OMNIBAR, EST_PROCBAR)

# Drifted vertex design: the designated vertex moves from start toward
# target as the drift parameter goes 0 -> 1.
DRIFT_START = np.array([0.8, 0.1, 0.1])
DRIFT_TARGET = np.array([0.1, 0.1, 0.8])


@dataclass(frozen=True)
class PowerCurvePoint:
    """Estimated rejection rate of one method at one design point."""

    method: str
    n: int
    k_or_lambda: float
    power: float
    stderr: float
    trials: int


@dataclass(frozen=True)
class MseReport:
    """Per-estimator mean squared recovery error at one graph size."""

    n: int
    m: int
    trials: int
    mse: dict
    stderr: dict
    failures: int


def _map(fn, items, threads: int):
    if threads <= 1:
        return [fn(item) for item in items]
    ctx = multiprocessing.get_context("fork")
    with ctx.Pool(threads) as pool:
        return pool.map(fn, items, chunksize=1)


def _binomial_point(method: str, n: int, signal: float, rejected: int, trials: int) -> PowerCurvePoint:
    power = rejected / trials
    stderr = float(np.sqrt(power * (1.0 - power) / trials))
    return PowerCurvePoint(
        method=method, n=n, k_or_lambda=signal, power=power, stderr=stderr, trials=trials
    )


def _both_nulls(P, d, mc_iters, s):
    null_omni = monte_carlo_null(P, d, OMNI_FROBENIUS, mc_iters, s.derive("null-omni"))
    null_proc = monte_carlo_null(P, d, PROCRUSTES_FROBENIUS, mc_iters, s.derive("null-proc"))
    return null_omni, null_proc


def _power_k_trial(args):
    dist, n, k, d, alpha, mc_iters, seed, trial = args
    s = seed.derive("power-k", n, k, trial)
    X = sample_latents(dist, n, s.derive("x"))
    Y = X.copy()
    if k > 0:
        fresh = sample_latents(dist, n, s.derive("z"))
        idx = s.derive("idx").generator().choice(n, size=k, replace=False)
        Y[idx] = fresh[idx]
    P_x = probability_matrix(X)
    A1 = sample_graph(P_x, s.derive("a1"))
    A2 = sample_graph(probability_matrix(Y), s.derive("a2"))
    null_omni, null_proc = _both_nulls(P_x, d, mc_iters, s)
    rej_omni = two_sample_test(A1, A2, d, OMNI_FROBENIUS, null_omni, alpha).reject
    rej_proc = two_sample_test(A1, A2, d, PROCRUSTES_FROBENIUS, null_proc, alpha).reject
    return rej_omni, rej_proc


def power_sim_k(
    n_grid,
    k: int,
    *,
    d: int = 3,
    alpha: float = 0.05,
    trials: int = 1000,
    mc_iters: int = 500,
    dist: LatentDistribution = DEFAULT_DIST,
    seed: Seed,
    threads: int = 1,
) -> list[PowerCurvePoint]:
    """Power of both two-sample tests when k latent positions are replaced.

    Per trial: draw latent rows, redraw a uniformly random size-k subset to
    form the second graph's rows, sample one graph from each, and test at
    level alpha against a known-P Monte-Carlo null (computed from the first
    graph's true probability matrix).  k = 0 exercises the null.
    """
    n_grid = _check_grid(n_grid, "n grid")
    if k < 0 or any(k >= n for n in n_grid):
        raise ConfigError(f"need 0 <= k < n for every n in the grid, got k={k}")
    _check_sim_params(alpha, trials, mc_iters)
    points = []
    for n in n_grid:
        args = [(dist, n, k, d, alpha, mc_iters, seed, t) for t in range(trials)]
        flags = _map(_power_k_trial, args, threads)
        rej_omni = sum(f[0] for f in flags)
        rej_proc = sum(f[1] for f in flags)
        points.append(_binomial_point(OMNI_FROBENIUS, n, float(k), rej_omni, trials))
        points.append(_binomial_point(PROCRUSTES_FROBENIUS, n, float(k), rej_proc, trials))
    return points


def _power_drift_trial(args):
    n, lambdas, d, alpha, mc_iters, seed, trial = args
    s = seed.derive("power-drift", n, trial)
    X = sample_latents(Dirichlet((1.0, 1.0, 1.0)), n, s.derive("x"))
    X[0] = DRIFT_START
    P_x = probability_matrix(X)
    A1 = sample_graph(P_x, s.derive("a1"))
    null_omni, null_proc = _both_nulls(P_x, d, mc_iters, s)
    out = []
    for j, lam in enumerate(lambdas):
        Y = X.copy()
        Y[0] = (1.0 - lam) * DRIFT_START + lam * DRIFT_TARGET
        A2 = sample_graph(probability_matrix(Y), s.derive("a2", j))
        rej_omni = two_sample_test(A1, A2, d, OMNI_FROBENIUS, null_omni, alpha).reject
        rej_proc = two_sample_test(A1, A2, d, PROCRUSTES_FROBENIUS, null_proc, alpha).reject
        out.append((rej_omni, rej_proc))
    return out


def power_sim_drift(
    n_grid,
    lambda_grid,
    *,
    d: int = 3,
    alpha: float = 0.05,
    trials: int = 500,
    mc_iters: int = 500,
    seed: Seed,
    threads: int = 1,
) -> list[PowerCurvePoint]:
    """Power of both tests as one designated vertex drifts between corners.

    The designated vertex starts at (0.8, 0.1, 0.1); the second graph moves
    it a fraction lambda of the way to (0.1, 0.1, 0.8) while all other rows
    are shared.  Within a trial the first graph and the null sample depend
    only on the shared rows, so they are reused across the lambda grid.
    """
    n_grid = _check_grid(n_grid, "n grid")
    lambdas = [float(l) for l in lambda_grid]
    if not lambdas or any(not 0.0 <= l <= 1.0 for l in lambdas):
        raise ConfigError(f"lambda grid must be nonempty within [0, 1], got {lambda_grid}")
    _check_sim_params(alpha, trials, mc_iters)
    points = []
    for n in n_grid:
        args = [(n, lambdas, d, alpha, mc_iters, seed, t) for t in range(trials)]
        flags = _map(_power_drift_trial, args, threads)
        for j, lam in enumerate(lambdas):
            rej_omni = sum(f[j][0] for f in flags)
            rej_proc = sum(f[j][1] for f in flags)
            points.append(_binomial_point(OMNI_FROBENIUS, n, lam, rej_omni, trials))
            points.append(_binomial_point(PROCRUSTES_FROBENIUS, n, lam, rej_proc, trials))
    return points


def _recovery_mse(estimate: np.ndarray, truth: np.ndarray) -> float:
    """Mean squared recovery error after the optimal orthogonal alignment."""
    res = procrustes(truth, estimate).residual
    return res * res / truth.shape[0]


def _mse_trial(args):
    dist, n, m, d, seed, trial = args
    s = seed.derive("mse", n, trial)
    X = sample_latents(dist, n, s.derive("x"))
    P = probability_matrix(X)
    graphs = [sample_graph(P, s.derive("graph", g)) for g in range(m)]
    mats = [g.A for g in graphs]
    try:
        # Estimator embeddings keep the d largest-magnitude eigenvalues: at
        # these sizes a single graph's most negative eigenvalue can rival its
        # d-th positive one, and the separate-embedding estimators must feel
        # that, while the joint matrix and the mean graph (larger spectral
        # gaps) are unaffected.
        first = spectral_embed(mats[0], d, magnitude_mode=True).Y
        others = [spectral_embed(A, d, magnitude_mode=True).Y for A in mats[1:]]
        joint = spectral_embed(build_omnibus(graphs).M, d, magnitude_mode=True).Y
        abar = spectral_embed(sum(mats) / m, d, magnitude_mode=True).Y
    except NumericalError:
        return None
    blocks = joint.reshape(m, n, d)
    aligned = [first] + [Yh @ procrustes(first, Yh).W for Yh in others]
    procbar = sum(aligned) / len(aligned)
    return {
        EST_ASE1: _recovery_mse(first, X),
        EST_ABAR: _recovery_mse(abar, X),
        EST_OMNI: _recovery_mse(blocks[0], X),
        EST_OMNIBAR: _recovery_mse(blocks.mean(axis=0), X),
        EST_PROCBAR: _recovery_mse(procbar, X),
    }


def mse_sim(
    n_grid,
    *,
    m: int = 2,
    trials: int = 50,
    d: int = 3,
    dist: LatentDistribution = DEFAULT_DIST,
    seed: Seed,
    threads: int = 1,
) -> list[MseReport]:
    """Latent-position recovery error of five estimators per graph size.

    Per trial: draw latent rows, sample m graphs, and score each estimator
    by its squared Frobenius error to the truth after orthogonal alignment,
    divided by n.  All estimator embeddings order eigenvalues by magnitude.
    Trials whose embedding fails are excluded and counted.
    """
    n_grid = _check_grid(n_grid, "n grid")
    if m < 2:
        raise ConfigError(f"need m >= 2 graphs, got {m}")
    if trials < 2:
        raise ConfigError(f"need trials >= 2, got {trials}")
    reports = []
    for n in n_grid:
        args = [(dist, n, m, d, seed, t) for t in range(trials)]
        rows = _map(_mse_trial, args, threads)
        ok = [r for r in rows if r is not None]
        failures = len(rows) - len(ok)
        if len(ok) < 2:
            raise ConfigError(f"only {len(ok)} usable trials at n={n}")
        mse = {}
        stderr = {}
        for est in ESTIMATORS:
            vals = np.array([r[est] for r in ok])
            mse[est] = float(vals.mean())
            stderr[est] = float(vals.std(ddof=1) / np.sqrt(vals.size))
        reports.append(
            MseReport(n=n, m=m, trials=len(ok), mse=mse, stderr=stderr, failures=failures)
        )
    return reports


def _check_grid(grid, what: str) -> list[int]:
    values = [int(v) for v in grid]
    if not values or any(v < 1 for v in values):
        raise ConfigError(f"{what} must be a nonempty list of positive ints, got {grid}")
    return values


def _check_sim_params(alpha: float, trials: int, mc_iters: int) -> None:
    if not 0.0 < alpha < 1.0:
        raise ConfigError(f"alpha must be in (0, 1), got {alpha}")
    if trials < 1:
        raise ConfigError(f"need trials >= 1, got {trials}")
    if mc_iters < 1:
        raise ConfigError(f"need mc_iters >= 1, got {mc_iters}")
