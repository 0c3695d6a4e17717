"""Smoke-scale checks of the simulation harnesses; statistical behavior at
full trial counts is exercised by the acceptance suite."""

import numpy as np
import pytest

from omnigraph import ConfigError, ESTIMATORS, Seed, mse_sim, power_sim_drift, power_sim_k
from omnigraph.sims import _recovery_mse

SEED = Seed(113)


def test_recovery_mse_zero_for_truth():
    X = Seed(1).generator().normal(size=(30, 3))
    assert _recovery_mse(X.copy(), X) < 1e-25


def test_recovery_mse_rotation_invariant():
    rng = Seed(2).generator()
    X = rng.normal(size=(30, 3))
    Q, _ = np.linalg.qr(rng.normal(size=(3, 3)))
    assert _recovery_mse(X @ Q, X) < 1e-25


def test_mse_sim_smoke():
    reports = mse_sim([40], trials=3, seed=SEED.derive("mse"))
    (rep,) = reports
    assert rep.n == 40 and rep.m == 2 and rep.trials == 3 and rep.failures == 0
    for est in ESTIMATORS:
        assert rep.mse[est] > 0
        assert rep.stderr[est] >= 0


def test_mse_sim_deterministic():
    a = mse_sim([30], trials=3, seed=SEED.derive("det"))
    b = mse_sim([30], trials=3, seed=SEED.derive("det"))
    assert a[0].mse == b[0].mse


def test_power_sim_k_smoke():
    points = power_sim_k([30], 2, trials=4, mc_iters=10, seed=SEED.derive("pk"))
    assert len(points) == 2
    for p in points:
        assert p.n == 30 and p.k_or_lambda == 2.0 and p.trials == 4
        assert 0.0 <= p.power <= 1.0
        assert p.stderr == pytest.approx(np.sqrt(p.power * (1 - p.power) / p.trials))


def test_power_sim_drift_smoke():
    points = power_sim_drift([30], [0.0, 1.0], trials=3, mc_iters=10, seed=SEED.derive("pd"))
    assert len(points) == 4
    assert {p.k_or_lambda for p in points} == {0.0, 1.0}


def test_config_validation():
    with pytest.raises(ConfigError):
        power_sim_k([30], 30, trials=2, mc_iters=5, seed=SEED)  # k >= n
    with pytest.raises(ConfigError):
        power_sim_k([], 1, trials=2, mc_iters=5, seed=SEED)
    with pytest.raises(ConfigError):
        power_sim_drift([30], [1.5], trials=2, mc_iters=5, seed=SEED)
    with pytest.raises(ConfigError):
        power_sim_drift([30], [0.5], trials=2, mc_iters=5, seed=SEED, alpha=1.5)
    with pytest.raises(ConfigError):
        mse_sim([30], trials=1, seed=SEED)
