"""Shared fixtures.

The root seed for acceptance-grade runs is fixed at 1; every consumer
derives labeled child streams from it, so reruns are bit-reproducible.
The session-scoped residual fixtures are expensive (minutes to tens of
minutes) and are only computed when a test that needs them runs.
"""

import numpy as np
import pytest

from omnigraph import DiscreteMixture, Seed, residual_sample

ACCEPT_ROOT = Seed(1)

TWO_ATOM_MIXTURE = DiscreteMixture(
    np.array([[0.8, 0.2], [0.2, 0.8]]), np.array([0.5, 0.5])
)
PIN_ATOM = np.array([0.8, 0.2])


@pytest.fixture(scope="session")
def clt_residuals_m2():
    """Scaled residuals at the pinned vertex: n=1000, m=2, 500 replicates."""
    return residual_sample(
        TWO_ATOM_MIXTURE, PIN_ATOM, n=1000, m=2, vertex=0, graph_index=0,
        replicates=500, d=2, seed=ACCEPT_ROOT.derive("clt-m2"),
    )


@pytest.fixture(scope="session")
def clt_residuals_m1():
    return residual_sample(
        TWO_ATOM_MIXTURE, PIN_ATOM, n=1000, m=1, vertex=0, graph_index=0,
        replicates=500, d=2, seed=ACCEPT_ROOT.derive("clt-m1"),
    )


@pytest.fixture(scope="session")
def clt_residuals_m4():
    return residual_sample(
        TWO_ATOM_MIXTURE, PIN_ATOM, n=1000, m=4, vertex=0, graph_index=0,
        replicates=500, d=2, seed=ACCEPT_ROOT.derive("clt-m4"),
    )
