"""Latent-position distributions and dot-product graph sampling.

A latent distribution supplies rows of a latent-position matrix ``X``; the
edge-probability matrix is ``P = X Xᵀ`` and graphs are sampled as independent
Bernoulli draws on the upper triangle, mirrored, with a zero diagonal.
Support vectors must have pairwise dot products in [0, 1]; values within
``DOT_TOL`` of the boundary are clamped, anything beyond is an error.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

import numpy as np

from .errors import ConfigError, DataError
from .seeds import Seed

# Clamp tolerance for dot products that leave [0, 1] by floating-point noise.
DOT_TOL = 1e-12


def _check_support_dots(vectors: np.ndarray, what: str) -> None:
    dots = vectors @ vectors.T
    low, high = dots.min(), dots.max()
    if low < -DOT_TOL or high > 1.0 + DOT_TOL:
        raise ConfigError(
            f"{what}: pairwise dot products must lie in [0, 1], "
            f"found range [{low:.6g}, {high:.6g}]"
        )


@dataclass(frozen=True)
class Dirichlet:
    """Rows drawn from a Dirichlet; simplex rows satisfy the dot-product
    constraint automatically."""

    alpha: tuple

    def __post_init__(self):
        alpha = tuple(float(a) for a in self.alpha)
        object.__setattr__(self, "alpha", alpha)
        if len(alpha) < 1 or any(a <= 0 for a in alpha):
            raise ConfigError(f"Dirichlet alpha must be positive, got {self.alpha}")

    @property
    def dim(self) -> int:
        return len(self.alpha)

    def sample(self, n: int, rng: np.random.Generator) -> np.ndarray:
        return rng.dirichlet(self.alpha, size=n)

    def second_moment(self) -> np.ndarray:
        a = np.asarray(self.alpha)
        a0 = a.sum()
        delta = np.outer(a, a) / (a0 * (a0 + 1.0))
        delta[np.diag_indices_from(delta)] = a * (a + 1.0) / (a0 * (a0 + 1.0))
        return delta


@dataclass(frozen=True)
class DiscreteMixture:
    """Rows drawn from a finite set of atoms with given weights."""

    atoms: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        atoms = np.array(self.atoms, dtype=float)
        weights = np.array(self.weights, dtype=float)
        if atoms.ndim != 2 or atoms.shape[0] < 1:
            raise ConfigError("atoms must be a nonempty 2-D array (one atom per row)")
        if weights.shape != (atoms.shape[0],):
            raise ConfigError(
                f"need one weight per atom, got {weights.shape} for {atoms.shape[0]} atoms"
            )
        if (weights < 0).any() or abs(weights.sum() - 1.0) > 1e-12:
            raise ConfigError("weights must be nonnegative and sum to 1 within 1e-12")
        _check_support_dots(atoms, "DiscreteMixture atoms")
        atoms.flags.writeable = False
        weights.flags.writeable = False
        object.__setattr__(self, "atoms", atoms)
        object.__setattr__(self, "weights", weights)

    @property
    def dim(self) -> int:
        return self.atoms.shape[1]

    def sample(self, n: int, rng: np.random.Generator) -> np.ndarray:
        idx = rng.choice(self.atoms.shape[0], size=n, p=self.weights)
        return self.atoms[idx].copy()

    def second_moment(self) -> np.ndarray:
        return np.einsum("k,ki,kj->ij", self.weights, self.atoms, self.atoms)


@dataclass(frozen=True)
class PointSet:
    """A fixed latent-position matrix; sampling just returns the rows."""

    rows: np.ndarray

    def __post_init__(self):
        rows = np.array(self.rows, dtype=float)
        if rows.ndim != 2 or rows.shape[0] < 1:
            raise ConfigError("rows must be a nonempty 2-D array")
        _check_support_dots(rows, "PointSet rows")
        rows.flags.writeable = False
        object.__setattr__(self, "rows", rows)

    @property
    def dim(self) -> int:
        return self.rows.shape[1]

    def sample(self, n: int, rng: np.random.Generator) -> np.ndarray:
        if n != self.rows.shape[0]:
            raise ConfigError(
                f"PointSet holds {self.rows.shape[0]} rows; cannot sample n={n}"
            )
        return self.rows.copy()


LatentDistribution = Union[Dirichlet, DiscreteMixture, PointSet]


@dataclass(frozen=True)
class Graph:
    """Symmetric hollow adjacency matrix, binary unless ``weighted``."""

    A: np.ndarray
    weighted: bool = False

    def __post_init__(self):
        A = np.array(self.A, dtype=float)
        if A.ndim != 2 or A.shape[0] != A.shape[1]:
            raise DataError(f"adjacency must be square, got shape {A.shape}")
        if not np.array_equal(A, A.T):
            raise DataError("adjacency must be exactly symmetric")
        if np.diagonal(A).any():
            raise DataError("adjacency must be hollow (zero diagonal)")
        if not self.weighted and not np.isin(A, (0.0, 1.0)).all():
            raise DataError("unweighted adjacency entries must be 0 or 1")
        A.flags.writeable = False
        object.__setattr__(self, "A", A)

    @property
    def n(self) -> int:
        return self.A.shape[0]


def sample_latents(dist: LatentDistribution, n: int, seed: Seed) -> np.ndarray:
    """Draw an n-by-d latent-position matrix with rows i.i.d. from ``dist``."""
    if n < 1:
        raise ConfigError(f"need n >= 1, got {n}")
    return dist.sample(n, seed.generator())


def probability_matrix(X: np.ndarray) -> np.ndarray:
    """Edge-probability matrix ``P = X Xᵀ``, validated and clamped to [0, 1].

    Raises
    ------
    DataError
        If some pairwise dot product leaves [0, 1] by more than ``DOT_TOL``;
        the message names the offending pair.
    """
    X = np.asarray(X, dtype=float)
    if X.ndim != 2:
        raise DataError(f"latent positions must be 2-D, got shape {X.shape}")
    P = X @ X.T
    P = (P + P.T) / 2.0
    bad = (P < -DOT_TOL) | (P > 1.0 + DOT_TOL)
    if bad.any():
        i, j = np.argwhere(bad)[0]
        raise DataError(
            f"dot product out of [0, 1] at rows ({i}, {j}): {P[i, j]:.6g}"
        )
    return np.clip(P, 0.0, 1.0)


def sample_graph(P: np.ndarray, seed: Seed) -> Graph:
    """One Bernoulli(P) graph: independent upper-triangle coin flips, mirrored.

    Uniforms are consumed in fixed row-major upper-triangle order, so a given
    seed yields the same graph regardless of caller context.
    """
    P = np.asarray(P, dtype=float)
    n = P.shape[0]
    if P.ndim != 2 or P.shape != (n, n):
        raise DataError(f"P must be square, got shape {P.shape}")
    if (P < 0).any() or (P > 1).any():
        raise DataError("P entries must lie in [0, 1]")
    rng = seed.generator()
    iu = np.triu_indices(n, k=1)
    u = rng.random(iu[0].size)
    A = np.zeros((n, n))
    A[iu] = (u < P[iu]).astype(float)
    A = A + A.T
    return Graph(A)


def sample_jrdpg(X: np.ndarray, m: int, seed: Seed) -> list[Graph]:
    """m conditionally independent graphs sharing ``P = X Xᵀ``.

    Graph g uses the child stream ``seed.derive("graph", g)``.
    """
    if m < 1:
        raise ConfigError(f"need m >= 1, got {m}")
    P = probability_matrix(X)
    return [sample_graph(P, seed.derive("graph", g)) for g in range(m)]


def second_moment(dist: LatentDistribution) -> np.ndarray:
    """Exact second-moment matrix of one latent row.

    Closed forms exist for Dirichlet and DiscreteMixture; PointSet has no
    canonical row distribution and is rejected.
    """
    if isinstance(dist, (Dirichlet, DiscreteMixture)):
        return dist.second_moment()
    raise ConfigError(f"second_moment undefined for {type(dist).__name__}")
