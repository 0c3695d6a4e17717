"""Eigendecomposition-based embeddings of graphs and graph collections.

The single-graph embedding keeps the d algebraically largest eigenpairs of
the adjacency matrix and scales eigenvectors by sqrt(eigenvalue).  The joint
embedding stacks m same-vertex graphs into an mn-by-mn block matrix (graphs
on the diagonal, pairwise averages off the diagonal) and embeds that; each
consecutive n-row block then estimates one graph's latent positions in a
single shared coordinate system, so blocks are directly comparable without
alignment.  A centered variant subtracts the mean graph first; that matrix is
indefinite, so its embedding orders eigenvalues by magnitude and scales by
sqrt(|eigenvalue|).

Eigenvector signs are fixed deterministically: within each eigenvector the
entry of largest absolute value (first such index on ties) is made positive.
Dense LAPACK solvers are used throughout; intended scale is mn of a few
thousand up to roughly twenty thousand.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence, Union

import numpy as np
import scipy.linalg

from .errors import ConfigError, DataError, NumericalError
from .rdpg import Graph

# Embedding provenance tags.
ASE = "ase"
OMNI = "omni"
OMNI_BLOCK = "omni-block"
ABAR = "abar"
OMNIBAR = "omnibar"
CMDS = "cmds"
SPECTRAL = "spectral"


@dataclass(frozen=True)
class Embedding:
    """k-by-d embedded positions with the retained eigenvalues.

    For provenance ``"omni"`` the rows hold m stacked n-row blocks, one per
    graph: row ``n*s + i`` is vertex i of graph s. ``block(s)`` slices out
    one graph's rows (0-based s).
    """

    Y: np.ndarray
    eigenvalues: np.ndarray
    provenance: str
    graph_index: Optional[int] = None
    m: Optional[int] = None
    n: Optional[int] = None

    def __post_init__(self):
        Y = np.asarray(self.Y, dtype=float)
        vals = np.asarray(self.eigenvalues, dtype=float)
        Y.flags.writeable = False
        vals.flags.writeable = False
        object.__setattr__(self, "Y", Y)
        object.__setattr__(self, "eigenvalues", vals)

    @property
    def d(self) -> int:
        return self.Y.shape[1]

    def block(self, s: int) -> np.ndarray:
        """Rows of graph s (0-based) of a joint embedding."""
        if self.provenance != OMNI:
            raise ConfigError(f"block() needs an omnibus embedding, got {self.provenance!r}")
        if not 0 <= s < self.m:
            raise ConfigError(f"block index {s} out of range for m={self.m}")
        return self.Y[s * self.n : (s + 1) * self.n]

    def blocks(self) -> np.ndarray:
        """All m blocks as an (m, n, d) array."""
        if self.provenance != OMNI:
            raise ConfigError(f"blocks() needs an omnibus embedding, got {self.provenance!r}")
        return self.Y.reshape(self.m, self.n, self.d)


@dataclass(frozen=True)
class OmnibusMatrix:
    """mn-by-mn joint matrix: graphs on the diagonal blocks, pairwise
    averages off the diagonal; optionally built from mean-centered graphs."""

    M: np.ndarray
    m: int
    n: int
    centered: bool

    def __post_init__(self):
        M = np.asarray(self.M, dtype=float)
        M.flags.writeable = False
        object.__setattr__(self, "M", M)


@dataclass(frozen=True)
class AlignmentResult:
    """Orthogonal alignment ``W`` minimizing ||X - Y W||_F and the residual."""

    W: np.ndarray
    residual: float


def _fix_signs(vecs: np.ndarray) -> np.ndarray:
    """Flip eigenvector columns so each one's largest-|entry| is positive."""
    vecs = vecs.copy()
    idx = np.argmax(np.abs(vecs), axis=0)
    flip = vecs[idx, np.arange(vecs.shape[1])] < 0
    vecs[:, flip] *= -1.0
    return vecs


def _sym_matrix(M) -> np.ndarray:
    M = np.asarray(M, dtype=float)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise DataError(f"matrix must be square, got shape {M.shape}")
    if not np.allclose(M, M.T, atol=1e-10, rtol=0.0):
        raise DataError("matrix must be symmetric")
    if not np.array_equal(M, M.T):
        M = (M + M.T) / 2.0
    return M


def _top_eigpairs(M: np.ndarray, d: int, magnitude_mode: bool):
    """d retained eigenpairs, ordered nonincreasing by the selection key
    (algebraic value, or |value| in magnitude mode)."""
    N = M.shape[0]
    try:
        if not magnitude_mode:
            vals, vecs = scipy.linalg.eigh(
                M, subset_by_index=[N - d, N - 1], driver="evr", check_finite=False
            )
            order = np.argsort(-vals, kind="stable")
        elif 2 * d >= N:
            vals, vecs = scipy.linalg.eigh(M, check_finite=False)
            order = np.lexsort((-vals, -np.abs(vals)))[:d]
        else:
            hi_vals, hi_vecs = scipy.linalg.eigh(
                M, subset_by_index=[N - d, N - 1], driver="evr", check_finite=False
            )
            lo_vals, lo_vecs = scipy.linalg.eigh(
                M, subset_by_index=[0, d - 1], driver="evr", check_finite=False
            )
            vals = np.concatenate([hi_vals, lo_vals])
            vecs = np.concatenate([hi_vecs, lo_vecs], axis=1)
            order = np.lexsort((-vals, -np.abs(vals)))[:d]
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"eigendecomposition failed: {exc}") from exc
    vals = vals[order]
    vecs = _fix_signs(vecs[:, order])
    return vals, vecs


def spectral_embed(M, d: int, magnitude_mode: bool = False) -> Embedding:
    """Embed a symmetric matrix by its top-d eigenpairs.

    Default mode keeps the d algebraically largest eigenvalues, all of which
    must be positive, and returns ``U diag(eigenvalues)^{1/2}``.  Magnitude
    mode keeps the d largest in absolute value (needed for indefinite
    matrices such as centered joint matrices) and scales by sqrt(|value|).

    Raises
    ------
    NumericalError
        In default mode, when the d-th largest eigenvalue is not positive.
    ConfigError
        If d exceeds the matrix order or is not positive.
    """
    M = _sym_matrix(M)
    N = M.shape[0]
    if not 1 <= d <= N:
        raise ConfigError(f"embedding dimension d={d} must lie in [1, {N}]")
    vals, vecs = _top_eigpairs(M, d, magnitude_mode)
    if not magnitude_mode and vals[-1] <= 0:
        raise NumericalError(
            f"eigenvalue {d} is {vals[-1]:.6g} <= 0; "
            "cannot embed with algebraically-largest eigenvalues"
        )
    Y = vecs * np.sqrt(np.abs(vals))
    return Embedding(Y=Y, eigenvalues=vals, provenance=SPECTRAL)


def ase(G: Graph, d: int, graph_index: Optional[int] = None) -> Embedding:
    """Adjacency spectral embedding of one graph."""
    E = spectral_embed(G.A, d, magnitude_mode=False)
    return Embedding(
        Y=E.Y, eigenvalues=E.eigenvalues, provenance=ASE, graph_index=graph_index
    )


def _adjacency_list(graphs: Sequence[Union[Graph, np.ndarray]]) -> list[np.ndarray]:
    mats = []
    for g in graphs:
        A = g.A if isinstance(g, Graph) else _sym_matrix(g)
        mats.append(np.asarray(A, dtype=float))
    if not mats:
        raise ConfigError("need at least one graph")
    n = mats[0].shape[0]
    for k, A in enumerate(mats):
        if A.shape != (n, n):
            raise DataError(f"graph {k} has shape {A.shape}, expected ({n}, {n})")
    return mats


def build_omnibus(graphs: Sequence[Union[Graph, np.ndarray]], centered: bool = False) -> OmnibusMatrix:
    """Assemble the mn-by-mn joint matrix of m same-vertex graphs.

    Diagonal block (s, s) is graph s; off-diagonal block (k, l) is the
    average of graphs k and l.  With ``centered=True`` each graph is first
    replaced by its deviation from the mean graph.
    """
    mats = _adjacency_list(graphs)
    m, n = len(mats), mats[0].shape[0]
    if centered:
        mean = sum(mats) / m
        mats = [A - mean for A in mats]
    M = np.empty((m * n, m * n))
    for k in range(m):
        for l in range(m):
            if k == l:
                block = mats[k]
            else:
                block = 0.5 * (mats[k] + mats[l])
            M[k * n : (k + 1) * n, l * n : (l + 1) * n] = block
    return OmnibusMatrix(M=M, m=m, n=n, centered=centered)


def omni_embed(graphs: Sequence[Union[Graph, np.ndarray]], d: int, centered: bool = False) -> Embedding:
    """Joint embedding of m graphs: embed the omnibus matrix at dimension d.

    The uncentered matrix is embedded with algebraically-largest eigenvalues;
    the centered one is indefinite and uses magnitude ordering.
    """
    omni = build_omnibus(graphs, centered=centered)
    E = spectral_embed(omni.M, d, magnitude_mode=centered)
    return Embedding(
        Y=E.Y, eigenvalues=E.eigenvalues, provenance=OMNI, m=omni.m, n=omni.n
    )


def abar_embed(graphs: Sequence[Union[Graph, np.ndarray]], d: int) -> Embedding:
    """Embedding of the mean of the adjacency matrices."""
    mats = _adjacency_list(graphs)
    mean = sum(mats) / len(mats)
    E = spectral_embed(mean, d, magnitude_mode=False)
    return Embedding(Y=E.Y, eigenvalues=E.eigenvalues, provenance=ABAR)


def omnibar(E: Embedding) -> Embedding:
    """Average the m blocks of a joint embedding into one n-by-d estimate."""
    if E.provenance != OMNI:
        raise ConfigError(f"omnibar needs an omnibus embedding, got {E.provenance!r}")
    Y = E.blocks().mean(axis=0)
    return Embedding(Y=Y, eigenvalues=E.eigenvalues, provenance=OMNIBAR, n=E.n)


def procrustes(X: np.ndarray, Y: np.ndarray) -> AlignmentResult:
    """Orthogonal W minimizing ||X - Y W||_F (reflections allowed).

    W comes from the singular decomposition of YᵀX = U S Vᵀ as W = U Vᵀ.
    """
    X = np.asarray(X, dtype=float)
    Y = np.asarray(Y, dtype=float)
    if X.shape != Y.shape or X.ndim != 2:
        raise DataError(f"shapes must match, got {X.shape} and {Y.shape}")
    U, _, Vt = np.linalg.svd(Y.T @ X)
    W = U @ Vt
    residual = float(np.linalg.norm(X - Y @ W))
    return AlignmentResult(W=W, residual=residual)
