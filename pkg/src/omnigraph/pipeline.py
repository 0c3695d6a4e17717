"""Multi-graph exploratory pipeline built on the joint embedding.

From one joint embedding of m graphs this module derives (a) an m-by-m
dissimilarity matrix of Frobenius distances between per-graph blocks, (b) a
low-dimensional classical-MDS layout of that matrix, (c) a BIC-selected
Gaussian-mixture clustering of the layout, and (d) per-vertex tests that
compare one vertex's m embedded points across graph groups.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from sklearn.mixture import GaussianMixture

from .errors import ConfigError, DataError
from .embed import CMDS, OMNI, Embedding, _fix_signs
from .hypotest import HOTELLING_T2, MANOVA_WILKS, hotelling_t2, manova_wilks
from .seeds import Seed

BONFERRONI = "bonferroni"
NO_CORRECTION = "none"


def dissimilarity_matrix(E: Embedding) -> np.ndarray:
    """m-by-m matrix of Frobenius distances between embedding blocks."""
    if E.provenance != OMNI:
        raise ConfigError(f"need an omnibus embedding, got {E.provenance!r}")
    blocks = E.blocks()
    m = blocks.shape[0]
    D = np.zeros((m, m))
    for k in range(m):
        for l in range(k + 1, m):
            D[k, l] = D[l, k] = np.linalg.norm(blocks[k] - blocks[l])
    return D


def cmds(D: np.ndarray, dims: int) -> Embedding:
    """Classical multidimensional scaling of a dissimilarity matrix.

    Double-centers the squared dissimilarities and embeds the top ``dims``
    positive eigenpairs; if fewer eigenvalues are positive, the remaining
    coordinates are zero columns.
    """
    D = np.asarray(D, dtype=float)
    m = D.shape[0]
    if D.ndim != 2 or D.shape != (m, m):
        raise DataError(f"dissimilarity matrix must be square, got {D.shape}")
    if not np.allclose(D, D.T, atol=1e-10, rtol=0.0):
        raise DataError("dissimilarity matrix must be symmetric")
    if dims < 1 or dims > m:
        raise ConfigError(f"dims={dims} must lie in [1, {m}]")
    C = np.eye(m) - np.ones((m, m)) / m
    B = -0.5 * C @ (D * D) @ C
    B = (B + B.T) / 2.0
    vals, vecs = np.linalg.eigh(B)
    order = np.argsort(-vals, kind="stable")[:dims]
    vals = vals[order]
    vecs = _fix_signs(vecs[:, order])
    # strictly positive up to relative round-off; near-zero values are rank
    # deficiency, not geometry, and become zero coordinates
    keep = vals > max(vals.max(initial=0.0), 0.0) * 1e-12
    Y = np.zeros((m, dims))
    Y[:, keep] = vecs[:, keep] * np.sqrt(vals[keep])
    return Embedding(Y=Y, eigenvalues=np.where(keep, vals, 0.0), provenance=CMDS)


@dataclass(frozen=True)
class GmmResult:
    """Clustering labels, the BIC-selected component count, and BIC per k."""

    labels: np.ndarray
    k_selected: int
    bic: dict

    def __post_init__(self):
        labels = np.asarray(self.labels, dtype=int)
        labels.flags.writeable = False
        object.__setattr__(self, "labels", labels)


def gmm_cluster(points: np.ndarray, k_range, seed: Seed) -> GmmResult:
    """Full-covariance Gaussian-mixture clustering with BIC model selection.

    Each candidate k is fit by EM (k-means++ initialization, 10 restarts,
    200 iterations, covariance ridge 1e-6); the k minimizing BIC wins, with
    ties going to the smaller k.
    """
    points = np.atleast_2d(np.asarray(points, dtype=float))
    m = points.shape[0]
    k_range = sorted(int(k) for k in k_range)
    if not k_range:
        raise ConfigError("k_range must be nonempty")
    if k_range[0] < 1 or k_range[-1] > m:
        raise ConfigError(f"k_range {k_range} must lie within [1, {m}]")
    rng = seed.generator()
    bic: dict[int, float] = {}
    fits = {}
    for k in k_range:
        gm = GaussianMixture(
            n_components=k,
            covariance_type="full",
            reg_covar=1e-6,
            max_iter=200,
            n_init=10,
            init_params="k-means++",
            random_state=int(rng.integers(2**32)),
        )
        gm.fit(points)
        bic[k] = float(gm.bic(points))
        fits[k] = gm
    k_best = min(k_range, key=lambda k: (bic[k], k))
    labels = fits[k_best].predict(points)
    return GmmResult(labels=labels, k_selected=k_best, bic=bic)


def per_vertex_tests(
    E: Embedding,
    group_labels,
    method: str = MANOVA_WILKS,
    correction: str = BONFERRONI,
) -> np.ndarray:
    """Per-vertex p-values comparing embedded points across graph groups.

    Vertex i contributes its m embedded points (one per block), split by
    ``group_labels``; the chosen test compares the groups.  Bonferroni
    multiplies each p-value by the vertex count, capped at 1.
    """
    if E.provenance != OMNI:
        raise ConfigError(f"need an omnibus embedding, got {E.provenance!r}")
    labels = np.asarray(group_labels)
    if labels.shape != (E.m,):
        raise DataError(f"need one label per graph ({E.m}), got shape {labels.shape}")
    if method not in (HOTELLING_T2, MANOVA_WILKS):
        raise ConfigError(f"unknown per-vertex test method {method!r}")
    if correction not in (BONFERRONI, NO_CORRECTION):
        raise ConfigError(f"unknown correction {correction!r}")
    uniq = np.unique(labels)
    if method == HOTELLING_T2 and uniq.size != 2:
        raise DataError(f"Hotelling T2 needs exactly 2 groups, got {uniq.size}")
    if uniq.size < 2:
        raise DataError("need at least 2 groups")
    blocks = E.blocks()
    n = E.n
    pvals = np.empty(n)
    for i in range(n):
        pts = blocks[:, i, :]
        groups = [pts[labels == u] for u in uniq]
        if method == HOTELLING_T2:
            res = hotelling_t2(groups[0], groups[1])
        else:
            res = manova_wilks(groups)
        pvals[i] = res.p_value
    if correction == BONFERRONI:
        pvals = np.minimum(1.0, n * pvals)
    return pvals
