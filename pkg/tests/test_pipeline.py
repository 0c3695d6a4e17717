import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from sklearn.metrics import adjusted_rand_score

from omnigraph import (
    ConfigError,
    DataError,
    Dirichlet,
    HOTELLING_T2,
    MANOVA_WILKS,
    Seed,
    ase,
    cmds,
    dissimilarity_matrix,
    gmm_cluster,
    omni_embed,
    per_vertex_tests,
    probability_matrix,
    sample_graph,
    sample_latents,
)

SEED = Seed(59)


def jrdpg_graphs(n, m, label, X=None):
    if X is None:
        X = sample_latents(Dirichlet((1.0, 1.0, 1.0)), n, SEED.derive(label, "x"))
    P = probability_matrix(X)
    return [sample_graph(P, SEED.derive(label, g)) for g in range(m)]


class TestDissimilarity:
    def test_identical_graphs_give_zero(self):
        g = jrdpg_graphs(25, 1, "ident")[0]
        E = omni_embed([g, g, g], 2)
        D = dissimilarity_matrix(E)
        assert np.abs(D).max() < 1e-10

    def test_symmetric_zero_diagonal(self):
        E = omni_embed(jrdpg_graphs(30, 4, "sym"), 2)
        D = dissimilarity_matrix(E)
        assert np.array_equal(D, D.T)
        assert np.abs(np.diag(D)).max() == 0.0

    def test_entries_match_direct_norm(self):
        E = omni_embed(jrdpg_graphs(30, 3, "norm"), 2)
        D = dissimilarity_matrix(E)
        direct = np.linalg.norm(E.block(0) - E.block(1))
        assert D[0, 1] == pytest.approx(direct, abs=1e-12)

    def test_triangle_inequality(self):
        E = omni_embed(jrdpg_graphs(30, 5, "tri"), 2)
        D = dissimilarity_matrix(E)
        m = D.shape[0]
        for i in range(m):
            for j in range(m):
                for k in range(m):
                    assert D[i, j] <= D[i, k] + D[k, j] + 1e-12

    def test_requires_omnibus_embedding(self):
        g = jrdpg_graphs(20, 1, "prov")[0]
        with pytest.raises(ConfigError):
            dissimilarity_matrix(ase(g, 2))


class TestCmds:
    def test_collinear_points_recovered(self):
        pts = np.array([[0.0], [1.0], [3.0]])
        D = np.abs(pts - pts.T)
        Y = cmds(D, 1).Y
        D2 = np.abs(Y - Y.T)
        assert np.abs(D2 - D).max() < 1e-10

    def test_zero_matrix_collapses_to_origin(self):
        Y = cmds(np.zeros((4, 4)), 2).Y
        assert np.abs(Y).max() == 0.0

    def test_planar_configuration_roundtrip(self):
        rng = np.random.default_rng(8)
        pts = rng.normal(size=(10, 2))
        D = np.linalg.norm(pts[:, None, :] - pts[None, :, :], axis=2)
        Y = cmds(D, 2).Y
        D2 = np.linalg.norm(Y[:, None, :] - Y[None, :, :], axis=2)
        assert np.abs(D2 - D).max() < 1e-8

    def test_extra_dims_padded_with_zeros(self):
        pts = np.array([[0.0], [1.0], [3.0]])
        D = np.abs(pts - pts.T)
        Y = cmds(D, 3).Y
        assert Y.shape == (3, 3)
        assert np.abs(Y[:, 1:]).max() < 1e-10

    def test_dims_validation(self):
        with pytest.raises(ConfigError):
            cmds(np.zeros((3, 3)), 4)
        with pytest.raises(ConfigError):
            cmds(np.zeros((3, 3)), 0)
        with pytest.raises(DataError):
            cmds(np.array([[0.0, 1.0], [2.0, 0.0]]), 1)


class TestGmm:
    def test_two_separated_clouds(self):
        rng = np.random.default_rng(9)
        pts = np.vstack([rng.normal(size=(40, 2)), rng.normal(size=(40, 2)) + 10.0])
        truth = np.repeat([0, 1], 40)
        res = gmm_cluster(pts, [1, 2, 3], SEED.derive("clouds"))
        assert res.k_selected == 2
        assert adjusted_rand_score(truth, res.labels) == 1.0

    def test_identical_points_select_one(self):
        pts = np.ones((12, 2))
        res = gmm_cluster(pts, [1, 2, 3], SEED.derive("same"))
        assert res.k_selected == 1

    def test_single_cloud_prefers_one_component(self):
        hits = 0
        for t in range(10):
            pts = Seed(1000 + t).generator().normal(size=(200, 2))
            res = gmm_cluster(pts, [1, 2, 3], SEED.derive("one", t))
            hits += res.k_selected == 1
        assert hits >= 9

    def test_k_range_validation(self):
        with pytest.raises(ConfigError):
            gmm_cluster(np.zeros((4, 2)), [1, 5], SEED)
        with pytest.raises(ConfigError):
            gmm_cluster(np.zeros((4, 2)), [], SEED)


class TestPerVertexTests:
    def test_identical_graphs_all_p_one(self):
        g = jrdpg_graphs(20, 1, "pv-ident")[0]
        E = omni_embed([g] * 6, 2)
        labels = [0, 0, 0, 1, 1, 1]
        pvals = per_vertex_tests(E, labels, method=HOTELLING_T2)
        assert np.allclose(pvals, 1.0)

    def test_bonferroni_caps_at_one(self):
        graphs = jrdpg_graphs(15, 8, "pv-bonf")
        E = omni_embed(graphs, 2)
        labels = [0, 1] * 4
        raw = per_vertex_tests(E, labels, method=MANOVA_WILKS, correction="none")
        corrected = per_vertex_tests(E, labels, method=MANOVA_WILKS)
        assert np.allclose(corrected, np.minimum(1.0, 15 * raw))

    def test_planted_vertex_attains_min_p(self):
        n, per_group = 40, 20
        X = sample_latents(Dirichlet((1.0, 1.0, 1.0)), n, SEED.derive("pv-plant", "x"))
        Y = X.copy()
        Y[7] = np.array([0.05, 0.05, 0.9])  # large shift at one vertex
        graphs = [
            sample_graph(probability_matrix(X), SEED.derive("pv-plant", "a", g))
            for g in range(per_group)
        ] + [
            sample_graph(probability_matrix(Y), SEED.derive("pv-plant", "b", g))
            for g in range(per_group)
        ]
        E = omni_embed(graphs, 3)
        labels = [0] * per_group + [1] * per_group
        pvals = per_vertex_tests(E, labels, method=HOTELLING_T2)
        assert pvals[7] < 1.0  # survives the multiple-comparison cap
        assert int(np.argmin(pvals)) == 7

    def test_label_and_method_validation(self):
        graphs = jrdpg_graphs(10, 4, "pv-val")
        E = omni_embed(graphs, 2)
        with pytest.raises(DataError):
            per_vertex_tests(E, [0, 1, 0], method=HOTELLING_T2)
        with pytest.raises(DataError):
            per_vertex_tests(E, [0, 1, 2, 0], method=HOTELLING_T2)
        with pytest.raises(ConfigError):
            per_vertex_tests(E, [0, 1, 0, 1], method="bogus")
        with pytest.raises(DataError):
            per_vertex_tests(E, [0, 0, 0, 0], method=MANOVA_WILKS)
