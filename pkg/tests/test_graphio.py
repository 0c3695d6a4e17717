import numpy as np
import pytest

from omnigraph import (
    DataError,
    Dirichlet,
    Graph,
    Seed,
    probability_matrix,
    read_embedding,
    read_graph,
    sample_graph,
    sample_latents,
    threshold_binarize,
    write_embedding,
    write_graph,
)
from omnigraph.graphio import fmt_float, read_matrix_csv, write_matrix_csv, write_table

SEED = Seed(97)


class TestEdgelist:
    def test_path_graph(self, tmp_path):
        p = tmp_path / "g.edges"
        p.write_text("0 1\n1 2\n")
        G = read_graph(p, "edgelist")
        expected = np.array([[0, 1, 0], [1, 0, 1], [0, 1, 0]], dtype=float)
        assert np.array_equal(G.A, expected)
        assert not G.weighted

    def test_weights_parsed(self, tmp_path):
        p = tmp_path / "g.edges"
        p.write_text("0 1 0.5\n1 2 2.0\n")
        G = read_graph(p, "edgelist")
        assert G.weighted
        assert G.A[0, 1] == 0.5 and G.A[1, 2] == 2.0

    def test_self_loop_rejected_with_line(self, tmp_path):
        p = tmp_path / "g.edges"
        p.write_text("0 1\n0 0\n")
        with pytest.raises(DataError, match=":2"):
            read_graph(p, "edgelist")

    def test_duplicate_edge_rejected(self, tmp_path):
        p = tmp_path / "g.edges"
        p.write_text("0 1\n1 0\n")
        with pytest.raises(DataError, match="duplicate"):
            read_graph(p, "edgelist")

    def test_negative_index_rejected(self, tmp_path):
        p = tmp_path / "g.edges"
        p.write_text("-1 2\n")
        with pytest.raises(DataError, match="negative"):
            read_graph(p, "edgelist")

    def test_parse_error_names_line(self, tmp_path):
        p = tmp_path / "g.edges"
        p.write_text("0 1\nfoo bar\n")
        with pytest.raises(DataError, match=":2"):
            read_graph(p, "edgelist")

    def test_missing_file(self, tmp_path):
        with pytest.raises(DataError):
            read_graph(tmp_path / "absent.edges", "edgelist")


class TestDenseCsv:
    def test_zero_matrix(self, tmp_path):
        p = tmp_path / "g.csv"
        p.write_text("0,0\n0,0\n")
        G = read_graph(p, "dense_csv")
        assert not G.A.any()

    def test_asymmetry_beyond_tolerance_rejected(self, tmp_path):
        p = tmp_path / "g.csv"
        p.write_text("0,1\n0.5,0\n")
        with pytest.raises(DataError, match="asymmetric"):
            read_graph(p, "dense_csv")

    def test_tiny_asymmetry_symmetrized_and_diagonal_zeroed(self, tmp_path):
        p = tmp_path / "g.csv"
        p.write_text("0.3,0.5\n0.5000000001,0\n")
        G = read_graph(p, "dense_csv")
        assert G.A[0, 1] == G.A[1, 0]
        assert G.A[0, 0] == 0.0


class TestRoundTrips:
    @pytest.mark.parametrize("fmt", ["edgelist", "dense_csv"])
    def test_graph_round_trip(self, tmp_path, fmt):
        X = sample_latents(Dirichlet((1.0, 1.0, 1.0)), 25, SEED.derive(fmt))
        G = sample_graph(probability_matrix(X), SEED.derive(fmt, "g"))
        p = tmp_path / "g.out"
        write_graph(G, p, fmt)
        back = read_graph(p, fmt)
        assert np.array_equal(back.A, G.A)

    def test_weighted_dense_round_trip(self, tmp_path):
        A = np.array([[0.0, 0.25], [0.25, 0.0]])
        G = Graph(A, weighted=True)
        p = tmp_path / "w.csv"
        write_graph(G, p, "dense_csv")
        assert np.array_equal(read_graph(p, "dense_csv").A, A)

    def test_embedding_round_trip_bit_identical(self, tmp_path):
        rng = Seed(5).generator()
        Y = rng.normal(size=(20, 3)) * np.pi
        p = tmp_path / "emb.csv"
        write_embedding(Y, p)
        assert np.array_equal(read_embedding(p), Y)

    def test_fmt_float_round_trips_extremes(self):
        for x in (np.pi, 1e-308, 1.7e308, 1 / 3, -0.0):
            assert float(fmt_float(x)) == float(x)

    def test_matrix_csv_round_trip(self, tmp_path):
        M = Seed(6).generator().normal(size=(4, 4))
        p = tmp_path / "m.csv"
        write_matrix_csv(M, p, [f"g{i}" for i in range(4)])
        assert np.array_equal(read_matrix_csv(p), M)


class TestThreshold:
    def test_zero_weights_give_empty(self):
        G = Graph(np.zeros((3, 3)), weighted=True)
        assert not threshold_binarize(G).A.any()

    def test_default_keeps_all_nonzero(self):
        A = np.array([[0.0, 0.5, 2.0], [0.5, 0.0, 0.0], [2.0, 0.0, 0.0]])
        out = threshold_binarize(Graph(A, weighted=True))
        assert np.array_equal(out.A, (A > 0).astype(float))
        assert not out.weighted

    def test_higher_tau_drops_weak_edges(self):
        A = np.array([[0.0, 0.5, 2.0], [0.5, 0.0, 0.0], [2.0, 0.0, 0.0]])
        out = threshold_binarize(Graph(A, weighted=True), tau=1.0)
        assert out.A[0, 2] == 1.0 and out.A[0, 1] == 0.0


def test_write_table_mixed_types(tmp_path):
    rows = [{"name": "a", "n": 3, "value": 1 / 3}]
    p = tmp_path / "t.csv"
    write_table(rows, p, ["name", "n", "value"])
    text = p.read_text().splitlines()
    assert text[0] == "name,n,value"
    assert text[1].startswith("a,3,0.333333333")
