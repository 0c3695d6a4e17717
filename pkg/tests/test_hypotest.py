import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import stats as spstats

from omnigraph import (
    ConfigError,
    DataError,
    Dirichlet,
    OMNI_FROBENIUS,
    PROCRUSTES_FROBENIUS,
    Seed,
    estimate_probability_matrix,
    frobenius_stat,
    hotelling_t2,
    manova_wilks,
    monte_carlo_null,
    omni_test_stat,
    probability_matrix,
    procrustes_test_stat,
    sample_graph,
    sample_latents,
    two_sample_test,
    wilks_lambda,
)

SEED = Seed(47)


def graph_pair(n, label, same=True):
    X = sample_latents(Dirichlet((1.0, 1.0, 1.0)), n, SEED.derive(label, "x"))
    P = probability_matrix(X)
    A1 = sample_graph(P, SEED.derive(label, 0))
    A2 = sample_graph(P, SEED.derive(label, 1))
    return A1, A2, P


class TestFrobeniusStat:
    def test_identical_is_zero(self):
        X = np.arange(12.0).reshape(4, 3)
        assert frobenius_stat(X, X) == 0.0

    def test_single_row_difference(self):
        X1 = np.zeros((3, 2))
        X2 = np.zeros((3, 2))
        X2[1] = (3.0, 4.0)
        assert frobenius_stat(X1, X2) == 25.0

    def test_shape_mismatch(self):
        with pytest.raises(DataError):
            frobenius_stat(np.zeros((2, 2)), np.zeros((3, 2)))

    @settings(max_examples=30, deadline=None)
    @given(st.integers(min_value=0, max_value=2**32))
    def test_matches_elementwise_oracle(self, root):
        rng = np.random.default_rng(root)
        X1 = rng.normal(size=(6, 3))
        X2 = rng.normal(size=(6, 3))
        oracle = sum(
            (X1[i, j] - X2[i, j]) ** 2 for i in range(6) for j in range(3)
        )
        assert abs(frobenius_stat(X1, X2) - oracle) < 1e-12


class TestGraphStatistics:
    def test_omni_stat_zero_on_equal_graphs(self):
        # blocks coincide in exact arithmetic; eigensolver noise leaves
        # ~1e-15 per entry, i.e. ~1e-29 on the squared statistic
        A1, _, _ = graph_pair(40, "eq")
        assert omni_test_stat(A1, A1, 3) < 1e-20

    def test_proc_stat_near_zero_on_equal_graphs(self):
        A1, _, _ = graph_pair(40, "eqp")
        assert procrustes_test_stat(A1, A1, 3) < 1e-16

    def test_omni_stat_positive_for_independent_graphs(self):
        A1, A2, _ = graph_pair(300, "pos")
        assert omni_test_stat(A1, A2, 3) > 0.0

    def test_proc_stat_bounded_by_unaligned(self):
        A1, A2, _ = graph_pair(80, "bound")
        from omnigraph import ase

        unaligned = frobenius_stat(ase(A1, 3).Y, ase(A2, 3).Y)
        assert procrustes_test_stat(A1, A2, 3) <= unaligned + 1e-12


class TestMonteCarloNull:
    def test_values_nonnegative_sorted(self):
        _, _, P = graph_pair(50, "null")
        null = monte_carlo_null(P, 3, OMNI_FROBENIUS, 30, SEED.derive("mc"))
        assert (null >= 0).all()
        assert np.array_equal(null, np.sort(null))

    def test_nondegenerate_for_flat_p(self):
        P = np.full((40, 40), 0.4)
        null = monte_carlo_null(P, 1, OMNI_FROBENIUS, 30, SEED.derive("flat"))
        assert null.std() > 0

    def test_quantiles_stable_across_runs(self):
        _, _, P = graph_pair(60, "stab")
        a = monte_carlo_null(P, 3, OMNI_FROBENIUS, 500, SEED.derive("qa"))
        b = monte_carlo_null(P, 3, OMNI_FROBENIUS, 500, SEED.derive("qb"))
        qa, qb = np.quantile(a, 0.95), np.quantile(b, 0.95)
        assert abs(qa - qb) / qa < 0.10

    def test_unknown_method_rejected(self):
        with pytest.raises(ConfigError):
            monte_carlo_null(np.eye(4) * 0.0, 1, "bogus", 5, SEED)


class TestTwoSampleTest:
    def test_statistic_below_null_gives_p_near_one(self):
        A1, _, _ = graph_pair(40, "below")
        null = np.linspace(10.0, 20.0, 500)
        r = two_sample_test(A1, A1, 3, OMNI_FROBENIUS, null, 0.05)
        assert r.statistic < 1e-20
        assert r.p_value == 1.0
        assert not r.reject

    def test_statistic_above_all_null_gives_add_one_p(self):
        A1, A2, _ = graph_pair(60, "above")
        stat = omni_test_stat(A1, A2, 3)
        null = np.full(500, stat / 2.0)
        r = two_sample_test(A1, A2, 3, OMNI_FROBENIUS, null, 0.05)
        assert r.p_value == pytest.approx(1.0 / 501.0)
        assert r.reject

    def test_empty_null_rejected(self):
        A1, _, _ = graph_pair(20, "empty")
        with pytest.raises(ConfigError):
            two_sample_test(A1, A1, 2, OMNI_FROBENIUS, np.array([]), 0.05)

    def test_reject_follows_p_and_alpha(self):
        A1, A2, P = graph_pair(60, "rej")
        null = monte_carlo_null(P, 3, PROCRUSTES_FROBENIUS, 50, SEED.derive("rejn"))
        r = two_sample_test(A1, A2, 3, PROCRUSTES_FROBENIUS, null, 0.5)
        assert r.reject == (r.p_value < 0.5)

    def test_estimated_p_mode_produces_valid_matrix(self):
        A1, A2, _ = graph_pair(60, "est")
        Phat = estimate_probability_matrix([A1, A2], 3)
        assert Phat.shape == (60, 60)
        assert (Phat >= 0).all() and (Phat <= 1).all()
        null = monte_carlo_null(Phat, 3, OMNI_FROBENIUS, 20, SEED.derive("estn"))
        assert null.size == 20


class TestHotelling:
    def test_identical_samples(self):
        S = np.random.default_rng(1).normal(size=(15, 3))
        r = hotelling_t2(S, S)
        assert r.statistic == 0.0
        assert r.p_value == 1.0

    def test_univariate_matches_pooled_t(self):
        rng = np.random.default_rng(2)
        a = rng.normal(size=(12, 1))
        b = rng.normal(size=(15, 1)) + 0.4
        t, _ = spstats.ttest_ind(a.ravel(), b.ravel(), equal_var=True)
        assert hotelling_t2(a, b).statistic == pytest.approx(t**2, rel=1e-10)

    def test_large_shift_is_significant(self):
        rng = np.random.default_rng(3)
        a = rng.normal(size=(50, 3))
        b = rng.normal(size=(50, 3)) + 2.0
        assert hotelling_t2(a, b).p_value < 1e-6

    def test_insufficient_samples_rejected(self):
        with pytest.raises(DataError):
            hotelling_t2(np.zeros((2, 3)), np.zeros((2, 3)))


class TestManova:
    def test_identical_groups_lambda_one(self):
        S = np.random.default_rng(4).normal(size=(10, 2))
        r = manova_wilks([S, S.copy()])
        assert r.p_value == pytest.approx(1.0)
        assert wilks_lambda([S, S.copy()]) == pytest.approx(1.0)

    def test_two_group_hotelling_identity(self):
        rng = np.random.default_rng(5)
        S1 = rng.normal(size=(20, 3))
        S2 = rng.normal(size=(25, 3)) + 0.3
        lam = wilks_lambda([S1, S2])
        t2 = hotelling_t2(S1, S2).statistic
        n = 45
        assert abs(lam - 1.0 / (1.0 + t2 / (n - 2))) < 1e-10

    def test_three_separated_groups_significant(self):
        rng = np.random.default_rng(6)
        groups = [rng.normal(size=(30, 2)) + mu for mu in (0.0, 3.0, 6.0)]
        assert manova_wilks(groups).p_value < 1e-6

    def test_preconditions(self):
        with pytest.raises(DataError):
            manova_wilks([np.zeros((5, 2))])
        with pytest.raises(DataError):
            manova_wilks([np.zeros((1, 3)), np.zeros((1, 3))])
