"""Joint spectral inference on vertex-matched graph collections.

Sampling of shared-latent-position graph collections, single-graph and
joint (omnibus) spectral embeddings, two-sample and per-vertex tests of
latent-position equality, dimension selection, and simulation harnesses
that quantify estimator accuracy, test power, and residual normality.
"""

__version__ = "0.1.0"

from .asymptotics import (
    CovarianceCheck,
    ResidualSample,
    TheoreticalCovariance,
    covariance_check,
    residual_sample,
    sigma_tilde,
    theoretical_sigma,
)
from .dimselect import zhu_ghodsi_elbows
from .embed import (
    AlignmentResult,
    Embedding,
    OmnibusMatrix,
    abar_embed,
    ase,
    build_omnibus,
    omni_embed,
    omnibar,
    procrustes,
    spectral_embed,
)
from .errors import ConfigError, DataError, NumericalError
from .graphio import (
    ResultBundle,
    read_embedding,
    read_graph,
    threshold_binarize,
    write_embedding,
    write_graph,
)
from .hypotest import (
    HOTELLING_T2,
    MANOVA_WILKS,
    OMNI_FROBENIUS,
    PROCRUSTES_FROBENIUS,
    TestResult,
    estimate_probability_matrix,
    frobenius_stat,
    hotelling_t2,
    manova_wilks,
    monte_carlo_null,
    omni_test_stat,
    procrustes_test_stat,
    two_sample_test,
    wilks_lambda,
)
from .pipeline import GmmResult, cmds, dissimilarity_matrix, gmm_cluster, per_vertex_tests
from .rdpg import (
    Dirichlet,
    DiscreteMixture,
    Graph,
    LatentDistribution,
    PointSet,
    probability_matrix,
    sample_graph,
    sample_jrdpg,
    sample_latents,
    second_moment,
)
from .sims import (
    ESTIMATORS,
    MseReport,
    PowerCurvePoint,
    mse_sim,
    power_sim_drift,
    power_sim_k,
)
from .seeds import Seed

__all__ = [
    "AlignmentResult",
    "ConfigError",
    "CovarianceCheck",
    "DataError",
    "Dirichlet",
    "DiscreteMixture",
    "ESTIMATORS",
    "Embedding",
    "GmmResult",
    "Graph",
    "HOTELLING_T2",
    "LatentDistribution",
    "MANOVA_WILKS",
    "MseReport",
    "NumericalError",
    "OMNI_FROBENIUS",
    "OmnibusMatrix",
    "PROCRUSTES_FROBENIUS",
    "PointSet",
    "PowerCurvePoint",
    "ResidualSample",
    "ResultBundle",
    "Seed",
    "TestResult",
    "TheoreticalCovariance",
    "abar_embed",
    "ase",
    "build_omnibus",
    "cmds",
    "covariance_check",
    "dissimilarity_matrix",
    "estimate_probability_matrix",
    "frobenius_stat",
    "gmm_cluster",
    "hotelling_t2",
    "manova_wilks",
    "monte_carlo_null",
    "mse_sim",
    "omni_embed",
    "omni_test_stat",
    "omnibar",
    "per_vertex_tests",
    "power_sim_drift",
    "power_sim_k",
    "probability_matrix",
    "procrustes",
    "procrustes_test_stat",
    "read_embedding",
    "read_graph",
    "residual_sample",
    "sample_graph",
    "sample_jrdpg",
    "sample_latents",
    "second_moment",
    "sigma_tilde",
    "spectral_embed",
    "theoretical_sigma",
    "threshold_binarize",
    "two_sample_test",
    "wilks_lambda",
    "write_embedding",
    "write_graph",
    "zhu_ghodsi_elbows",
]
