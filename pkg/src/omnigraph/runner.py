"""Experiment configuration and deterministic orchestration.

An :class:`ExperimentConfig` (usually parsed from a JSON file) names one of
the experiment kinds, its parameters, a seed, and an output directory;
:func:`run` dispatches to the library and writes a result bundle of CSV
tables plus a JSON manifest.  Equal config + seed yields byte-identical
tables.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import ConfigError
from . import dimselect, graphio
from .asymptotics import covariance_check, residual_sample, theoretical_sigma
from .embed import ase, build_omnibus, omni_embed
from .graphio import (
    DENSE_CSV,
    EDGELIST,
    ResultBundle,
    fmt_float,
    read_graph,
    threshold_binarize,
    write_graph,
    write_manifest,
    write_table,
)
from .hypotest import (
    OMNI_FROBENIUS,
    PROCRUSTES_FROBENIUS,
    estimate_probability_matrix,
    monte_carlo_null,
    two_sample_test,
)
from .pipeline import cmds, dissimilarity_matrix, gmm_cluster, per_vertex_tests
from .rdpg import (
    Dirichlet,
    DiscreteMixture,
    PointSet,
    probability_matrix,
    sample_jrdpg,
    sample_latents,
)
from .seeds import Seed
from .sims import DEFAULT_DIST, ESTIMATORS, mse_sim, power_sim_drift, power_sim_k

KINDS = (
    "sample",
    "embed",
    "omni",
    "test",
    "sim-power-k",
    "sim-power-drift",
    "sim-mse",
    "sim-clt",
    "pipeline",
)

POWER_COLUMNS = ["method", "n", "k_or_lambda", "power", "stderr", "trials"]


@dataclass(frozen=True)
class ExperimentConfig:
    """One experiment: kind, parameters, seed, output directory, threads."""

    kind: str
    seed: int
    out_dir: Path
    params: dict
    threads: int = 1

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ConfigError(f"unknown experiment kind {self.kind!r}; choose from {KINDS}")
        if self.threads < 1:
            raise ConfigError(f"threads must be >= 1, got {self.threads}")
        object.__setattr__(self, "out_dir", Path(self.out_dir))
        Seed(self.seed)

    @classmethod
    def from_dict(cls, raw: dict, **overrides) -> "ExperimentConfig":
        raw = dict(raw)
        raw.update({k: v for k, v in overrides.items() if v is not None})
        try:
            kind = raw.pop("kind")
            seed = raw.pop("seed")
            out_dir = raw.pop("out", raw.pop("out_dir", None))
        except KeyError as exc:
            raise ConfigError(f"config missing required key: {exc}") from exc
        if out_dir is None:
            raise ConfigError("config missing required key: 'out'")
        threads = int(raw.pop("threads", 1))
        return cls(kind=kind, seed=int(seed), out_dir=out_dir, params=raw, threads=threads)

    def as_dict(self) -> dict:
        return {
            "kind": self.kind,
            "seed": self.seed,
            "out": str(self.out_dir),
            "threads": self.threads,
            **self.params,
        }


def parse_distribution(spec) -> object:
    """Distribution from a config fragment (default: Dirichlet (1,1,1))."""
    if spec is None:
        return DEFAULT_DIST
    if not isinstance(spec, dict) or "kind" not in spec:
        raise ConfigError(f"distribution spec must be a dict with 'kind', got {spec!r}")
    kind = spec["kind"]
    if kind == "dirichlet":
        return Dirichlet(tuple(spec["alpha"]))
    if kind == "mixture":
        return DiscreteMixture(np.asarray(spec["atoms"], dtype=float),
                               np.asarray(spec["weights"], dtype=float))
    if kind == "pointset":
        return PointSet(np.asarray(spec["rows"], dtype=float))
    raise ConfigError(f"unknown distribution kind {kind!r}")


def _int_param(params: dict, key: str, default=None, minimum: int = 1) -> int:
    if key not in params:
        if default is None:
            raise ConfigError(f"missing required parameter {key!r}")
        value = default
    else:
        value = params[key]
    value = int(value)
    if value < minimum:
        raise ConfigError(f"parameter {key!r} must be >= {minimum}, got {value}")
    return value


def _grid_param(params: dict, key: str) -> list:
    grid = params.get(key)
    if not isinstance(grid, (list, tuple)) or not grid:
        raise ConfigError(f"parameter {key!r} must be a nonempty list")
    return list(grid)


def _load_graphs(params: dict) -> list:
    paths = params.get("graphs")
    if isinstance(paths, str):
        paths = [paths]
    if not paths:
        raise ConfigError("parameter 'graphs' must list at least one path")
    fmt = params.get("format", DENSE_CSV)
    graphs = [read_graph(p, fmt) for p in paths]
    tau = params.get("binarize", None)
    if tau is not None:
        graphs = [threshold_binarize(g, float(tau)) for g in graphs]
    return graphs


def scree_eigenvalues(M: np.ndarray, count: int) -> np.ndarray:
    """Largest-|value| eigenvalues of a symmetric matrix, nonincreasing."""
    import scipy.linalg

    N = M.shape[0]
    count = min(count, N)
    if 2 * count >= N:
        vals = np.linalg.eigvalsh(M)
    else:
        hi = scipy.linalg.eigh(
            M, subset_by_index=[N - count, N - 1], eigvals_only=True, check_finite=False
        )
        lo = scipy.linalg.eigh(
            M, subset_by_index=[0, count - 1], eigvals_only=True, check_finite=False
        )
        vals = np.concatenate([hi, lo])
    mags = np.sort(np.abs(vals))[::-1][:count]
    return mags


def _select_dimension(M: np.ndarray, params: dict) -> tuple[int, np.ndarray, list[int]]:
    """Embedding dimension from config: explicit ``d`` or a scree elbow."""
    scree_count = _int_param(params, "scree_values", default=100)
    scree = scree_eigenvalues(M, scree_count)
    scree = scree[scree > 0]
    if "d" in params and params["d"] is not None:
        return _int_param(params, "d"), scree, []
    elbow_index = _int_param(params, "elbow_index", default=0, minimum=0)
    elbows = dimselect.zhu_ghodsi_elbows(scree, n_elbows=elbow_index + 1)
    d = elbows[min(elbow_index, len(elbows) - 1)]
    return d, scree, elbows


def _run_sample(config: ExperimentConfig) -> dict:
    params = dict(config.params)
    dist = parse_distribution(params.get("dist"))
    n = _int_param(params, "n")
    m = _int_param(params, "m", default=1)
    fmt = params.get("format", DENSE_CSV)
    seed = Seed(config.seed)
    X = sample_latents(dist, n, seed.derive("latents"))
    graphs = sample_jrdpg(X, m, seed.derive("jrdpg"))
    out = config.out_dir
    tables = {}
    latents_path = out / "latents.csv"
    graphio.write_embedding(X, latents_path)
    tables["latents"] = latents_path
    for g, graph in enumerate(graphs):
        path = out / (f"graph_{g:03d}.csv" if fmt == DENSE_CSV else f"graph_{g:03d}.edges")
        write_graph(graph, path, fmt)
        tables[f"graph_{g}"] = path
    return tables


def _write_block_embedding(E, out_dir: Path) -> Path:
    """Joint embedding as a long table: graph, vertex, coordinates."""
    rows = []
    m = E.m if E.m is not None else 1
    n = E.n if E.n is not None else E.Y.shape[0]
    for s in range(m):
        block = E.Y[s * n : (s + 1) * n]
        for i in range(n):
            row = {"graph": s, "vertex": i}
            for j in range(E.d):
                row[f"c{j}"] = block[i, j]
            rows.append(row)
    columns = ["graph", "vertex"] + [f"c{j}" for j in range(E.d)]
    path = out_dir / "embedding.csv"
    write_table(rows, path, columns)
    return path


def _write_scree(scree: np.ndarray, elbows: list[int], out_dir: Path) -> Path:
    rows = [
        {"rank": r + 1, "eigenvalue": val, "is_elbow": int(r + 1 in elbows)}
        for r, val in enumerate(scree)
    ]
    path = out_dir / "scree.csv"
    write_table(rows, path, ["rank", "eigenvalue", "is_elbow"])
    return path


def _run_embed(config: ExperimentConfig) -> dict:
    params = dict(config.params)
    graphs = _load_graphs(params)
    if len(graphs) != 1:
        raise ConfigError(f"'embed' expects exactly one graph, got {len(graphs)}")
    d, scree, elbows = _select_dimension(graphs[0].A, params)
    E = ase(graphs[0], d, graph_index=0)
    tables = {
        "embedding": _write_block_embedding(E, config.out_dir),
        "scree": _write_scree(scree, elbows, config.out_dir),
    }
    return tables


def _run_omni(config: ExperimentConfig) -> dict:
    params = dict(config.params)
    graphs = _load_graphs(params)
    centered = bool(params.get("centered", False))
    omni = build_omnibus(graphs, centered=False)
    d, scree, elbows = _select_dimension(omni.M, params)
    E = omni_embed(graphs, d, centered=centered)
    tables = {
        "embedding": _write_block_embedding(E, config.out_dir),
        "scree": _write_scree(scree, elbows, config.out_dir),
    }
    return tables


def _run_test(config: ExperimentConfig) -> dict:
    params = dict(config.params)
    graphs = _load_graphs(params)
    if len(graphs) != 2:
        raise ConfigError(f"'test' expects exactly two graphs, got {len(graphs)}")
    d = _int_param(params, "d")
    alpha = float(params.get("alpha", 0.05))
    mc_iters = _int_param(params, "mc_iters", default=500)
    methods = params.get("methods", [OMNI_FROBENIUS, PROCRUSTES_FROBENIUS])
    null_spec = params.get("null", {"mode": "estimated"})
    mode = null_spec.get("mode", "estimated")
    if mode == "known":
        latents_path = null_spec.get("latents")
        if latents_path is None:
            raise ConfigError("known-P null needs 'latents' path in the null spec")
        X = graphio.read_embedding(latents_path)
        P = probability_matrix(X)
    elif mode == "estimated":
        P = estimate_probability_matrix(graphs, d)
    else:
        raise ConfigError(f"unknown null mode {mode!r}")
    seed = Seed(config.seed)
    rows = []
    tables = {}
    for method in methods:
        null = monte_carlo_null(P, d, method, mc_iters, seed.derive("null", method))
        result = two_sample_test(graphs[0], graphs[1], d, method, null, alpha)
        rows.append(
            {
                "method": method,
                "statistic": result.statistic,
                "p_value": result.p_value,
                "reject": int(result.reject),
                "alpha": alpha,
                "mc_iters": mc_iters,
                "null_mode": mode,
            }
        )
        null_path = config.out_dir / f"null_{method}.csv"
        graphio.write_matrix_csv(null.reshape(-1, 1), null_path, ["statistic"])
        tables[f"null_{method}"] = null_path
    path = config.out_dir / "tests.csv"
    write_table(rows, path,
                ["method", "statistic", "p_value", "reject", "alpha", "mc_iters", "null_mode"])
    tables["tests"] = path
    return tables


def _power_rows(points) -> list[dict]:
    return [
        {
            "method": p.method,
            "n": p.n,
            "k_or_lambda": p.k_or_lambda,
            "power": p.power,
            "stderr": p.stderr,
            "trials": p.trials,
        }
        for p in points
    ]


def _run_power_k(config: ExperimentConfig) -> dict:
    params = dict(config.params)
    n_grid = _grid_param(params, "n_grid")
    k_grid = params.get("k_grid", [params.get("k")])
    if k_grid == [None]:
        raise ConfigError("need 'k' or 'k_grid'")
    dist = parse_distribution(params.get("dist"))
    seed = Seed(config.seed)
    points = []
    for k in k_grid:
        points.extend(
            power_sim_k(
                n_grid,
                int(k),
                d=_int_param(params, "d", default=3),
                alpha=float(params.get("alpha", 0.05)),
                trials=_int_param(params, "trials", default=1000),
                mc_iters=_int_param(params, "mc_iters", default=500),
                dist=dist,
                seed=seed,
                threads=config.threads,
            )
        )
    path = config.out_dir / "power_k.csv"
    write_table(_power_rows(points), path, POWER_COLUMNS)
    return {"power_k": path}


def _run_power_drift(config: ExperimentConfig) -> dict:
    params = dict(config.params)
    points = power_sim_drift(
        _grid_param(params, "n_grid"),
        _grid_param(params, "lambda_grid"),
        d=_int_param(params, "d", default=3),
        alpha=float(params.get("alpha", 0.05)),
        trials=_int_param(params, "trials", default=500),
        mc_iters=_int_param(params, "mc_iters", default=500),
        seed=Seed(config.seed),
        threads=config.threads,
    )
    path = config.out_dir / "power_drift.csv"
    write_table(_power_rows(points), path, POWER_COLUMNS)
    return {"power_drift": path}


def _run_mse(config: ExperimentConfig) -> dict:
    params = dict(config.params)
    reports = mse_sim(
        _grid_param(params, "n_grid"),
        m=_int_param(params, "m", default=2),
        trials=_int_param(params, "trials", default=50),
        d=_int_param(params, "d", default=3),
        dist=parse_distribution(params.get("dist")),
        seed=Seed(config.seed),
        threads=config.threads,
    )
    rows = []
    for rep in reports:
        row = {"n": rep.n, "m": rep.m, "trials": rep.trials, "failures": rep.failures}
        for est in ESTIMATORS:
            row[est] = rep.mse[est]
            row[f"stderr_{est}"] = rep.stderr[est]
        rows.append(row)
    columns = (
        ["n", "m", "trials", "failures"]
        + list(ESTIMATORS)
        + [f"stderr_{est}" for est in ESTIMATORS]
    )
    path = config.out_dir / "mse.csv"
    write_table(rows, path, columns)
    return {"mse": path}


def _run_clt(config: ExperimentConfig) -> dict:
    params = dict(config.params)
    dist = parse_distribution(params.get("dist"))
    if not isinstance(dist, DiscreteMixture):
        raise ConfigError("sim-clt needs a discrete-mixture distribution")
    y_atom = _int_param(params, "y_atom", default=0, minimum=0)
    if y_atom >= dist.atoms.shape[0]:
        raise ConfigError(f"y_atom {y_atom} out of range")
    y = dist.atoms[y_atom]
    n = _int_param(params, "n")
    m = _int_param(params, "m", default=2)
    replicates = _int_param(params, "replicates", default=500)
    vertex = _int_param(params, "vertex", default=0, minimum=0)
    graph_index = _int_param(params, "graph_index", default=0, minimum=0)
    d = _int_param(params, "d", default=dist.dim)
    seed = Seed(config.seed)
    rs = residual_sample(dist, y, n, m, vertex, graph_index, replicates, d, seed)
    theory = theoretical_sigma(dist, y, m)
    check = covariance_check(rs, theory)
    emp = np.cov(rs.residuals, rowvar=False, ddof=1)
    rows = [
        {"metric": "rel_frobenius_error", "value": check.rel_frobenius_error},
        {"metric": "replicates", "value": float(rs.residuals.shape[0])},
        {"metric": "dropped", "value": float(rs.dropped)},
    ]
    for j in range(d):
        rows.append({"metric": f"skewness_c{j}", "value": float(check.skewness[j])})
        rows.append({"metric": f"excess_kurtosis_c{j}", "value": float(check.excess_kurtosis[j])})
    for i in range(d):
        for j in range(d):
            rows.append({"metric": f"sigma_theory_{i}{j}", "value": float(theory.Sigma[i, j])})
            rows.append({"metric": f"sigma_empirical_{i}{j}", "value": float(np.atleast_2d(emp)[i, j])})
    out = config.out_dir
    summary_path = out / "clt_summary.csv"
    write_table(rows, summary_path, ["metric", "value"])
    residuals_path = out / "clt_residuals.csv"
    graphio.write_embedding(rs.residuals, residuals_path)
    return {"clt_summary": summary_path, "clt_residuals": residuals_path}


def _run_pipeline(config: ExperimentConfig) -> dict:
    params = dict(config.params)
    graphs = _load_graphs(params)
    if len(graphs) < 2:
        raise ConfigError("pipeline needs at least two graphs")
    centered = bool(params.get("centered", True))
    omni = build_omnibus(graphs, centered=False)
    d, scree, elbows = _select_dimension(omni.M, params)
    E = omni_embed(graphs, d, centered=centered)
    D = dissimilarity_matrix(E)
    cmds_dims = _int_param(params, "cmds_dims", default=2)
    layout = cmds(D, cmds_dims)
    k_range = params.get("k_range", [1, 2, 3])
    seed = Seed(config.seed)
    clustering = gmm_cluster(layout.Y, k_range, seed.derive("gmm"))
    method = params.get("test_method", "manova-wilks")
    correction = params.get("correction", "bonferroni")
    n = graphs[0].n
    if clustering.k_selected == 1:
        # One cluster: no grouping to test against, nothing can differ.
        p_raw = np.ones(n)
        p_corr = np.ones(n)
    else:
        p_raw = per_vertex_tests(E, clustering.labels, method=method, correction="none")
        p_corr = np.minimum(1.0, n * p_raw)

    out = config.out_dir
    tables = {"scree": _write_scree(scree, elbows, out)}
    m = len(graphs)
    graphio.write_matrix_csv(D, out / "dissimilarity.csv", [f"g{j}" for j in range(m)])
    tables["dissimilarity"] = out / "dissimilarity.csv"
    cmds_rows = []
    for g in range(m):
        row = {"graph": g, "cluster": int(clustering.labels[g])}
        for j in range(cmds_dims):
            row[f"c{j}"] = layout.Y[g, j]
        cmds_rows.append(row)
    cmds_path = out / "cmds.csv"
    write_table(cmds_rows, cmds_path,
                ["graph", "cluster"] + [f"c{j}" for j in range(cmds_dims)])
    tables["cmds"] = cmds_path
    bic_path = out / "bic.csv"
    write_table(
        [{"k": k, "bic": v, "selected": int(k == clustering.k_selected)}
         for k, v in sorted(clustering.bic.items())],
        bic_path,
        ["k", "bic", "selected"],
    )
    tables["bic"] = bic_path
    pvals_path = out / "pvalues.csv"
    write_table(
        [{"vertex": i, "p_raw": p_raw[i], "p_corrected": p_corr[i]} for i in range(n)],
        pvals_path,
        ["vertex", "p_raw", "p_corrected"],
    )
    tables["pvalues"] = pvals_path
    return tables


_RUNNERS = {
    "sample": _run_sample,
    "embed": _run_embed,
    "omni": _run_omni,
    "test": _run_test,
    "sim-power-k": _run_power_k,
    "sim-power-drift": _run_power_drift,
    "sim-mse": _run_mse,
    "sim-clt": _run_clt,
    "pipeline": _run_pipeline,
}


def run(config: ExperimentConfig) -> ResultBundle:
    """Execute one experiment and write its tables plus a manifest."""
    config.out_dir.mkdir(parents=True, exist_ok=True)
    start = time.perf_counter()
    tables = _RUNNERS[config.kind](config)
    wall = time.perf_counter() - start
    manifest = write_manifest(config.out_dir, config.as_dict(), config.seed, wall, tables)
    return ResultBundle(out_dir=config.out_dir, tables=tables, manifest=manifest)
