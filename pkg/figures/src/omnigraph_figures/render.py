"""Figure rendering from omnigraph CSV tables.

Five figure kinds cover the standard outputs: per-estimator recovery error
versus graph size, test power versus graph size for each perturbation size,
test power versus drift for each graph size, eigenvalue scree plots with
selected elbows, and the 2-D cluster layout of a graph collection.  Error
bars span ``errorbar_multiplier`` (default 2) standard errors.  Rendering is
deterministic: equal inputs produce byte-identical image files.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np


class SchemaError(ValueError):
    """A required table or column is missing or unusable."""


MSE_KIND = "mse"
POWER_K_KIND = "power-k"
POWER_DRIFT_KIND = "power-drift"
SCREE_KIND = "scree"
CMDS_KIND = "cmds"
FIGURE_KINDS = (MSE_KIND, POWER_K_KIND, POWER_DRIFT_KIND, SCREE_KIND, CMDS_KIND)

# Series colors follow the usual legend for the five estimators.
ESTIMATOR_COLORS = {
    "ASE1": "tab:red",
    "Abar": "gold",
    "OMNI": "tab:green",
    "OMNIbar": "purple",
    "PROCbar": "tab:blue",
}
METHOD_COLORS = {
    "omni-frobenius": "tab:green",
    "procrustes-frobenius": "tab:blue",
}
FIGURE_DPI = 120


@dataclass(frozen=True)
class FigureSpec:
    """One figure request: kind, input table(s), output path, labels."""

    kind: str
    tables: tuple
    out: Path
    xlabel: str = ""
    ylabel: str = ""
    title: str = ""
    errorbar_multiplier: float = 2.0

    @classmethod
    def from_dict(cls, raw: dict) -> "FigureSpec":
        if "kind" not in raw:
            raise SchemaError("figure spec needs a 'kind'")
        kind = raw["kind"]
        if kind not in FIGURE_KINDS:
            raise SchemaError(f"unknown figure kind {kind!r}; choose from {FIGURE_KINDS}")
        tables = raw.get("tables", raw.get("table"))
        if isinstance(tables, str):
            tables = [tables]
        if not tables:
            raise SchemaError("figure spec needs 'table' or 'tables'")
        if "out" not in raw:
            raise SchemaError("figure spec needs an 'out' image path")
        return cls(
            kind=kind,
            tables=tuple(str(t) for t in tables),
            out=Path(raw["out"]),
            xlabel=raw.get("xlabel", ""),
            ylabel=raw.get("ylabel", ""),
            title=raw.get("title", ""),
            errorbar_multiplier=float(raw.get("errorbar_multiplier", 2.0)),
        )


def read_table(path) -> dict:
    """CSV into a column dict; numeric columns become float arrays."""
    path = Path(path)
    if not path.exists():
        raise SchemaError(f"no such table: {path}")
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise SchemaError(f"{path}: table has no header") from None
        rows = [row for row in reader if row]
    if not rows:
        raise SchemaError(f"{path}: table has no data rows")
    columns: dict = {}
    for j, name in enumerate(header):
        values = [row[j] for row in rows]
        try:
            columns[name] = np.array([float(v) for v in values])
        except ValueError:
            columns[name] = np.array(values)
    return columns


def _require(columns: dict, needed, path) -> None:
    for name in needed:
        if name not in columns:
            raise SchemaError(f"{path}: missing column {name!r}")


def _render_mse(spec: FigureSpec):
    cols = read_table(spec.tables[0])
    estimators = list(ESTIMATOR_COLORS)
    _require(cols, ["n"] + estimators + [f"stderr_{e}" for e in estimators], spec.tables[0])
    order = np.argsort(cols["n"])
    fig, ax = plt.subplots(figsize=(7, 5))
    for est in estimators:
        ax.errorbar(
            cols["n"][order],
            cols[est][order],
            yerr=spec.errorbar_multiplier * cols[f"stderr_{est}"][order],
            label=est,
            color=ESTIMATOR_COLORS[est],
            marker="o",
            capsize=3,
        )
    ax.set_xlabel(spec.xlabel or "number of vertices")
    ax.set_ylabel(spec.ylabel or "mean squared error")
    ax.set_title(spec.title or "latent-position recovery error")
    ax.set_yscale("log")
    ax.legend()
    return fig


def _render_power(spec: FigureSpec, panel_col: str, x_col: str, panel_label: str, x_label: str):
    cols = read_table(spec.tables[0])
    _require(cols, ["method", "n", "k_or_lambda", "power", "stderr"], spec.tables[0])
    panels = sorted(set(cols[panel_col].tolist()))
    fig, axes = plt.subplots(
        1, len(panels), figsize=(4.5 * len(panels), 4), squeeze=False, sharey=True
    )
    methods = sorted(set(cols["method"].tolist()))
    for ax, panel in zip(axes[0], panels):
        for method in methods:
            pick = (cols[panel_col] == panel) & (cols["method"] == method)
            order = np.argsort(cols[x_col][pick])
            ax.errorbar(
                cols[x_col][pick][order],
                cols["power"][pick][order],
                yerr=spec.errorbar_multiplier * cols["stderr"][pick][order],
                label=method,
                color=METHOD_COLORS.get(method),
                marker="o",
                capsize=3,
            )
        ax.set_title(f"{panel_label} = {panel:g}")
        ax.set_xlabel(spec.xlabel or x_label)
        ax.set_ylim(-0.02, 1.02)
    axes[0][0].set_ylabel(spec.ylabel or "power")
    axes[0][0].legend()
    if spec.title:
        fig.suptitle(spec.title)
    return fig


def _render_scree(spec: FigureSpec):
    cols = read_table(spec.tables[0])
    _require(cols, ["rank", "eigenvalue", "is_elbow"], spec.tables[0])
    order = np.argsort(cols["rank"])
    ranks = cols["rank"][order]
    vals = cols["eigenvalue"][order]
    elbows = ranks[cols["is_elbow"][order] > 0]
    fig, ax = plt.subplots(figsize=(7, 5))
    ax.plot(ranks, vals, marker="o", color="tab:blue", label="eigenvalue magnitude")
    for j, r in enumerate(elbows):
        ax.axvline(r, color="tab:red", linestyle="--",
                   label="elbow" if j == 0 else None)
    ax.set_xlabel(spec.xlabel or "rank")
    ax.set_ylabel(spec.ylabel or "eigenvalue magnitude")
    ax.set_title(spec.title or "scree plot")
    ax.set_yscale("log")
    ax.legend()
    return fig


def _render_cmds(spec: FigureSpec):
    cols = read_table(spec.tables[0])
    _require(cols, ["graph", "cluster", "c0", "c1"], spec.tables[0])
    clusters = sorted(set(int(c) for c in cols["cluster"]))
    fig, ax = plt.subplots(figsize=(6, 6))
    cmap = plt.get_cmap("tab10")
    for c in clusters:
        pick = cols["cluster"].astype(int) == c
        ax.scatter(cols["c0"][pick], cols["c1"][pick], color=cmap(c % 10),
                   label=f"cluster {c}", s=45)
    ax.set_xlabel(spec.xlabel or "coordinate 1")
    ax.set_ylabel(spec.ylabel or "coordinate 2")
    ax.set_title(spec.title or "graph layout by cluster")
    ax.legend()
    ax.set_aspect("equal", adjustable="datalim")
    return fig


_RENDERERS = {
    MSE_KIND: _render_mse,
    POWER_K_KIND: lambda spec: _render_power(spec, "k_or_lambda", "n", "k", "number of vertices"),
    POWER_DRIFT_KIND: lambda spec: _render_power(spec, "n", "k_or_lambda", "n", "drift"),
    SCREE_KIND: _render_scree,
    CMDS_KIND: _render_cmds,
}


def build_figure(spec: FigureSpec):
    """Build the matplotlib figure without saving (useful for inspection)."""
    return _RENDERERS[spec.kind](spec)


def render(spec: FigureSpec) -> Path:
    """Render one figure to ``spec.out``.

    All table reading and schema validation happens before the output file
    is touched, so a failing spec leaves no partial image behind.
    """
    fig = build_figure(spec)
    spec.out.parent.mkdir(parents=True, exist_ok=True)
    meta = {"Date": None} if spec.out.suffix == ".svg" else {"Software": "omnigraph-figures"}
    fig.savefig(spec.out, dpi=FIGURE_DPI, metadata=meta)
    plt.close(fig)
    return spec.out
