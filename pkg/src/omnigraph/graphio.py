"""Graph/embedding/table file formats and the result-bundle manifest.

Graphs travel as either whitespace-separated edge lists ("i j" or "i j w",
0-based, undirected) or dense CSV adjacency matrices.  All floats are
serialized with 17 significant digits so write-then-read round-trips
bit-exactly, and every experiment's output directory carries a JSON manifest
(config echo, config hash, versions, seed, wall time) sufficient to
reproduce the tables byte-for-byte.
"""

from __future__ import annotations

import csv
import hashlib
import json
import platform
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import DataError
from .rdpg import Graph

EDGELIST = "edgelist"
DENSE_CSV = "dense_csv"


def fmt_float(x) -> str:
    """Round-trippable decimal representation (17 significant digits)."""
    return format(float(x), ".17g")


def _parse_edgelist(path: Path) -> Graph:
    edges = {}
    max_idx = -1
    weighted = False
    with open(path) as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line:
                continue
            parts = line.split()
            if len(parts) not in (2, 3):
                raise DataError(f"{path}:{lineno}: expected 'i j [w]', got {line!r}")
            try:
                i, j = int(parts[0]), int(parts[1])
                w = float(parts[2]) if len(parts) == 3 else 1.0
            except ValueError as exc:
                raise DataError(f"{path}:{lineno}: {exc}") from exc
            if i < 0 or j < 0:
                raise DataError(f"{path}:{lineno}: negative vertex index")
            if i == j:
                raise DataError(f"{path}:{lineno}: self-loop at vertex {i}")
            key = (min(i, j), max(i, j))
            if key in edges:
                raise DataError(f"{path}:{lineno}: duplicate edge {key}")
            edges[key] = w
            if len(parts) == 3:
                weighted = True
            max_idx = max(max_idx, i, j)
    if max_idx < 0:
        raise DataError(f"{path}: empty edge list (vertex count unknown)")
    n = max_idx + 1
    A = np.zeros((n, n))
    for (i, j), w in edges.items():
        A[i, j] = A[j, i] = w
    return Graph(A, weighted=weighted)


def _parse_dense_csv(path: Path) -> Graph:
    try:
        A = np.loadtxt(path, delimiter=",", ndmin=2)
    except ValueError as exc:
        raise DataError(f"{path}: {exc}") from exc
    if A.shape[0] != A.shape[1]:
        raise DataError(f"{path}: matrix must be square, got shape {A.shape}")
    if np.abs(A - A.T).max() > 1e-9:
        raise DataError(f"{path}: matrix asymmetric beyond 1e-9")
    A = (A + A.T) / 2.0
    np.fill_diagonal(A, 0.0)
    weighted = not np.isin(A, (0.0, 1.0)).all()
    return Graph(A, weighted=weighted)


def read_graph(path, fmt: str = EDGELIST) -> Graph:
    """Load a symmetric hollow graph from an edge list or dense CSV file."""
    path = Path(path)
    if not path.exists():
        raise DataError(f"no such file: {path}")
    if fmt == EDGELIST:
        return _parse_edgelist(path)
    if fmt == DENSE_CSV:
        return _parse_dense_csv(path)
    raise DataError(f"unknown graph format {fmt!r}")


def write_graph(G: Graph, path, fmt: str = DENSE_CSV) -> None:
    path = Path(path)
    if fmt == DENSE_CSV:
        with open(path, "w", newline="") as fh:
            for row in G.A:
                fh.write(",".join(fmt_float(x) for x in row) + "\n")
        return
    if fmt == EDGELIST:
        with open(path, "w") as fh:
            iu = np.triu_indices(G.n, k=1)
            for i, j in zip(*iu):
                w = G.A[i, j]
                if w != 0.0:
                    if G.weighted:
                        fh.write(f"{i} {j} {fmt_float(w)}\n")
                    else:
                        fh.write(f"{i} {j}\n")
        return
    raise DataError(f"unknown graph format {fmt!r}")


def threshold_binarize(G: Graph, tau: float = 0.0) -> Graph:
    """Binary graph keeping edges with weight strictly above tau.

    The default tau = 0 turns every nonzero weight into an edge.
    """
    A = (G.A > tau).astype(float)
    return Graph(A, weighted=False)


def write_matrix_csv(M: np.ndarray, path, header: list[str]) -> None:
    """Matrix as CSV with a header row and 17-significant-digit floats."""
    M = np.atleast_2d(np.asarray(M, dtype=float))
    if len(header) != M.shape[1]:
        raise DataError(f"header has {len(header)} names for {M.shape[1]} columns")
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for row in M:
            writer.writerow([fmt_float(x) for x in row])


def read_matrix_csv(path) -> np.ndarray:
    """Read back a matrix written by :func:`write_matrix_csv`."""
    path = Path(path)
    if not path.exists():
        raise DataError(f"no such file: {path}")
    try:
        return np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
    except ValueError as exc:
        raise DataError(f"{path}: {exc}") from exc


def write_embedding(Y: np.ndarray, path) -> None:
    """Embedding rows as CSV with coordinate columns c0..c{d-1}."""
    Y = np.atleast_2d(np.asarray(Y, dtype=float))
    write_matrix_csv(Y, path, [f"c{j}" for j in range(Y.shape[1])])


def read_embedding(path) -> np.ndarray:
    return read_matrix_csv(path)


def write_table(rows: list[dict], path, columns: list[str]) -> None:
    """Records as CSV; floats get 17 significant digits, the rest str()."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(columns)
        for row in rows:
            out = []
            for col in columns:
                val = row[col]
                if isinstance(val, (float, np.floating)):
                    out.append(fmt_float(val))
                else:
                    out.append(str(val))
            writer.writerow(out)


@dataclass(frozen=True)
class ResultBundle:
    """Paths of the tables and manifest an experiment produced."""

    out_dir: Path
    tables: dict
    manifest: Path


def config_digest(config: dict) -> str:
    return hashlib.sha256(
        json.dumps(config, sort_keys=True, default=str).encode()
    ).hexdigest()


def write_manifest(out_dir, config: dict, seed_root: int, wall_time_s: float, tables: dict) -> Path:
    """JSON manifest that pins down how to regenerate the bundle."""
    import scipy
    import sklearn

    from . import __version__

    out_dir = Path(out_dir)
    manifest = {
        "config": config,
        "config_sha256": config_digest(config),
        "seed": seed_root,
        "tables": {name: Path(p).name for name, p in tables.items()},
        "versions": {
            "python": platform.python_version(),
            "numpy": np.__version__,
            "scipy": scipy.__version__,
            "scikit-learn": sklearn.__version__,
            "omnigraph": __version__,
        },
        "wall_time_s": wall_time_s,
    }
    path = out_dir / "manifest.json"
    with open(path, "w") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return path
