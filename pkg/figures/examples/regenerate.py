#!/usr/bin/env python3
"""Regenerate the shipped example bundles by driving the omnigraph CLI.

Writes small result tables into bundles/ plus one figure-spec JSON per
figure kind.  Everything is seeded, so reruns reproduce the bundles
byte-for-byte (see each bundle's manifest.json).
"""

import json
import shutil
import subprocess
import sys
import tempfile
from pathlib import Path

HERE = Path(__file__).resolve().parent
BUNDLES = HERE / "bundles"


def run_cli(kind: str, config: dict, out_dir: Path) -> None:
    config = {**config, "kind": kind, "out": str(out_dir)}
    with tempfile.NamedTemporaryFile("w", suffix=".json", delete=False) as fh:
        json.dump(config, fh)
        cfg_path = fh.name
    subprocess.run(
        [sys.executable, "-m", "omnigraph.cli", kind, "--config", cfg_path],
        check=True,
    )


def synthetic_pipeline_inputs(work: Path) -> list[str]:
    """Three-population graph files for the pipeline bundle."""
    import numpy as np

    from omnigraph import (
        Dirichlet,
        Seed,
        probability_matrix,
        sample_graph,
        sample_latents,
        write_graph,
    )

    seed = Seed(424242)
    corners = [
        np.array([0.9, 0.05, 0.05]),
        np.array([0.05, 0.9, 0.05]),
        np.array([0.05, 0.05, 0.9]),
    ]
    planted = (3, 11)
    X = sample_latents(Dirichlet((1.0, 1.0, 1.0)), 30, seed.derive("x"))
    paths = []
    for pop in range(3):
        Xp = X.copy()
        for vi, v in enumerate(planted):
            Xp[v] = corners[(pop + vi) % 3]
        P = probability_matrix(Xp)
        for g in range(8):
            G = sample_graph(P, seed.derive("g", pop, g))
            p = work / f"pop{pop}_graph{g}.csv"
            write_graph(G, p, "dense_csv")
            paths.append(str(p))
    return paths


def main() -> None:
    BUNDLES.mkdir(parents=True, exist_ok=True)
    work = Path(tempfile.mkdtemp(prefix="bundle-gen-"))

    run_cli(
        "sim-mse",
        {"seed": 97, "n_grid": [40, 60, 80], "trials": 6},
        BUNDLES / "mse",
    )
    run_cli(
        "sim-power-k",
        {"seed": 98, "n_grid": [30, 50], "k_grid": [1, 5, 10], "trials": 8, "mc_iters": 25},
        BUNDLES / "power_k",
    )
    run_cli(
        "sim-power-drift",
        {"seed": 99, "n_grid": [30, 50], "lambda_grid": [0.0, 0.5, 1.0], "trials": 8,
         "mc_iters": 25},
        BUNDLES / "power_drift",
    )
    run_cli(
        "pipeline",
        {"seed": 100, "graphs": synthetic_pipeline_inputs(work), "d": 3,
         "centered": False, "k_range": [1, 2, 3], "scree_values": 30},
        BUNDLES / "pipeline",
    )
    shutil.rmtree(work)

    specs = [
        {"kind": "mse", "table": "bundles/mse/mse.csv", "out": "out/mse.png"},
        {"kind": "power-k", "table": "bundles/power_k/power_k.csv", "out": "out/power_k.png"},
        {"kind": "power-drift", "table": "bundles/power_drift/power_drift.csv",
         "out": "out/power_drift.png"},
        {"kind": "scree", "table": "bundles/pipeline/scree.csv", "out": "out/scree.png"},
        {"kind": "cmds", "table": "bundles/pipeline/cmds.csv", "out": "out/cmds.png"},
    ]
    for spec in specs:
        name = spec["kind"].replace("-", "_")
        with open(HERE / f"spec_{name}.json", "w") as fh:
            json.dump(spec, fh, indent=2)
            fh.write("\n")
    print(f"bundles written under {BUNDLES}")


if __name__ == "__main__":
    main()
