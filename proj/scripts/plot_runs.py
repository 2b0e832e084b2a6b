#!/usr/bin/env python3
"""Render trajectory figures from dss-sim run directories.

One directory: state norm + energy decay, boundary traces, and (with
--field) a space-time heatmap of |X(z,t)|.

Several directories: overlay of max_z |X(z,t)| per run, with the predicted
ultimate bound gamma_eps drawn as a horizontal level where the summary
provides one.  This is the comparison view for quantizer sweeps.
"""

import argparse
import json
import pathlib
import sys

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np
import pandas as pd


def load_run(run_dir: pathlib.Path):
    monitor = pd.read_csv(run_dir / "monitor.csv")
    boundary = pd.read_csv(run_dir / "boundary.csv")
    summary_path = run_dir / "summary.json"
    summary = json.loads(summary_path.read_text()) if summary_path.exists() else {}
    return monitor, boundary, summary


def plot_single(run_dir: pathlib.Path, out: pathlib.Path, with_field: bool):
    monitor, boundary, summary = load_run(run_dir)
    ncols = 3 if with_field else 2
    fig, axes = plt.subplots(1, ncols, figsize=(5.2 * ncols, 4.2))

    ax = axes[0]
    ax.semilogy(monitor["t"], monitor["maxnorm"], label=r"$\max_z |X(z,t)|$")
    ax.semilogy(monitor["t"], monitor["V"], label=r"$V(t)$", alpha=0.8)
    if monitor["d_norm"].max() > 0:
        ax.semilogy(monitor["t"], monitor["d_norm"].where(monitor["d_norm"] > 0),
                    label=r"$|d(t)|$", ls=":", alpha=0.7)
    ult = summary.get("ultimate_maxnorm")
    if ult:
        ax.axhline(ult, color="gray", ls="--", lw=0.8,
                   label=f"ultimate {ult:.3g}")
    ax.set_xlabel("t")
    ax.set_title(run_dir.name)
    ax.legend(fontsize=8)

    ax = axes[1]
    x1_cols = [c for c in boundary.columns if c.startswith("X1_")]
    eta_cols = [c for c in boundary.columns if c.startswith("eta_")]
    for c in x1_cols:
        ax.plot(boundary["t"], boundary[c], label=c)
    for c in eta_cols:
        ax.plot(boundary["t"], boundary[c], label=c, ls="--", alpha=0.8)
    ax.set_xlabel("t")
    ax.set_title("boundary trace and controller state")
    ax.legend(fontsize=8)

    if with_field:
        field = pd.read_csv(run_dir / "field.csv")
        comp_cols = [c for c in field.columns if c.startswith("X_")]
        mag = np.sqrt(sum(field[c] ** 2 for c in comp_cols))
        tv = np.sort(field["t"].unique())
        zv = np.sort(field["z"].unique())
        grid = mag.to_numpy().reshape(len(tv), len(zv))
        ax = axes[2]
        im = ax.pcolormesh(tv, zv, grid.T, shading="nearest", cmap="viridis")
        fig.colorbar(im, ax=ax, label=r"$|X(z,t)|$")
        ax.set_xlabel("t")
        ax.set_ylabel("z")
        ax.set_title("field magnitude")

    fig.tight_layout()
    fig.savefig(out, dpi=150)
    print(f"wrote {out}")


def plot_overlay(run_dirs, out: pathlib.Path):
    fig, ax = plt.subplots(figsize=(7.0, 4.6))
    for run_dir in run_dirs:
        monitor, _, summary = load_run(run_dir)
        label = run_dir.name
        if "ell" in summary:
            label = f"{label} (ell={summary['ell']:g})"
        (line,) = ax.semilogy(monitor["t"], monitor["maxnorm"], label=label)
        gamma = summary.get("gamma_eps")
        if gamma:
            # gamma_eps bounds the squared norm
            ax.axhline(np.sqrt(gamma), color=line.get_color(), ls="--", lw=0.8)
    ax.set_xlabel("t")
    ax.set_ylabel(r"$\max_z |X(z,t)|$")
    ax.set_title("trajectory comparison (dashed: predicted ultimate level)")
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(out, dpi=150)
    print(f"wrote {out}")


def main():
    ap = argparse.ArgumentParser(description=__doc__,
                                 formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("runs", nargs="+", type=pathlib.Path,
                    help="run output directories (from dss-sim run --out)")
    ap.add_argument("-o", "--out", type=pathlib.Path, default=None,
                    help="output image (default: <first run>/plot.png)")
    ap.add_argument("--field", action="store_true",
                    help="include the space-time heatmap (single run only)")
    args = ap.parse_args()

    for r in args.runs:
        if not (r / "monitor.csv").exists():
            sys.exit(f"error: {r} has no monitor.csv (run dss-sim with --out first)")

    out = args.out or args.runs[0] / "plot.png"
    if len(args.runs) == 1:
        plot_single(args.runs[0], out, args.field)
    else:
        plot_overlay(args.runs, out)


if __name__ == "__main__":
    main()
