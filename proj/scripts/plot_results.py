#!/usr/bin/env python3
"""Render the CSV outputs of elctl (trajectory, comparison, region)."""
import argparse
import csv
import os
import sys

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt


def read_csv(path):
    with open(path, newline="") as f:
        rows = list(csv.DictReader(f))
    return {k: [float(r[k]) for r in rows] for k in rows[0]} if rows else {}


def plot_trajectory(outdir):
    d = read_csv(os.path.join(outdir, "trajectory.csv"))
    if not d:
        sys.exit("empty trajectory.csv")
    t = d["t"]
    fig, axes = plt.subplots(2, 2, figsize=(11, 7), sharex=True)

    ax = axes[0][0]
    ax.plot(t, d["norm_e"], label="||e||")
    ax.plot(t, d["norm_de"], label="||de||")
    ax.set_ylabel("tracking errors [rad], [rad/s]")
    ax.legend()

    ax = axes[0][1]
    ax.plot(t, d["norm_tau"], label="||tau||")
    ax.plot(t, d["norm_u"], label="||u||", alpha=0.6)
    ax.set_ylabel("input [N m]")
    ax.legend()

    ax = axes[1][0]
    ax.plot(t, d["q1"], label="q1")
    ax.plot(t, d["qd1"], "--", label="qd1")
    ax.plot(t, d["q2"], label="q2")
    ax.plot(t, d["qd2"], "--", label="qd2")
    ax.set_xlabel("t [s]")
    ax.set_ylabel("position [rad]")
    ax.legend()

    ax = axes[1][1]
    ax.plot(t, d["norm_r"], label="||r||")
    ax.set_xlabel("t [s]")
    ax.set_ylabel("filtered error")
    ax.legend()

    fig.tight_layout()
    out = os.path.join(outdir, "trajectory.png")
    fig.savefig(out, dpi=130)
    print(out)


def plot_compare(outdir):
    d = read_csv(os.path.join(outdir, "compare.csv"))
    if not d:
        sys.exit("empty compare.csv")
    t = d["t"]
    fig, axes = plt.subplots(2, 1, figsize=(10, 7), sharex=True)
    axes[0].plot(t, d["proposed_norm_e"], label="proposed ||e||")
    axes[0].plot(t, d["baseline_norm_e"], label="baseline ||e||")
    axes[0].set_ylabel("tracking error [rad]")
    axes[0].legend()
    axes[1].plot(t, d["proposed_norm_tau"], label="proposed ||tau||")
    axes[1].plot(t, d["baseline_norm_u"], label="baseline ||u||")
    axes[1].set_xlabel("t [s]")
    axes[1].set_ylabel("input [N m]")
    axes[1].legend()
    fig.tight_layout()
    out = os.path.join(outdir, "compare.png")
    fig.savefig(out, dpi=130)
    print(out)


def plot_region(path):
    with open(path, newline="") as f:
        rows = list(csv.reader(f))
    header, data = rows[0], rows[1:]
    a1 = sorted({float(r[0]) for r in data})
    a2 = sorted({float(r[1]) for r in data})
    import numpy as np

    grid = np.zeros((len(a1), len(a2)))
    for r in data:
        grid[a1.index(float(r[0]))][a2.index(float(r[1]))] = float(r[2])
    fig, ax = plt.subplots(figsize=(7, 6))
    ax.pcolormesh(a2, a1, grid, shading="nearest", cmap="RdYlGn")
    ax.set_xlabel(header[1])
    ax.set_ylabel(header[0])
    ax.set_title("feasible region (green = feasible)")
    out = os.path.splitext(path)[0] + ".png"
    fig.savefig(out, dpi=130)
    print(out)


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("target", help="output directory (or region.csv with --region)")
    p.add_argument("--region", action="store_true", help="plot a region.csv file")
    args = p.parse_args()
    if args.region:
        plot_region(args.target)
    elif os.path.exists(os.path.join(args.target, "compare.csv")):
        plot_compare(args.target)
    else:
        plot_trajectory(args.target)


if __name__ == "__main__":
    main()
