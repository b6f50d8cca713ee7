#!/usr/bin/env python3
"""Plot trial-averaged sweep curves from a sweep CSV.

Usage: plot_sweep.py SWEEP_CSV [--out sweep.png]
The input is the output of `cesim sweep` (one row per strategy, request
count, and trial).
"""

import argparse
import collections
import csv

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

PANELS = [
    ("mean_sf", "mean satisfaction"),
    ("std_sf", "satisfaction spread"),
    ("entropy_fp", "fairness entropy"),
    ("utilization", "utilization"),
]


def load_curves(path):
    sums = collections.defaultdict(lambda: collections.defaultdict(float))
    counts = collections.defaultdict(lambda: collections.defaultdict(int))
    with open(path, newline="") as fh:
        for row in csv.DictReader(fh):
            key = row["strategy"]
            n = int(row["n_requests"])
            for metric, _ in PANELS:
                sums[metric][(key, n)] += float(row[metric])
            counts[key][n] += 1
    curves = {}
    for metric, _ in PANELS:
        per_strategy = collections.defaultdict(list)
        for (key, n), total in sorted(sums[metric].items(), key=lambda kv: (kv[0][0], kv[0][1])):
            per_strategy[key].append((n, total / counts[key][n]))
        curves[metric] = per_strategy
    return curves


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("csv_path", help="sweep CSV produced by `cesim sweep`")
    ap.add_argument("--out", default="sweep.png", help="output image path")
    args = ap.parse_args()

    curves = load_curves(args.csv_path)
    fig, axes = plt.subplots(2, 2, figsize=(11, 7), sharex=True)
    for ax, (metric, title) in zip(axes.flat, PANELS):
        for strategy, points in sorted(curves[metric].items()):
            ns = [n for n, _ in points]
            vs = [v for _, v in points]
            ax.plot(ns, vs, marker="o", markersize=3, label=strategy)
        ax.set_title(title)
        ax.grid(True, alpha=0.3)
    for ax in axes[1]:
        ax.set_xlabel("requests")
    axes[0][0].legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(args.out, dpi=150)
    print(f"wrote {args.out}")


if __name__ == "__main__":
    main()
