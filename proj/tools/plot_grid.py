#!/usr/bin/env python3
"""Render a grid CSV from `spikedland grid` as a contour map.

Cells with |value| below --zero are drawn red. Needs numpy and matplotlib.
"""
import argparse
import csv
import json
import math

import matplotlib.pyplot as plt
import numpy as np


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("csv")
    ap.add_argument("--zero", type=float, default=1e-2)
    ap.add_argument("--png", default=None)
    args = ap.parse_args()

    with open(args.csv) as f:
        rows = list(csv.DictReader(f))
    m1 = sorted({float(r["m1"]) for r in rows})
    m2 = sorted({float(r["m2"]) for r in rows})
    z = np.full((len(m2), len(m1)), np.nan)
    i1 = {v: i for i, v in enumerate(m1)}
    i2 = {v: i for i, v in enumerate(m2)}
    for r in rows:
        v = float(r["value"])
        z[i2[float(r["m2"])], i1[float(r["m1"])]] = v if math.isfinite(v) else np.nan

    title = args.csv
    try:
        with open(args.csv + ".json") as f:
            meta = json.load(f)
        title = "lambda = %s" % meta["params"]["lambda"]
    except OSError:
        pass

    fig, ax = plt.subplots(figsize=(5, 5))
    cs = ax.contourf(m1, m2, z, levels=30, cmap="viridis")
    ax.contourf(m1, m2, np.abs(z) < args.zero, levels=[0.5, 1.5], colors=["red"])
    fig.colorbar(cs, ax=ax)
    ax.set_xlabel("m1")
    ax.set_ylabel("m2")
    ax.set_title(title)
    if args.png:
        fig.savefig(args.png, dpi=120, bbox_inches="tight")
    else:
        plt.show()


if __name__ == "__main__":
    main()
