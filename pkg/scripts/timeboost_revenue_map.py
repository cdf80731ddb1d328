#!/usr/bin/env python3
"""Boost-fee revenue comparison over the (c/g, v/sigma) plane.

For normally distributed noise, separate sequencing out-earns a shared
sequencer exactly when 0.0684477 * v / sigma >= c / g. This script tabulates
both revenue formulas on a log grid and marks the winner per cell, which
plots into the classic threshold-line picture.

Usage:
    python scripts/timeboost_revenue_map.py --out revenue_map.csv
"""

import argparse
import csv
import sys

import numpy as np

from seqlab import timeboost_revenue_threshold


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--sigma", type=float, default=1.0, help="normal noise sigma")
    parser.add_argument("--g", type=float, default=1.0, help="boost bound g")
    parser.add_argument("--out", default="revenue_map.csv", help="output CSV path")
    args = parser.parse_args()

    rows = []
    for c_over_g in np.geomspace(1e-3, 1.0, 40):
        threshold = timeboost_revenue_threshold(args.sigma, c_over_g * args.g, args.g)
        for v in np.geomspace(0.05, 20.0, 40):
            rows.append({
                "c_over_g": c_over_g,
                "v": v,
                "shared_revenue": threshold.shared_revenue(v),
                "separate_revenue": threshold.separate_revenue(v),
                "separate_beats": threshold.separate_beats(v),
                "threshold_v": c_over_g * args.sigma / threshold.threshold_constant,
            })

    with open(args.out, "w", newline="") as handle:
        writer = csv.DictWriter(handle, fieldnames=list(rows[0]))
        writer.writeheader()
        writer.writerows(rows)
    print(f"wrote {len(rows)} rows to {args.out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
