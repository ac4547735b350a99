#!/usr/bin/env python3
"""Quick matplotlib views of catlab CSV output.

Example:
    python3 scripts/plot_results.py out/fig9.csv --x M --metric sdc_capacity --series d
"""

import argparse
import csv
import sys
from collections import defaultdict


def parse_params(s):
    out = {}
    for item in s.split(";"):
        if "=" in item:
            k, v = item.split("=", 1)
            out[k] = v
    return out


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("csv_path")
    ap.add_argument("--metric", required=True, help="metric column to plot")
    ap.add_argument("--x", required=True, help="param key for the x axis")
    ap.add_argument("--series", help="param key splitting the data into curves")
    ap.add_argument("--logx", action="store_true")
    ap.add_argument("--logy", action="store_true")
    ap.add_argument("-o", "--output", help="write PNG instead of showing a window")
    args = ap.parse_args()

    series = defaultdict(list)
    with open(args.csv_path, newline="") as fh:
        for row in csv.DictReader(fh):
            if row["metric"] != args.metric or row["value"] == "infeasible":
                continue
            params = parse_params(row["params"])
            if args.x not in params:
                continue
            key = params.get(args.series, "") if args.series else ""
            series[key].append((float(params[args.x]), float(row["value"])))

    if not series:
        sys.exit(f"no rows with metric '{args.metric}' and param '{args.x}'")

    import matplotlib

    if args.output:
        matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    for key in sorted(series):
        pts = sorted(series[key])
        label = f"{args.series}={key}" if args.series else args.metric
        plt.plot([p[0] for p in pts], [p[1] for p in pts], marker="o", label=label)
    if args.logx:
        plt.xscale("log")
    if args.logy:
        plt.yscale("log")
    plt.xlabel(args.x)
    plt.ylabel(args.metric)
    plt.legend()
    plt.grid(True, alpha=0.3)
    if args.output:
        plt.savefig(args.output, dpi=150, bbox_inches="tight")
        print(f"wrote {args.output}")
    else:
        plt.show()


if __name__ == "__main__":
    main()
