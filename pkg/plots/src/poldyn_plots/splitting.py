"""Splitting-versus-disorder summary curve from a scan.csv file."""

from __future__ import annotations

import argparse
import math
import sys

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from .csvio import SchemaError, load, meta_float, require_columns


def plot_splitting(csv_path, out_path):
    """Peak splitting against disorder strength; unresolved points are shown
    on the sigma axis as crosses. Writes PNG plus a PDF twin."""
    metadata, data = load(csv_path)
    require_columns(csv_path, data, ["sigma", "splitting"])
    sigma = data["sigma"]
    splitting = data["splitting"]
    lam = meta_float(metadata, "lam")

    fig, ax = plt.subplots(figsize=(5.2, 3.6))
    resolved = np.isfinite(splitting)
    ax.plot(sigma[resolved], splitting[resolved], "o-", lw=1.4, label="splitting")
    if (~resolved).any():
        ax.plot(
            sigma[~resolved], np.zeros((~resolved).sum()), "x", color="tab:red",
            label="unresolved",
        )
    if lam is not None:
        ax.axhline(2 * lam, color="black", ls=":", lw=0.9, label="2 lambda")
        ax.set_xlabel("disorder strength sigma")
    else:
        ax.set_xlabel("disorder strength")
    ax.set_ylabel("peak splitting")
    ax.legend(frameon=False, fontsize=8)
    fig.tight_layout()
    fig.savefig(out_path, dpi=200)
    fig.savefig(str(out_path).rsplit(".", 1)[0] + ".pdf")
    plt.close(fig)
    return out_path


def main(argv=None):
    parser = argparse.ArgumentParser(description="Plot splitting vs disorder")
    parser.add_argument("--in", dest="input", required=True, help="scan.csv path")
    parser.add_argument("--out", required=True, help="output image (PNG)")
    args = parser.parse_args(argv)
    try:
        plot_splitting(args.input, args.out)
    except (SchemaError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(f"wrote {args.out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
