"""Spectral-function panel: A(omega) curves for several disorder strengths,
with vertical markers at the disorder-free polariton energies omega0 +- lam
taken from the CSV metadata."""

from __future__ import annotations

import argparse
import sys

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

from .csvio import SchemaError, load, meta_float, require_columns


def plot_spectra(csv_paths, out_path, normalize=True):
    """Overlay spectral functions from several spectrum CSVs (one per
    disorder strength). Writes PNG plus a PDF twin."""
    if not csv_paths:
        raise SchemaError("no input CSVs given")
    fig, ax = plt.subplots(figsize=(6.0, 3.8))
    markers = None
    for path in csv_paths:
        metadata, data = load(path)
        require_columns(path, data, ["omega", "a"])
        a = data["a"]
        if normalize and a.max() > 0:
            a = a / a.max()
        sigma = meta_float(metadata, "sigma")
        label = f"sigma = {sigma:g}" if sigma is not None else str(path)
        ax.plot(data["omega"], a, lw=1.4, label=label)
        omega0, lam = meta_float(metadata, "omega0"), meta_float(metadata, "lam")
        if markers is None and omega0 is not None and lam is not None:
            markers = (omega0 - lam, omega0 + lam)
    if markers:
        for w in markers:
            ax.axvline(w, color="black", ls=":", lw=0.9)
    ax.set_xlabel("frequency")
    ax.set_ylabel("spectral function" + (" (normalized)" if normalize else ""))
    ax.legend(frameon=False, fontsize=8)
    fig.tight_layout()
    fig.savefig(out_path, dpi=200)
    fig.savefig(str(out_path).rsplit(".", 1)[0] + ".pdf")
    plt.close(fig)
    return out_path


def main(argv=None):
    parser = argparse.ArgumentParser(description="Plot spectral functions")
    parser.add_argument("--in", dest="inputs", nargs="+", required=True)
    parser.add_argument("--out", required=True, help="output image (PNG)")
    parser.add_argument("--raw", action="store_true", help="skip normalization")
    args = parser.parse_args(argv)
    try:
        plot_spectra(args.inputs, args.out, normalize=not args.raw)
    except (SchemaError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(f"wrote {args.out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
