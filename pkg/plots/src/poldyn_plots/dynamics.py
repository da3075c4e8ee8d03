"""Driven-population overlay: mean field (blue) vs exact (black dashed)
vs bare (grey), or a populations-only panel for single dynamics runs."""

from __future__ import annotations

import argparse
import sys
import warnings

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from .csvio import SchemaError, load, require_columns

COMPARE_STYLES = (
    ("p_e_meanfield", dict(color="tab:blue", lw=1.6, label="mean field")),
    ("p_e_exact", dict(color="black", ls="--", lw=1.2, label="exact")),
    ("p_e_bare", dict(color="grey", lw=1.2, alpha=0.8, label="bare molecule")),
)


def plot_dynamics(csv_paths, out_path, title=None):
    """Overlay excited-state populations from one or more dynamics CSVs.

    Files on different time grids are resampled onto the first file's grid
    (with a warning). Writes PNG plus a PDF twin.
    """
    if not csv_paths:
        raise SchemaError("no input CSVs given")
    fig, ax = plt.subplots(figsize=(6.0, 3.6))
    t_ref = None
    for path in csv_paths:
        _, data = load(path)
        require_columns(path, data, ["t"])
        t = data["t"]
        if t_ref is None:
            t_ref = t

        def series(values):
            if t.shape == t_ref.shape and np.array_equal(t, t_ref):
                return values
            warnings.warn(f"{path}: time grid differs, resampling")
            return np.interp(t_ref, t, values)

        if "p_e_meanfield" in data:
            for name, style in COMPARE_STYLES:
                require_columns(path, data, [name])
                ax.plot(t_ref, series(data[name]), **style)
        elif any(c.startswith("pop_") for c in data):
            pops = sorted(c for c in data if c.startswith("pop_"))
            for name in pops:
                ax.plot(t_ref, series(data[name]), lw=1.4, label=name)
        else:
            raise SchemaError(f"{path}: no population columns found")
    ax.set_xlabel("time")
    ax.set_ylabel("excited population")
    if title:
        ax.set_title(title)
    ax.legend(frameon=False)
    fig.tight_layout()
    fig.savefig(out_path, dpi=200)
    fig.savefig(str(out_path).rsplit(".", 1)[0] + ".pdf")
    plt.close(fig)
    return out_path


def main(argv=None):
    parser = argparse.ArgumentParser(description="Plot driven-population dynamics")
    parser.add_argument("--in", dest="inputs", nargs="+", required=True)
    parser.add_argument("--out", required=True, help="output image (PNG)")
    parser.add_argument("--title", default=None)
    args = parser.parse_args(argv)
    try:
        plot_dynamics(args.inputs, args.out, title=args.title)
    except (SchemaError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(f"wrote {args.out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
