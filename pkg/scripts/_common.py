"""Shared helpers for the figure scripts: argument parsing and optional plotting."""

import argparse
from pathlib import Path


def parse_args(description, default_out="figures"):
    parser = argparse.ArgumentParser(description=description)
    parser.add_argument("--out-dir", type=Path, default=Path(default_out))
    parser.add_argument("--no-plot", action="store_true", help="write data files only")
    args = parser.parse_args()
    args.out_dir.mkdir(parents=True, exist_ok=True)
    return args


def pyplot(args):
    """matplotlib.pyplot with a non-interactive backend, or None when unavailable."""
    if args.no_plot:
        return None
    try:
        import matplotlib

        matplotlib.use("Agg")
        import matplotlib.pyplot as plt
    except ImportError:
        print("matplotlib not installed; skipping the plot")
        return None
    return plt
