"""Standalone entry points.

    plot_sweep <csv> <outdir>   [--title ...]
    plot_dynamics <csv> <out.png> [--title ...]

plot_sweep accepts either the full sweep schema (renders three heatmaps
into the directory) or the fixed-alpha cut schema (renders one figure).
Exit codes: 0 success, 2 schema/usage error, 4 I/O failure.
"""

from __future__ import annotations

import argparse
import sys

from .csvio import KIND_DYNAMICS, SchemaError, infer_kind, read_table
from .render import PlotJob, plot_dynamics, plot_sweep

EXIT_OK = 0
EXIT_SCHEMA = 2
EXIT_IO = 4


def _fail(message: str, code: int) -> int:
    print(f"error: {message}", file=sys.stderr)
    return code


def main_sweep(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="plot_sweep",
        description="Render heatmaps (or a fixed-alpha cut) from a sweep CSV.",
    )
    parser.add_argument("csv", help="sweep or line-cut CSV")
    parser.add_argument("outdir", help="directory for the rendered images")
    parser.add_argument("--title", default="", help="figure title")
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_SCHEMA if exc.code else EXIT_OK
    try:
        kind = infer_kind(read_table(args.csv).names)
        if kind == KIND_DYNAMICS:
            raise SchemaError("dynamics CSV given to plot_sweep")
        written = plot_sweep(PlotJob(args.csv, kind, args.outdir, args.title))
    except SchemaError as exc:
        return _fail(str(exc), EXIT_SCHEMA)
    except OSError as exc:
        return _fail(str(exc), EXIT_IO)
    for path in written:
        print(path)
    return EXIT_OK


def main_dynamics(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="plot_dynamics",
        description="Render the population time-series figure from a trajectory CSV.",
    )
    parser.add_argument("csv", help="trajectory CSV")
    parser.add_argument("out", help="output image path (.png)")
    parser.add_argument("--title", default="", help="figure title")
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_SCHEMA if exc.code else EXIT_OK
    try:
        written = plot_dynamics(PlotJob(args.csv, KIND_DYNAMICS, args.out, args.title))
    except SchemaError as exc:
        return _fail(str(exc), EXIT_SCHEMA)
    except OSError as exc:
        return _fail(str(exc), EXIT_IO)
    print(written)
    return EXIT_OK
