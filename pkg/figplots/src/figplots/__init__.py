"""Offline figure rendering for the holonomy simulator's CSV outputs."""

from .csvio import (
    KIND_DYNAMICS,
    KIND_LINECUT,
    KIND_SWEEP,
    SchemaError,
    Table,
    infer_kind,
    read_table,
)
from .render import PlotJob, plot_dynamics, plot_sweep

__version__ = "0.1.0"

__all__ = [
    "KIND_DYNAMICS",
    "KIND_LINECUT",
    "KIND_SWEEP",
    "PlotJob",
    "SchemaError",
    "Table",
    "infer_kind",
    "plot_dynamics",
    "plot_sweep",
    "read_table",
    "__version__",
]
