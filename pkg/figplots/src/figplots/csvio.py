"""CSV ingestion and schema detection for the simulator's output files.

The plotting side never recomputes physics: it reads the documented CSV
schemas ('#' comment header, one name row, numeric rows) and renders
what it finds.  A file whose columns match none of the known schemas is
rejected before any figure is touched.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

KIND_SWEEP = "sweep-surface"
KIND_LINECUT = "line-cut"
KIND_DYNAMICS = "dynamics"

_REQUIRED = {
    KIND_SWEEP: ("alpha", "beta", "P", "P_prime", "P_d"),
    KIND_LINECUT: ("beta", "P", "P_prime", "P_d"),
    KIND_DYNAMICS: ("t", "P_D1", "P_D2", "P_B1", "P_B2"),
}


class SchemaError(ValueError):
    """Input file does not carry the columns the requested plot needs."""


@dataclass(frozen=True)
class Table:
    names: tuple
    columns: dict

    def __getitem__(self, name: str) -> np.ndarray:
        return self.columns[name]

    def __len__(self) -> int:
        return next(iter(self.columns.values())).size


def read_table(path: str) -> Table:
    """Parse a comma-separated file with '#' comments into named columns."""
    names = None
    rows = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            parts = [p.strip() for p in line.split(",")]
            if names is None:
                names = parts
                continue
            if len(parts) != len(names):
                raise SchemaError(
                    f"{path}:{lineno}: expected {len(names)} fields, got {len(parts)}"
                )
            try:
                rows.append([float(p) for p in parts])
            except ValueError as exc:
                raise SchemaError(f"{path}:{lineno}: non-numeric value") from exc
    if names is None:
        raise SchemaError(f"{path}: empty file, no header row")
    if not rows:
        raise SchemaError(f"{path}: header but no data rows")
    data = np.asarray(rows, dtype=float)
    return Table(tuple(names), {n: data[:, i] for i, n in enumerate(names)})


def infer_kind(names) -> str:
    """Map a column set onto one of the known plot kinds."""
    have = set(names)
    if have.issuperset(_REQUIRED[KIND_SWEEP]):
        return KIND_SWEEP
    if have.issuperset(_REQUIRED[KIND_LINECUT]) and "alpha" not in have:
        return KIND_LINECUT
    if have.issuperset(_REQUIRED[KIND_DYNAMICS]):
        return KIND_DYNAMICS
    raise SchemaError(f"columns {sorted(have)} match no known plot schema")


def require_kind(names, kind: str) -> None:
    if kind not in _REQUIRED:
        raise SchemaError(f"unknown plot kind {kind!r}")
    missing = [c for c in _REQUIRED[kind] if c not in names]
    if missing:
        raise SchemaError(f"{kind} plot needs columns {missing} not in file")
    if infer_kind(names) != kind:
        raise SchemaError(f"file schema is {infer_kind(names)!r}, job wants {kind!r}")
