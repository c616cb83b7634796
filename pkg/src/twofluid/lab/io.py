"""CSV snapshots and diagnostics series."""

from __future__ import annotations

import csv
from pathlib import Path

import numpy as np

from ..mesh import Field
from ..state import PRIM_NAMES, PhysParams, cons_to_prim

SERIES_HEADER = ("t", "dt", "e_i", "e_e", "e_m", "mass_i", "mass_e")


def _fmt(v) -> str:
    # repr of a Python float is the shortest round-trip string
    return repr(float(v))


def write_snapshot(path, field: Field, params: PhysParams) -> Path:
    path = Path(path)
    grid = field.grid
    prim = cons_to_prim(field.interior, params)
    if grid.dim == 1:
        coords = [grid.x]
        header = ["x"]
    else:
        X, Y = grid.coordinates()
        coords = [X.ravel(), Y.ravel()]
        header = ["x", "y"]
    prim = prim.reshape((-1, prim.shape[-1]))
    with path.open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(header + list(PRIM_NAMES))
        for i in range(prim.shape[0]):
            w.writerow([_fmt(c[i]) for c in coords] + [_fmt(v) for v in prim[i]])
    return path


def read_snapshot(path):
    """Return (header, array) with one row per cell in file order."""
    with Path(path).open(newline="") as fh:
        rows = list(csv.reader(fh))
    header = rows[0]
    data = np.array([[float(v) for v in r] for r in rows[1:]])
    return header, data


def snapshot_primitives(path, grid) -> np.ndarray:
    """Primitive states from a snapshot, reshaped to the grid's interior shape."""
    header, data = read_snapshot(path)
    ncoord = header.index(PRIM_NAMES[0])
    return data[:, ncoord:].reshape(grid.shape + (len(PRIM_NAMES),))


class SeriesWriter:
    """Appends diagnostics rows, flushing every row so partial runs stay on disk."""

    def __init__(self, path):
        self.path = Path(path)
        self._fh = self.path.open("w", newline="")
        self._w = csv.writer(self._fh)
        self._w.writerow(SERIES_HEADER)
        self._fh.flush()

    def write(self, row):
        self._w.writerow([_fmt(v) for v in row])
        self._fh.flush()

    def close(self):
        self._fh.close()

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()


def read_series(path) -> np.ndarray:
    header, data = read_snapshot(path)
    if tuple(header) != SERIES_HEADER:
        raise ValueError(f"unexpected series header {header}")
    return data.reshape((-1, len(SERIES_HEADER)))
