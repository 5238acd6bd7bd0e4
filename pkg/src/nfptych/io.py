"""Plain-text persistence for signals, grids, conditioning reports and traces."""

import csv

import numpy as np

from .measure import MeasurementGrid

__all__ = [
    "write_vector",
    "read_vector",
    "write_family",
    "write_grid",
    "read_grid_values",
    "write_conditioning",
    "write_trace",
]


def _writer(fh):
    return csv.writer(fh, lineterminator="\n")


def write_vector(path, v):
    """Write a complex vector as rows ``index,re,im``."""
    v = np.asarray(v, dtype=np.complex128)
    with open(path, "w", newline="") as fh:
        w = _writer(fh)
        w.writerow(("index", "re", "im"))
        for i, c in enumerate(v):
            w.writerow((i, repr(float(c.real)), repr(float(c.imag))))


def read_vector(path):
    with open(path, newline="") as fh:
        rows = list(csv.DictReader(fh))
    out = np.zeros(len(rows), dtype=np.complex128)
    for r in rows:
        out[int(r["index"])] = float(r["re"]) + 1j * float(r["im"])
    return out


def write_family(path, family):
    """Write a mask family as rows ``l,index,re,im``."""
    with open(path, "w", newline="") as fh:
        w = _writer(fh)
        w.writerow(("l", "index", "re", "im"))
        for ell, mask in enumerate(family.masks):
            for i, c in enumerate(mask):
                w.writerow((ell, i, repr(float(c.real)), repr(float(c.imag))))


def write_grid(path, grid):
    """Write a measurement grid as rows ``k,l,value,noise`` in index-set order."""
    noise = grid.noise if grid.noise is not None else np.zeros_like(grid.values)
    with open(path, "w", newline="") as fh:
        w = _writer(fh)
        w.writerow(("k", "l", "value", "noise"))
        for (k, ell), val, n in zip(grid.index_set.pairs, grid.values, noise):
            w.writerow((int(k), int(ell), repr(float(val)), repr(float(n))))


def read_grid_values(path, index_set):
    """Read a grid written by :func:`write_grid` back onto ``index_set``.

    Rows are matched by their ``(k, l)`` pair, so the file order is free.
    """
    with open(path, newline="") as fh:
        rows = list(csv.DictReader(fh))
    lookup = {(int(r["k"]), int(r["l"])): (float(r["value"]), float(r["noise"])) for r in rows}
    vals = np.array([lookup[(int(k), int(ell))] for k, ell in index_set.pairs])
    return MeasurementGrid(vals[:, 0], index_set, vals[:, 1])


def write_conditioning(path, reports):
    """Write conditioning reports as rows ``delta,d,sigma_min,sigma_max,kappa,bound``."""
    cols = ("delta", "d", "sigma_min", "sigma_max", "kappa", "bound")
    with open(path, "w", newline="") as fh:
        w = _writer(fh)
        w.writerow(cols)
        for rep in reports:
            row = rep.as_row()
            w.writerow([row[c] if isinstance(row[c], int) else repr(float(row[c])) for c in cols])


def write_trace(path, trace):
    """Write a Wirtinger flow trace as ``iteration,loss,relative_error_if_truth_known``."""
    with open(path, "w", newline="") as fh:
        w = _writer(fh)
        w.writerow(("iteration", "loss", "relative_error_if_truth_known"))
        for i, f, e in trace.rows():
            w.writerow((i, repr(float(f)), "" if e is None else repr(float(e))))
