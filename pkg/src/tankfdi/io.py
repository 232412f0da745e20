"""CSV output for traces, sensitivity tables and signature matrices.

Floats are written with 17 significant digits so a trace read back is
bit-identical to the one written.
"""
import csv

import numpy as np

from .errors import ConfigError
from .simulation import Trace

__all__ = ["TRACE_COLUMNS", "write_trace", "read_trace", "write_table", "write_signature"]

TRACE_COLUMNS = ("t", "x1", "x2", "x3", "y1s", "y2s", "y3s", "u1", "u2",
                 "u1_applied", "u2_applied", "x1_ref", "x2_ref", "x3_ref",
                 "u1_ref", "u2_ref")
_BLOCKS = (("x", 3), ("y_s", 3), ("u_cmd", 2), ("u_applied", 2), ("x_ref", 3), ("u_ref", 2))


def _fmt(v):
    return format(float(v), ".17g")


def write_trace(path, trace, extra=None):
    """Write ``trace`` plus optional extra columns ``{name: array}``."""
    extra = extra or {}
    cols = [trace.t[:, None]] + [getattr(trace, name) for name, _ in _BLOCKS]
    names = list(TRACE_COLUMNS)
    for name, v in extra.items():
        v = np.asarray(v, dtype=float)
        if v.shape[0] != len(trace):
            raise ValueError(f"column {name!r} has {v.shape[0]} rows, trace has {len(trace)}")
        cols.append(v.reshape(len(trace), -1))
        names.append(name)
    data = np.hstack(cols)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(names)
        for row in data:
            w.writerow([_fmt(v) for v in row])


def read_trace(path):
    """Read a trace file.

    Returns
    -------
    trace : Trace
    extra : dict
        Columns beyond the standard trace block, by name.
    """
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows or tuple(rows[0][:len(TRACE_COLUMNS)]) != TRACE_COLUMNS:
        raise ConfigError(f"{path} is not a trace file")
    header = rows[0]
    data = np.array([[float(v) for v in r] for r in rows[1:]]).reshape(-1, len(header))
    blocks = {}
    c = 1
    for name, width in _BLOCKS:
        blocks[name] = data[:, c:c + width].copy()
        c += width
    extra = {name: data[:, k] for k, name in enumerate(header) if k >= c}
    return Trace(t=data[:, 0].copy(), **blocks), extra


def write_table(path, table):
    """Write a :class:`~tankfdi.fdi.SensitivityTable` with labelled rows and columns."""
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["residue", *table.columns])
        for name, row in zip(table.rows, table.values):
            w.writerow([name, *(_fmt(v) for v in row)])


def write_signature(path, S):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["residue", *S.columns])
        for name, row in zip(S.rows, S.as_int()):
            w.writerow([name, *row])
