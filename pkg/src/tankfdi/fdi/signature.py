"""Fault signature matrices and the isolability analysis built on them.

A signature matrix has one row per residue and one column per faultable
channel ``(S1, S2, S3, A1, A2)``. Column ``j`` is the alarm pattern a fault
on channel ``j`` is expected to produce. A fault is detectable when its
column is nonzero and isolable when, in addition, no other column equals
it. ``mu`` counts the isolable faults.
"""
from dataclasses import dataclass

import numpy as np

from ..errors import ConfigError
from ..faults import CHANNELS
from .residues import RESIDUE_CHANNELS
from .sensitivity import TABLE_LABELS

__all__ = ["SENSITIVITY_THRESHOLD", "SignatureMatrix", "IsolabilityReport",
           "build_signature_matrix", "analyze", "augment", "distinct_count",
           "independence", "isolate"]

#: Common threshold on sensitivity entries (not to be confused with the
#: calibrated residue thresholds used at run time).
SENSITIVITY_THRESHOLD = 0.5


@dataclass(frozen=True)
class SignatureMatrix:
    values: np.ndarray
    rows: tuple
    columns: tuple = CHANNELS

    def __post_init__(self):
        v = np.array(self.values, dtype=bool)
        v.setflags(write=False)
        object.__setattr__(self, "values", v)
        object.__setattr__(self, "rows", tuple(self.rows))
        object.__setattr__(self, "columns", tuple(self.columns))
        if v.ndim != 2 or v.shape != (len(self.rows), len(self.columns)):
            raise ConfigError(f"matrix shape {v.shape} does not match its labels")

    def column(self, name):
        return self.values[:, self.columns.index(name)]

    def as_int(self):
        return self.values.astype(int)

    def __eq__(self, other):
        if not isinstance(other, SignatureMatrix):
            return NotImplemented
        return (self.rows == other.rows and self.columns == other.columns
                and np.array_equal(self.values, other.values))

    __hash__ = None


@dataclass(frozen=True)
class IsolabilityReport:
    detectable: frozenset
    isolable: frozenset
    mu: int
    signature_classes: tuple


def _column_of_label(label):
    # "y2s''" -> "S2", "u1" -> "A1"
    if label.startswith("u"):
        return "A" + label[1]
    return "S" + label[1]


def build_signature_matrix(sens, th=SENSITIVITY_THRESHOLD):
    """Threshold a :class:`SensitivityTable` into a signature matrix.

    ``sigma_ij = 1`` when any derivative order of channel ``j`` has a
    sensitivity above ``th``. ``th`` is a scalar or an array shaped like
    ``sens.values`` (one threshold per entry).
    """
    th = np.asarray(th, dtype=float)
    if np.any(~(th > 0)):
        raise ConfigError("sensitivity threshold must be > 0")
    above = np.asarray(sens.values) > th
    out = np.zeros((above.shape[0], len(CHANNELS)), dtype=bool)
    for k, label in enumerate(TABLE_LABELS):
        out[:, CHANNELS.index(_column_of_label(label))] |= above[:, k]
    rows = tuple(f"{sens.flat_output_id}:{r}" for r in RESIDUE_CHANNELS[sens.flat_output_id])
    return SignatureMatrix(out, rows)


def _classes(values, columns):
    groups = {}
    for j, name in enumerate(columns):
        groups.setdefault(values[:, j].tobytes(), []).append(name)
    return tuple(tuple(g) for g in groups.values())


def analyze(S):
    """Detectability and isolability of every column of ``S``.

    ``S`` may also be a list of matrices, which are stacked first.
    """
    if not isinstance(S, SignatureMatrix):
        S = augment(list(S))
    v = S.values
    detectable = frozenset(c for j, c in enumerate(S.columns) if v[:, j].any())
    classes = _classes(v, S.columns)
    isolable = frozenset(g[0] for g in classes if len(g) == 1 and g[0] in detectable)
    return IsolabilityReport(detectable, isolable, len(isolable), classes)


def distinct_count(S):
    """Number of isolable faults ``mu`` of ``S``."""
    return analyze(S).mu


def augment(matrices):
    """Row-stack signature matrices that share the same columns."""
    if not matrices:
        raise ConfigError("nothing to augment")
    cols = matrices[0].columns
    for m in matrices[1:]:
        if m.columns != cols:
            raise ConfigError(f"column labels differ: {m.columns} vs {cols}")
    if len(matrices) == 1:
        return matrices[0]
    return SignatureMatrix(np.vstack([m.values for m in matrices]),
                           sum((m.rows for m in matrices), ()), cols)


def independence(S1, S2):
    """True when stacking strictly increases ``mu`` over both matrices."""
    mu = distinct_count(augment([S1, S2]))
    return mu > distinct_count(S1) and mu > distinct_count(S2)


def isolate(pattern, S):
    """Channels whose signature equals the boolean alarm ``pattern``.

    An all-zero pattern means no fault and gives the empty set; so does a
    pattern that matches no column. More than one element means the fault
    cannot be told apart.
    """
    p = np.asarray(pattern, dtype=bool)
    if p.shape != (S.values.shape[0],):
        raise ConfigError(f"pattern length {p.size} != {S.values.shape[0]} residues")
    if not p.any():
        return frozenset()
    return frozenset(c for j, c in enumerate(S.columns) if np.array_equal(S.values[:, j], p))
