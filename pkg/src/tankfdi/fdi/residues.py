"""Residue generation: measured value minus its flatness reconstruction.

For a flat output the residues of its own sensors vanish identically, so
each flat output yields three informative channels:

* ``Z1 = (y1s, y3s)``: ``R_S2``, ``R_A1``, ``R_A2``
* ``Z2 = (y2s, y3s)``: ``R_S1``, ``R_A1``, ``R_A2``

Level residues are in metres, actuator residues in m^3/s.
"""
import math
from dataclasses import dataclass

import numpy as np

from ..differentiator import DerivativeEstimator, DifferentiatorConfig
from ..errors import DomainError
from ..faults import MeasurementFrame
from ..flatness import FLAT_OUTPUTS, FlatOutputSample, redundancy
from ..plant import PlantParams

__all__ = ["RESIDUE_CHANNELS", "STACKED_CHANNELS", "ResidueVector",
           "full_residues", "compute_residues", "ResidueGenerator",
           "residue_series"]

RESIDUE_CHANNELS = {"Z1": ("R_S2", "R_A1", "R_A2"), "Z2": ("R_S1", "R_A1", "R_A2")}
STACKED_CHANNELS = tuple(f"{fo}:{ch}" for fo in ("Z1", "Z2") for ch in RESIDUE_CHANNELS[fo])

# position of each kept channel in the full (S1, S2, S3, A1, A2) residue
_KEEP = {"Z1": (1, 3, 4), "Z2": (0, 3, 4)}


@dataclass(frozen=True)
class ResidueVector:
    flat_output_id: str
    values: tuple
    t: float = math.nan
    flagged: bool = False

    @property
    def channels(self):
        return RESIDUE_CHANNELS[self.flat_output_id]


def full_residues(frame, z_dot, z_ddot, flat_output_id, params=PlantParams()):
    """All five residues ``(R_S1, R_S2, R_S3, R_A1, R_A2)``.

    The two belonging to the flat output's own sensors are zero by
    construction.

    Raises
    ------
    DomainError
        If the flatness reconstruction is undefined for this sample.
    """
    idx = FLAT_OUTPUTS[flat_output_id]
    y = frame.y
    s = FlatOutputSample(flat_output_id, (y[idx[0]], y[idx[1]]), z_dot, z_ddot)
    rf = redundancy(s, params)
    return tuple(m - r for m, r in zip(y + frame.u, rf.y + rf.u))


def compute_residues(frame, z_dot, z_ddot, flat_output_id, params=PlantParams(),
                     previous=None):
    """Truncated residue vector of one flat output.

    ``z_dot`` and ``z_ddot`` are the estimated first and second derivatives
    of the flat output. When the reconstruction is undefined the previous
    vector is held (or NaN is returned if there is none) and the result is
    flagged.
    """
    try:
        r = full_residues(frame, z_dot, z_ddot, flat_output_id, params)
    except DomainError:
        held = previous.values if previous is not None else (math.nan,) * 3
        return ResidueVector(flat_output_id, held, frame.t, True)
    return ResidueVector(flat_output_id, tuple(r[i] for i in _KEEP[flat_output_id]), frame.t)


class ResidueGenerator:
    """Streaming residues for one or both flat outputs.

    Every measured channel (three levels, two inputs) passes through its own
    algebraic estimator. The zeroth-order estimates replace the raw samples
    on both sides of each residue, so measurement and reconstruction share
    the same window.
    """

    def __init__(self, flat_outputs=("Z1", "Z2"), cfg=DifferentiatorConfig(),
                 params=PlantParams()):
        self.flat_outputs = tuple(flat_outputs)
        self.cfg = cfg
        self.params = params
        self._est = [DerivativeEstimator(cfg) for _ in range(5)]
        self._last = {fo: None for fo in self.flat_outputs}

    @property
    def ready(self):
        return self._est[0].ready

    def push(self, frame):
        """Feed one sample; returns ``{id: ResidueVector}`` or ``None`` during warm-up."""
        for e, v in zip(self._est, frame.y + frame.u):
            e.push(v)
        if not self.ready:
            return None
        e = self._est
        smooth = MeasurementFrame(frame.t, *(x.derivative(0) for x in e))
        d1 = [x.derivative(1) for x in e[:3]]
        d2 = [x.derivative(2) for x in e[:3]]
        out = {}
        for fo in self.flat_outputs:
            i, j = FLAT_OUTPUTS[fo]
            rv = compute_residues(smooth, (d1[i], d1[j]), (d2[i], d2[j]), fo,
                                  self.params, self._last[fo])
            self._last[fo] = rv
            out[fo] = rv
        return out


def residue_series(trace, scenario):
    """Residues of a simulated trace.

    Returns
    -------
    dict
        ``id -> (values, flags)`` with ``values`` of shape ``(n, 3)`` (NaN
        during warm-up) and boolean ``flags`` marking held samples.
    """
    gen = ResidueGenerator(scenario.flat_outputs, scenario.differentiator, scenario.params)
    n = len(trace)
    out = {fo: (np.full((n, 3), np.nan), np.zeros(n, dtype=bool)) for fo in scenario.flat_outputs}
    for k in range(n):
        frame = MeasurementFrame(trace.t[k], *trace.y_s[k], *trace.u_cmd[k])
        res = gen.push(frame)
        if res is None:
            continue
        for fo, rv in res.items():
            out[fo][0][k] = rv.values
            out[fo][1][k] = rv.flagged
    return out
