"""Sensitivity of the residues to each measured coordinate at an equilibrium.

Every level reading and each of its first two derivatives is treated as an
independent coordinate of the residue map, and the map is differentiated
by central finite differences.

Rates are expressed in the slow model time ``tau = t / tank_area``, the
time variable of the balance equations ``dx/dtau = u - Q``, so that the
tabulated numbers are those of that standard form. For the physical
sensitivity to ``d^k y / dt^k``, multiply the entry by ``tank_area**k``.

Closed-loop coupling
--------------------
The open residue formulas do not see the feedback paths ``y1s -> u1`` and
``y2s -> u2``. When the sensor in such a path is not part of the flat
output, a fault on it reaches the actuator residue through the
controller. In that case the entry for that sensor reading is raised to the
sensitivity of the sensor's own residue. Disable this with
``closed_loop=False``.
"""
import math
from dataclasses import dataclass

import numpy as np

from ..errors import ConfigError, SingularConfigurationError
from ..faults import MeasurementFrame
from ..flatness import FLAT_OUTPUTS
from ..plant import PlantParams
from .residues import RESIDUE_CHANNELS, _KEEP, full_residues

__all__ = ["COORDINATES", "TABLE_LABELS", "FEEDBACK_PAIRS", "SensitivityTable",
           "residue_map", "sensitivity_matrix"]

#: Every coordinate the residue maps can depend on, with its derivative order.
COORDINATES = ("y1s", "y2s", "y3s", "y1s'", "y2s'", "y3s'",
               "y1s''", "y2s''", "y3s''", "u1", "u2")
#: Columns that appear in the published tables; the rest must vanish.
TABLE_LABELS = ("y1s", "y2s", "y3s", "y1s'", "y2s'", "y3s'", "y3s''", "u1", "u2")
#: ``(input index, level index)`` pairs closed by the PI loops.
FEEDBACK_PAIRS = ((0, 0), (1, 1))

DEFAULT_EQUILIBRIUM = (0.20, 0.10, 0.15)


@dataclass(frozen=True)
class SensitivityTable:
    """``|dr_i / d zeta_j^(k)|`` for one flat output.

    ``values`` has one row per residue channel and one column per entry of
    :data:`TABLE_LABELS`; ``full`` covers all :data:`COORDINATES`.
    """

    flat_output_id: str
    equilibrium: tuple
    values: np.ndarray
    full: np.ndarray

    @property
    def rows(self):
        return RESIDUE_CHANNELS[self.flat_output_id]

    @property
    def columns(self):
        return TABLE_LABELS

    def entry(self, row, column):
        return float(self.values[self.rows.index(row), TABLE_LABELS.index(column)])


def residue_map(coords, flat_output_id, params=PlantParams()):
    """Truncated residues as a function of the coordinate vector.

    ``coords`` follows :data:`COORDINATES`; rates are in model time.
    """
    S = params.tank_area
    c = dict(zip(COORDINATES, coords))
    i, j = FLAT_OUTPUTS[flat_output_id]
    lv = ("y1s", "y2s", "y3s")
    z_dot = (c[lv[i] + "'"] / S, c[lv[j] + "'"] / S)
    z_ddot = (c[lv[i] + "''"] / S ** 2, c[lv[j] + "''"] / S ** 2)
    frame = MeasurementFrame(0.0, c["y1s"], c["y2s"], c["y3s"], c["u1"], c["u2"])
    r = full_residues(frame, z_dot, z_ddot, flat_output_id, params)
    return np.array([r[k] for k in _KEEP[flat_output_id]])


def _jacobian(x0, flat_output_id, params, step):
    J = np.empty((3, len(COORDINATES)))
    for k in range(len(COORDINATES)):
        xp = np.array(x0, dtype=float)
        xm = xp.copy()
        xp[k] += step
        xm[k] -= step
        J[:, k] = (residue_map(xp, flat_output_id, params)
                   - residue_map(xm, flat_output_id, params)) / (2.0 * step)
    return J


def sensitivity_matrix(eq=DEFAULT_EQUILIBRIUM, flat_output_id="Z1",
                       params=PlantParams(), step=1e-6, closed_loop=True):
    """Sensitivity table of one flat output at the rest point ``eq``.

    Parameters
    ----------
    eq : tuple of float
        Levels ``(x1, x2, x3)``; must satisfy ``x1 > x3 > x2 > 0``.
    step : float
        Central-difference step, in the units of each coordinate.
    closed_loop : bool
        Add the feedback coupling described in the module notes.

    Raises
    ------
    SingularConfigurationError
        If ``eq`` is outside configuration (C).
    """
    x1, x2, x3 = (float(v) for v in eq)
    if not (x1 > x3 > x2 > 0):
        raise SingularConfigurationError(
            "eq", eq, f"equilibrium {eq} violates x1 > x3 > x2 > 0")
    if flat_output_id not in FLAT_OUTPUTS:
        raise ConfigError(f"unknown flat output {flat_output_id!r}")
    if not step > 0:
        raise ConfigError("step must be > 0")
    # rest point: zero rates, inputs that balance the outflows
    p = params
    u1 = p.mu13 * math.sqrt(x1 - x3)
    u2 = p.mu20 * math.sqrt(x2) - p.mu32 * math.sqrt(x3 - x2)
    x0 = np.array([x1, x2, x3, 0, 0, 0, 0, 0, 0, u1, u2], dtype=float)

    J = np.abs(_jacobian(x0, flat_output_id, params, step))
    if closed_loop:
        rows = RESIDUE_CHANNELS[flat_output_id]
        for ui, yk in FEEDBACK_PAIRS:
            if yk in FLAT_OUTPUTS[flat_output_id]:
                continue
            own = J[rows.index(f"R_S{yk + 1}"), yk]
            r = rows.index(f"R_A{ui + 1}")
            J[r, yk] = max(J[r, yk], own)
    cols = [COORDINATES.index(lbl) for lbl in TABLE_LABELS]
    return SensitivityTable(flat_output_id, (x1, x2, x3), J[:, cols], J)
