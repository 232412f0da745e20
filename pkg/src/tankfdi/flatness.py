"""Analytical redundancy from the two flat outputs of the three-tank system.

``Z1 = (x1, x3)`` and ``Z2 = (x2, x3)`` are both flat: every level and
input can be rebuilt from the measured flat output and its first two time
derivatives. The maps below return that reconstruction; the components
measured by the flat output's own sensors are passed through unchanged.

Internally rates are taken in the slow time ``tau = t / tank_area``
(``dz/dtau = tank_area * dz/dt``), in which the balance equations read
``dx/dtau = u - Q`` with volumetric flows. Callers pass ordinary time
derivatives; the rebuilt inputs are pump flows in m^3/s.
"""
import math
from dataclasses import dataclass

from .errors import DomainError
from .plant import PlantParams

__all__ = ["FLAT_OUTPUTS", "FlatOutputSample", "RedundantFrame",
           "z1_redundancy", "z2_redundancy", "redundancy"]

#: Level-sensor indices (0-based) measuring each flat output.
FLAT_OUTPUTS = {"Z1": (0, 2), "Z2": (1, 2)}


@dataclass(frozen=True)
class FlatOutputSample:
    """A measured flat output with its first and second time derivatives."""

    id: str
    z: tuple
    z_dot: tuple
    z_ddot: tuple

    def __post_init__(self):
        if self.id not in FLAT_OUTPUTS:
            raise ValueError(f"unknown flat output {self.id!r}")
        for name in ("z", "z_dot", "z_ddot"):
            v = tuple(float(c) for c in getattr(self, name))
            if len(v) != 2:
                raise ValueError(f"{name} must have two components")
            object.__setattr__(self, name, v)


@dataclass(frozen=True)
class RedundantFrame:
    y1z: float
    y2z: float
    y3z: float
    u1z: float
    u2z: float

    @property
    def y(self):
        return (self.y1z, self.y2z, self.y3z)

    @property
    def u(self):
        return (self.u1z, self.u2z)


def _root(argument, value):
    if value < 0 or math.isnan(value):
        raise DomainError(argument, value)
    return math.sqrt(value)


def z1_redundancy(s, params=PlantParams()):
    """Rebuild levels and inputs from ``Z1 = (y1s, y3s)``.

    Raises
    ------
    DomainError
        If ``z1 <= z2`` or the rebuilt ``y2z`` leaves ``[0, z2]``.
    """
    p = params
    S = p.tank_area
    z1, z2 = s.z
    z1d, z2d = S * s.z_dot[0], S * s.z_dot[1]
    z2dd = S * S * s.z_ddot[1]
    d = z1 - z2
    if not d > 0:
        raise DomainError("z1 - z2", d)
    r = math.sqrt(d)
    # a = flow T3 -> T2 required by the x3 balance
    a = p.mu13 * r - z2d
    a_dot = p.mu13 * (z1d - z2d) / (2.0 * r) - z2dd
    y2z = z2 - a * a / p.mu32 ** 2
    if not 0.0 <= y2z <= z2:
        raise DomainError("y2z", y2z, f"rebuilt level y2z = {y2z!r} outside [0, z2 = {z2!r}]")
    y2z_dot = z2d - 2.0 * a * a_dot / p.mu32 ** 2
    u1z = z1d + p.mu13 * r
    u2z = (y2z_dot - p.mu32 * _root("z2 - y2z", z2 - y2z)
           + p.mu20 * _root("y2z", y2z))
    return RedundantFrame(z1, y2z, z2, u1z, u2z)


def z2_redundancy(s, params=PlantParams()):
    """Rebuild levels and inputs from ``Z2 = (y2s, y3s)``.

    Raises
    ------
    DomainError
        If ``z22 < z21`` or ``z21 < 0``.
    """
    p = params
    S = p.tank_area
    z21, z22 = s.z
    z21d, z22d = S * s.z_dot[0], S * s.z_dot[1]
    z22dd = S * S * s.z_ddot[1]
    d = z22 - z21
    r = _root("z22 - z21", d)
    sq21 = _root("z21", z21)
    b = z22d + p.mu32 * r
    # at d == 0 the chain-rule term has no finite limit unless both rates agree;
    # take it as zero there
    r_dot = p.mu32 * (z22d - z21d) / (2.0 * r) if r > 0 else 0.0
    b_dot = z22dd + r_dot
    y1z = z22 + b * b / p.mu13 ** 2
    y1z_dot = z22d + 2.0 * b * b_dot / p.mu13 ** 2
    u1z = y1z_dot + p.mu13 * _root("y1z - z22", y1z - z22)
    u2z = z21d + p.mu20 * sq21 - p.mu32 * r
    return RedundantFrame(y1z, z21, z22, u1z, u2z)


def redundancy(s, params=PlantParams()):
    """Dispatch on ``s.id``."""
    if s.id == "Z1":
        return z1_redundancy(s, params)
    return z2_redundancy(s, params)
