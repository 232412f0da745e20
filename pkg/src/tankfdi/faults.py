"""Sensor/actuator fault injection and the measurement model.

Sensor faults corrupt what is measured; the plant itself evolves unfaulted
(the feedback controller still consumes the corrupted value). Actuator
faults corrupt the flow physically delivered to the tank, while the
supervision layer only knows the commanded value.
"""
import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError
from .plant import InputVector

__all__ = [
    "SENSORS", "ACTUATORS", "CHANNELS", "FaultSpec", "NoiseConfig",
    "MeasurementFrame", "apply_fault", "single_fault", "delivered_input",
    "measure_levels", "sense",
]

SENSORS = ("S1", "S2", "S3")
ACTUATORS = ("A1", "A2")
CHANNELS = SENSORS + ACTUATORS


@dataclass(frozen=True)
class FaultSpec:
    """One multiplicative and/or additive fault ``gain * value + bias``."""

    target: str
    gain: float = 1.0
    bias: float = 0.0
    start_time: float = 0.0

    def __post_init__(self):
        if self.target not in CHANNELS:
            raise ConfigError(f"unknown fault target {self.target!r}; expected one of {CHANNELS}")
        if not 0.0 <= self.gain <= 1.0:
            raise ConfigError(f"fault gain must lie in [0, 1], got {self.gain!r}")
        if not math.isfinite(self.bias):
            raise ConfigError(f"fault bias must be finite, got {self.bias!r}")
        if not self.start_time >= 0.0:
            raise ConfigError(f"fault start_time must be >= 0, got {self.start_time!r}")

    def active(self, t):
        return t >= self.start_time


@dataclass(frozen=True)
class NoiseConfig:
    """I.i.d. Gaussian noise on the three level sensors."""

    sigma: tuple = (5e-4, 5e-4, 5e-4)
    seed: int = 0

    def __post_init__(self):
        sigma = self.sigma
        if isinstance(sigma, (int, float)):
            sigma = (float(sigma),) * 3
        sigma = tuple(float(s) for s in sigma)
        if len(sigma) != 3 or any(not (s >= 0 and math.isfinite(s)) for s in sigma):
            raise ConfigError(f"noise sigma must be three finite values >= 0, got {self.sigma!r}")
        object.__setattr__(self, "sigma", sigma)

    def rng(self):
        return np.random.default_rng(self.seed)


@dataclass(frozen=True)
class MeasurementFrame:
    """Measured levels and known actuator values at one sample instant."""

    t: float
    y1s: float
    y2s: float
    y3s: float
    u1m: float
    u2m: float

    @property
    def y(self):
        return (self.y1s, self.y2s, self.y3s)

    @property
    def u(self):
        return (self.u1m, self.u2m)

    def zeta(self):
        """The measurement vector subject to faults, ``(y1s, y2s, y3s, u1, u2)``."""
        return np.array([self.y1s, self.y2s, self.y3s, self.u1m, self.u2m])


def apply_fault(true_value, spec, t, channel=None):
    """Return the value seen on ``channel`` at time ``t``.

    ``channel`` defaults to ``spec.target``; a fault on another channel, a
    missing spec or ``t < start_time`` leave the value untouched.
    """
    if spec is None:
        return true_value
    if channel is not None and channel != spec.target:
        return true_value
    if not spec.active(t):
        return true_value
    return spec.gain * true_value + spec.bias


def single_fault(faults):
    """Enforce the one-fault-at-a-time hypothesis.

    Accepts ``None``, a :class:`FaultSpec` or a sequence of them and returns
    the single fault (or ``None``).
    """
    if faults is None or isinstance(faults, FaultSpec):
        return faults
    faults = list(faults)
    if len(faults) > 1:
        raise ConfigError(
            f"only one fault per scenario is allowed, got {len(faults)}: "
            + ", ".join(f.target for f in faults))
    return faults[0] if faults else None


def delivered_input(u_command, fault, t):
    """Flow actually delivered by the pumps for a commanded input."""
    return InputVector(apply_fault(u_command.u1, fault, t, "A1"),
                       apply_fault(u_command.u2, fault, t, "A2"))


def measure_levels(state, fault, noise, rng):
    """Faulted, noisy readings of the three level sensors.

    No random numbers are drawn for a channel whose sigma is zero.
    """
    out = []
    for name, x, sigma in zip(SENSORS, state.levels, noise.sigma):
        y = apply_fault(x, fault, state.t, name)
        if sigma > 0:
            y += sigma * rng.standard_normal()
        out.append(y)
    return tuple(out)


def sense(state, u_commanded, fault, noise, rng):
    """Build the :class:`MeasurementFrame` available to the supervisor.

    The actuator channels report the commanded value; an actuator fault
    shows up only in what the plant receives (see :func:`delivered_input`).
    """
    y1, y2, y3 = measure_levels(state, fault, noise, rng)
    return MeasurementFrame(state.t, y1, y2, y3, u_commanded.u1, u_commanded.u2)
