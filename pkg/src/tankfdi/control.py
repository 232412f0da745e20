"""Reference trajectory, flatness feedforward and the two PI loops.

The flat output ``Z1 = (x1, x3)`` is steered along a quintic between rest
points; the flatness maps turn it into reference levels and inputs. Two
discrete PI controllers, ``C11`` on tank 1 and ``C22`` on tank 2, close the
loop around the feedforward.

The controller coefficients are applied to the error ``y_s - y_ref``. With
``y_ref - y_s`` both PI gains of the transfer functions are negative and
the loop is unstable for this plant.

Commands are pump flows in m^3/s, saturated to ``[0, u_max]``. While
saturated the stored controller output is clipped too, which keeps the
incremental integrator from winding up.
"""
import logging
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError
from .flatness import FlatOutputSample, z1_redundancy
from .plant import InputVector, PlantParams

logger = logging.getLogger(__name__)

__all__ = ["TrajectorySpec", "quintic_eval", "feedforward", "PiController",
           "C11", "C22", "default_controllers", "pi_step", "reference",
           "closed_loop_command"]

#: ``(b0, b1)`` of ``C(z) = (b0 + b1 z^-1) / (1 - z^-1)``.
C11 = (-0.001043, 0.0009565)
C22 = (-0.00104, 0.00096)


@dataclass(frozen=True)
class TrajectorySpec:
    """Rest-to-rest transition of the flat output ``(x1, x3)``."""

    z_initial: tuple = (0.20, 0.15)
    z_final: tuple = (0.35, 0.25)
    t_initial: float = 0.0
    t_final: float = 400.0

    def __post_init__(self):
        object.__setattr__(self, "z_initial", tuple(float(v) for v in self.z_initial))
        object.__setattr__(self, "z_final", tuple(float(v) for v in self.z_final))
        if not self.t_final > self.t_initial:
            raise ConfigError("trajectory needs t_final > t_initial")
        for name, (z1, z2) in (("initial", self.z_initial), ("final", self.z_final)):
            if not z1 > z2 > 0:
                raise ConfigError(f"{name} flat output {(z1, z2)} violates x1 > x3 > 0")


def quintic_eval(spec, t):
    """Reference flat output and its first two derivatives at time ``t``.

    Outside ``[t_initial, t_final]`` the endpoint is held with zero
    derivatives.
    """
    z0 = np.asarray(spec.z_initial)
    dz = np.asarray(spec.z_final) - z0
    tau = spec.t_final - spec.t_initial
    s = min(max((t - spec.t_initial) / tau, 0.0), 1.0)
    if s in (0.0, 1.0):
        return z0 + s * dz, np.zeros(2), np.zeros(2)
    p = s ** 3 * (10.0 - 15.0 * s + 6.0 * s * s)
    dp = 30.0 * s * s * (1.0 - s) ** 2 / tau
    ddp = 60.0 * s * (1.0 - s) * (1.0 - 2.0 * s) / tau ** 2
    return z0 + p * dz, dp * dz, ddp * dz


def feedforward(z, z_dot, z_ddot, params=PlantParams()):
    """Reference inputs and levels for a flat-output jet.

    Returns
    -------
    u_ref : InputVector
    x_ref : tuple of float
        Reference levels ``(x1, x2, x3)``.
    """
    rf = z1_redundancy(FlatOutputSample("Z1", z, z_dot, z_ddot), params)
    return InputVector(rf.u1z, rf.u2z), rf.y


@dataclass
class PiController:
    """Incremental realisation of ``(b0 + b1 z^-1) / (1 - z^-1)``."""

    b0: float
    b1: float
    output: float = 0.0
    prev_error: float = 0.0

    def reset(self):
        self.output = 0.0
        self.prev_error = 0.0


def pi_step(ctrl, error):
    """One controller update: ``u_k = u_{k-1} + b0 e_k + b1 e_{k-1}``."""
    ctrl.output = ctrl.output + ctrl.b0 * error + ctrl.b1 * ctrl.prev_error
    ctrl.prev_error = error
    return ctrl.output


def default_controllers():
    return PiController(*C11), PiController(*C22)


def reference(t, traj, params=PlantParams()):
    """``(u_ref, x_ref)`` of the trajectory at time ``t``."""
    return feedforward(*quintic_eval(traj, t), params)


def _saturated_loop(ctrl, error, u_ref, hi):
    v = pi_step(ctrl, error)
    u = u_ref + v
    if u > hi or u < 0.0:
        logger.debug("input saturated: %.6g not in [0, %.6g]", u, hi)
        u = min(max(u, 0.0), hi)
        # keep only the part of the increment the pump could deliver, so the
        # integral stops growing while saturated
        ctrl.output = u - u_ref
    return u


def closed_loop_command(t, frame, traj, controllers, params=PlantParams()):
    """Feedforward plus PI feedback on tanks 1 and 2, saturated.

    Only the level readings of ``frame`` are used. The PI states in
    ``controllers`` are updated in place; call once per sample period.
    """
    u_ref, x_ref = reference(t, traj, params)
    c11, c22 = controllers
    hi = params.u_limit
    u1 = _saturated_loop(c11, frame.y1s - x_ref[0], u_ref.u1, hi)
    u2 = _saturated_loop(c22, frame.y2s - x_ref[1], u_ref.u2, hi)
    return InputVector(u1, u2)
