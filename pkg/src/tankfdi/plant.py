"""Nonlinear three-tank dynamics and a fixed-step RK4 integrator.

Levels are in metres; inputs and inter-tank flows are volumetric (m^3/s),
so each level moves at ``(inflow - outflow) / tank_area``. Tanks T1 and T3
have their drain valves closed, so the only outflow to the reservoir is
through T2.

The benchmark equations are usually printed as ``dx/dtau = -Q + u``; that
is the same model written in the slow time ``tau = t / tank_area``.

Sign convention
---------------
:func:`outflow_rates` returns ``q32`` exactly as printed for the benchmark,
``mu32 * sgn(x2 - x3) * sqrt(|x3 - x2|)``, which is the flow from T2 toward
T3. :func:`dynamics` therefore uses ``dx2 = -q20 - q32 + u2`` and
``dx3 = q13 + q32``, i.e. water runs from T3 into T2 when ``x3 > x2``.
"""
import logging
import math
from dataclasses import dataclass

from .errors import ConfigError, IntegrationError, SingularConfigurationError

logger = logging.getLogger(__name__)

__all__ = [
    "PlantParams", "PlantState", "InputVector", "sgn", "outflow_rates",
    "dynamics", "level_acceleration", "integrate_step", "find_equilibrium",
]


@dataclass(frozen=True)
class PlantParams:
    """Physical constants of the DTS200-style benchmark."""

    tank_area: float = 0.0154
    pipe_area: float = 5e-5
    mu13: float = 8.5273e-5
    mu32: float = 8.5563e-5
    mu20: float = 1.5901e-4
    h_max: float = 0.62
    u_max: float = 1e-4

    def __post_init__(self):
        for name, value in vars(self).items():
            if not (math.isfinite(value) and value > 0):
                raise ConfigError(f"plant parameter {name} must be finite and > 0, got {value!r}")

    @property
    def u_limit(self):
        """Largest admissible pump flow (m^3/s)."""
        return self.u_max


@dataclass(frozen=True)
class PlantState:
    x1: float
    x2: float
    x3: float
    t: float = 0.0

    @property
    def levels(self):
        return (self.x1, self.x2, self.x3)


@dataclass(frozen=True)
class InputVector:
    u1: float
    u2: float

    def __iter__(self):
        return iter((self.u1, self.u2))


def sgn(v):
    """Sign function with ``sgn(0) == 0``."""
    if v > 0:
        return 1.0
    if v < 0:
        return -1.0
    return 0.0


def _flows(x1, x2, x3, p):
    q13 = p.mu13 * sgn(x1 - x3) * math.sqrt(abs(x1 - x3))
    q32 = p.mu32 * sgn(x2 - x3) * math.sqrt(abs(x3 - x2))
    q20 = p.mu20 * sgn(x2) * math.sqrt(abs(x2))
    return q13, q32, q20


def outflow_rates(state, params=PlantParams()):
    """Return the volumetric flows ``(q13, q32, q20)`` in m^3/s.

    ``q32`` is positive when water flows from T2 into T3.
    """
    return _flows(state.x1, state.x2, state.x3, params)


def _rhs(x1, x2, x3, u1, u2, p):
    q13, q32, q20 = _flows(x1, x2, x3, p)
    s = p.tank_area
    return ((u1 - q13) / s, (u2 - q20 - q32) / s, (q13 + q32) / s)


def dynamics(state, u, params=PlantParams()):
    """Time derivative of the three levels under input ``u``."""
    return _rhs(state.x1, state.x2, state.x3, u.u1, u.u2, params)


def _dsqrt(mu, d):
    # d/dd of mu*sgn(d)*sqrt(|d|); unbounded at d == 0
    if d == 0:
        return math.inf
    return mu / (2.0 * math.sqrt(abs(d)))


def level_acceleration(state, u, params=PlantParams()):
    """Second time derivative of the levels for a constant input.

    Obtained as ``J(x) @ f(x, u)``; the input is held constant (zero-order
    hold), so ``du/dt = 0`` inside a sample interval.
    """
    p = params
    x1, x2, x3 = state.levels
    f1, f2, f3 = _rhs(x1, x2, x3, u.u1, u.u2, p)
    g13 = _dsqrt(p.mu13, x1 - x3)
    g32 = _dsqrt(p.mu32, x3 - x2)  # flow T3 -> T2 w.r.t. (x3 - x2)
    g20 = _dsqrt(p.mu20, x2)
    s = p.tank_area
    q13_dot = g13 * (f1 - f3)
    q3to2_dot = g32 * (f3 - f2)
    q20_dot = g20 * f2
    return (-q13_dot / s, (q3to2_dot - q20_dot) / s, (q13_dot - q3to2_dot) / s)


def _rk4(x, u1, u2, dt, p):
    x1, x2, x3 = x
    k1 = _rhs(x1, x2, x3, u1, u2, p)
    h = 0.5 * dt
    k2 = _rhs(x1 + h * k1[0], x2 + h * k1[1], x3 + h * k1[2], u1, u2, p)
    k3 = _rhs(x1 + h * k2[0], x2 + h * k2[1], x3 + h * k2[2], u1, u2, p)
    k4 = _rhs(x1 + dt * k3[0], x2 + dt * k3[1], x3 + dt * k3[2], u1, u2, p)
    c = dt / 6.0
    return tuple(xi + c * (a + 2.0 * b + 2.0 * cc + d)
                 for xi, a, b, cc, d in zip(x, k1, k2, k3, k4))


def integrate_step(state, u, dt, params=PlantParams(), events=None):
    """Advance ``state`` by one classical RK4 step of length ``dt``.

    Levels are clamped to ``[0, h_max]`` afterwards. Each clamp is logged
    and, when ``events`` is a list, appended to it as ``(t, name, value)``.

    Raises
    ------
    IntegrationError
        If a level is not finite after the step.
    """
    if not dt > 0:
        raise ConfigError(f"dt must be > 0, got {dt!r}")
    t_new = state.t + dt
    x = _rk4(state.levels, u.u1, u.u2, dt, params)
    out = []
    for name, v in zip(("x1", "x2", "x3"), x):
        if not math.isfinite(v):
            raise IntegrationError(name, v, t_new)
        if v < 0.0 or v > params.h_max:
            clamped = min(max(v, 0.0), params.h_max)
            logger.warning("clamped %s=%.6g to %.6g at t=%.3f s", name, v, clamped, t_new)
            if events is not None:
                events.append((t_new, name, v))
            v = clamped
        out.append(v)
    return PlantState(out[0], out[1], out[2], t_new)


def find_equilibrium(x1, x3, params=PlantParams()):
    """Equilibrium level ``x2`` and input for prescribed ``x1`` and ``x3``.

    The T1->T3 flow must equal the T3->T2 flow, which gives ``x2`` in closed
    form; the inputs then balance the remaining outflows.

    Returns
    -------
    x2 : float
    u : InputVector
    """
    p = params
    if not (x1 > x3 > 0):
        raise SingularConfigurationError(
            "x1 - x3", x1 - x3,
            f"equilibrium requires x1 > x3 > 0, got x1={x1!r}, x3={x3!r}")
    q13 = p.mu13 * math.sqrt(x1 - x3)
    x2 = x3 - (q13 / p.mu32) ** 2
    if not x2 > 0:
        raise SingularConfigurationError(
            "x2", x2, f"no equilibrium with x2 > 0 for x1={x1!r}, x3={x3!r}")
    u1 = q13
    u2 = p.mu20 * math.sqrt(x2) - p.mu32 * math.sqrt(x3 - x2)
    return x2, InputVector(u1, u2)
