"""Closed-loop simulation of one scenario.

Every sample period ``Ts`` the sensors are read, the controller computes a
command, and the plant is integrated over ``[t_k, t_k + Ts)`` with that
command held constant (after the actuator fault, if any, has altered the
delivered flow).
"""
from dataclasses import dataclass, field, replace

import numpy as np

from .control import PiController, C11, C22, TrajectorySpec, closed_loop_command, reference
from .differentiator import DifferentiatorConfig
from .errors import ConfigError
from .faults import FaultSpec, NoiseConfig, delivered_input, sense, single_fault
from .flatness import FLAT_OUTPUTS
from .plant import InputVector, PlantParams, PlantState, integrate_step

__all__ = ["Scenario", "Trace", "simulate"]


@dataclass(frozen=True)
class Scenario:
    """Everything needed to reproduce one run."""

    name: str = "scenario"
    params: PlantParams = PlantParams()
    trajectory: TrajectorySpec = TrajectorySpec()
    noise: NoiseConfig = NoiseConfig()
    differentiator: DifferentiatorConfig = DifferentiatorConfig()
    fault: FaultSpec = None
    flat_outputs: tuple = ("Z1", "Z2")
    horizon: float = None
    dt: float = 0.05
    controllers: tuple = (C11, C22)
    debounce: int = 5
    threshold_file: str = None
    out_dir: str = "out"
    eval_window: tuple = None

    def __post_init__(self):
        object.__setattr__(self, "fault", single_fault(self.fault))
        fo = tuple(self.flat_outputs)
        if not fo or any(f not in FLAT_OUTPUTS for f in fo) or len(set(fo)) != len(fo):
            raise ConfigError(f"flat_outputs must be a non-empty subset of Z1, Z2; got {fo}")
        object.__setattr__(self, "flat_outputs", fo)
        if self.horizon is None:
            object.__setattr__(self, "horizon", self.trajectory.t_final)
        Ts = self.Ts
        if not self.horizon > 0:
            raise ConfigError("horizon must be > 0")
        if abs(self.horizon / Ts - round(self.horizon / Ts)) > 1e-9:
            raise ConfigError(f"horizon {self.horizon} is not a multiple of Ts={Ts}")
        if not 0 < self.dt <= Ts or abs(Ts / self.dt - round(Ts / self.dt)) > 1e-9:
            raise ConfigError(f"dt={self.dt} must divide Ts={Ts}")
        if int(self.debounce) < 1:
            raise ConfigError("debounce must be >= 1")
        for t in (self.trajectory.t_initial, self.trajectory.t_final):
            _, x = reference(t, self.trajectory, self.params)
            if not x[0] > x[2] > x[1] > 0:
                raise ConfigError(f"trajectory endpoint levels {x} violate x1 > x3 > x2 > 0")
            if max(x) > self.params.h_max:
                raise ConfigError(f"trajectory endpoint levels {x} exceed h_max")

    @property
    def t_end(self):
        return self.trajectory.t_initial + self.horizon

    @property
    def window(self):
        """Interval over which alarms form the pattern.

        Defaults to 30 s after fault onset up to the end of the run, or the
        whole run when there is no fault.
        """
        if self.eval_window is not None:
            return tuple(self.eval_window)
        if self.fault is not None:
            return (self.fault.start_time + 30.0, self.t_end)
        return (self.trajectory.t_initial, self.t_end)

    @property
    def Ts(self):
        return self.differentiator.sample_Ts

    @property
    def n_samples(self):
        return int(round(self.horizon / self.Ts)) + 1

    def with_(self, **changes):
        return replace(self, **changes)


@dataclass
class Trace:
    """Sampled record of a run; row ``k`` is time ``t[k]``."""

    t: np.ndarray
    x: np.ndarray
    y_s: np.ndarray
    u_cmd: np.ndarray
    u_applied: np.ndarray
    x_ref: np.ndarray
    u_ref: np.ndarray
    clamp_events: list = field(default_factory=list)
    fine: dict = None

    def __len__(self):
        return self.t.size


def simulate(scenario, record_fine=False):
    """Run ``scenario`` and return its :class:`Trace`.

    With ``record_fine`` the integrator grid is also kept in ``trace.fine``
    (keys ``t``, ``x`` and ``u``, the flow delivered from each grid point).
    """
    sc = scenario
    p = sc.params
    n = sc.n_samples
    substeps = int(round(sc.Ts / sc.dt))
    rng = sc.noise.rng()
    ctrls = tuple(PiController(*c) for c in sc.controllers)

    t0 = sc.trajectory.t_initial
    _, x0 = reference(t0, sc.trajectory, p)
    state = PlantState(x0[0], x0[1], x0[2], t0)

    out = {k: np.empty((n, m)) for k, m in
           (("x", 3), ("y_s", 3), ("u_cmd", 2), ("u_applied", 2), ("x_ref", 3), ("u_ref", 2))}
    t = t0 + sc.Ts * np.arange(n)
    events = []
    fine = {"t": [], "x": [], "u": []} if record_fine else None

    for k in range(n):
        tk = t[k]
        state = replace(state, t=tk)
        frame = sense(state, InputVector(0.0, 0.0), sc.fault, sc.noise, rng)
        u = closed_loop_command(tk, frame, sc.trajectory, ctrls, p)
        u_ref, x_ref = reference(tk, sc.trajectory, p)
        ua = delivered_input(u, sc.fault, tk)
        out["x"][k] = state.levels
        out["y_s"][k] = frame.y
        out["u_cmd"][k] = (u.u1, u.u2)
        out["u_applied"][k] = (ua.u1, ua.u2)
        out["x_ref"][k] = x_ref
        out["u_ref"][k] = (u_ref.u1, u_ref.u2)
        if k == n - 1:
            if record_fine:
                fine["t"].append(tk)
                fine["x"].append(state.levels)
                fine["u"].append((ua.u1, ua.u2))
            break
        for _ in range(substeps):
            if record_fine:
                fine["t"].append(state.t)
                fine["x"].append(state.levels)
                fine["u"].append((ua.u1, ua.u2))
            state = integrate_step(state, ua, sc.dt, p, events)
    if record_fine:
        fine = {key: np.asarray(v) for key, v in fine.items()}
    return Trace(t=t, clamp_events=events, fine=fine, **out)


def nominal_levels_ok(trace):
    """True when every sample stays inside configuration (C)."""
    x = trace.x
    return bool(np.all((x[:, 0] > x[:, 2]) & (x[:, 2] > x[:, 1]) & (x[:, 1] > 0)))

