"""Scenario files.

A scenario is an INI file. Every section except ``[scenario]`` is optional
and falls back to the library defaults::

    [scenario]
    name = case_b_s1
    flat_outputs = Z1, Z2
    horizon = 400            ; defaults to the trajectory length
    dt = 0.05                ; integrator step, must divide the sample period
    debounce = 5
    threshold_file = thresholds.csv   ; relative to this file
    out_dir = out
    eval_window = 230, 400   ; optional, see Scenario.window

    [plant]                  ; any PlantParams field
    mu13 = 8.5273e-5

    [trajectory]
    z_initial = 0.20, 0.15
    z_final = 0.35, 0.25
    t_initial = 0
    t_final = 400

    [noise]
    sigma = 5e-4             ; one value or three
    seed = 1

    [differentiator]         ; any DifferentiatorConfig field
    window_T = 80
    taylor_order_N = 3

    [fault]                  ; at most one; [fault.2] etc. are rejected
    target = S1
    gain = 0.8
    bias = 0
    start_time = 200
"""
import configparser
import dataclasses
import os

from .control import TrajectorySpec
from .differentiator import DifferentiatorConfig
from .errors import ConfigError
from .faults import FaultSpec, NoiseConfig
from .plant import PlantParams
from .simulation import Scenario

__all__ = ["load_scenario", "scenario_from_text"]


def _floats(text, n=None, key="value"):
    try:
        vals = tuple(float(v) for v in text.replace(";", ",").split(",") if v.strip())
    except ValueError:
        raise ConfigError(f"{key}: cannot parse {text!r} as numbers") from None
    if n is not None and len(vals) not in ((n,) if isinstance(n, int) else n):
        raise ConfigError(f"{key}: expected {n} values, got {len(vals)}")
    return vals


def _typed(cls, section, name):
    fields = {f.name: f for f in dataclasses.fields(cls)}
    out = {}
    for key, raw in section.items():
        if key not in fields:
            raise ConfigError(f"[{name}] unknown key {key!r}")
        default = fields[key].default
        try:
            if isinstance(default, bool):
                out[key] = section.getboolean(key)
            elif isinstance(default, int):
                out[key] = int(raw)
            elif isinstance(default, float):
                out[key] = float(raw)
            else:
                out[key] = raw.strip()
        except ValueError:
            raise ConfigError(f"[{name}] {key}: invalid value {raw!r}") from None
    return out


def _build(cp, base_dir):
    known = {"scenario", "plant", "trajectory", "noise", "differentiator"}
    faults = [s for s in cp.sections() if s == "fault" or s.startswith("fault.")]
    other = set(cp.sections()) - known - set(faults)
    if other:
        raise ConfigError(f"unknown sections: {sorted(other)}")
    if not cp.has_section("scenario"):
        raise ConfigError("missing [scenario] section")

    kw = {}
    if cp.has_section("plant"):
        kw["params"] = PlantParams(**_typed(PlantParams, cp["plant"], "plant"))
    if cp.has_section("trajectory"):
        sec = cp["trajectory"]
        t = {}
        for key in sec:
            if key in ("z_initial", "z_final"):
                t[key] = _floats(sec[key], 2, key)
            elif key in ("t_initial", "t_final"):
                t[key] = float(sec[key])
            else:
                raise ConfigError(f"[trajectory] unknown key {key!r}")
        kw["trajectory"] = TrajectorySpec(**t)
    if cp.has_section("noise"):
        sec = cp["noise"]
        extra = set(sec) - {"sigma", "seed"}
        if extra:
            raise ConfigError(f"[noise] unknown keys {sorted(extra)}")
        n = {}
        if "sigma" in sec:
            s = _floats(sec["sigma"], (1, 3), "sigma")
            n["sigma"] = s[0] if len(s) == 1 else s
        if "seed" in sec:
            n["seed"] = int(sec["seed"])
        kw["noise"] = NoiseConfig(**n)
    if cp.has_section("differentiator"):
        kw["differentiator"] = DifferentiatorConfig(
            **_typed(DifferentiatorConfig, cp["differentiator"], "differentiator"))
    specs = []
    for name in faults:
        sec = cp[name]
        f = _typed(FaultSpec, sec, name)
        if "target" not in f:
            raise ConfigError(f"[{name}] needs a target")
        specs.append(FaultSpec(**f))
    kw["fault"] = specs

    sec = cp["scenario"]
    for key in sec:
        raw = sec[key]
        if key == "name":
            kw["name"] = raw.strip()
        elif key == "flat_outputs":
            kw["flat_outputs"] = tuple(v.strip().upper() for v in raw.split(",") if v.strip())
        elif key in ("horizon", "dt"):
            kw[key] = float(raw)
        elif key == "debounce":
            kw["debounce"] = int(raw)
        elif key == "threshold_file":
            kw["threshold_file"] = os.path.normpath(os.path.join(base_dir, raw.strip()))
        elif key == "out_dir":
            kw["out_dir"] = raw.strip()
        elif key == "eval_window":
            kw["eval_window"] = _floats(raw, 2, key)
        else:
            raise ConfigError(f"[scenario] unknown key {key!r}")
    try:
        return Scenario(**kw)
    except ConfigError:
        raise
    except (TypeError, ValueError) as exc:
        raise ConfigError(str(exc)) from None


def scenario_from_text(text, base_dir="."):
    cp = configparser.ConfigParser(inline_comment_prefixes=(";", "#"))
    cp.optionxform = str
    try:
        cp.read_string(text)
    except configparser.Error as exc:
        raise ConfigError(f"malformed scenario file: {exc}") from None
    return _build(cp, base_dir)


def load_scenario(path):
    """Parse a scenario file; relative paths inside it resolve against its folder."""
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read scenario {path}: {exc}") from None
    return scenario_from_text(text, os.path.dirname(os.path.abspath(path)))
