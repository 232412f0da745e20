"""Per-channel residue thresholds calibrated on fault-free runs."""
import csv
from dataclasses import dataclass

import numpy as np

from ..errors import ConfigError

__all__ = ["SAFETY_MARGIN", "ThresholdSet", "calibrate_thresholds",
           "save_thresholds", "load_thresholds"]

SAFETY_MARGIN = 1.05


@dataclass(frozen=True)
class ThresholdSet:
    """Symmetric alarm bound ``|r| > value`` for each residue channel."""

    channels: tuple
    values: tuple

    def __post_init__(self):
        object.__setattr__(self, "channels", tuple(self.channels))
        object.__setattr__(self, "values", tuple(float(v) for v in self.values))
        if len(self.channels) != len(self.values):
            raise ConfigError("one threshold per channel is required")
        bad = [c for c, v in zip(self.channels, self.values) if not v > 0]
        if bad:
            raise ConfigError(f"thresholds must be > 0; offending channels: {bad}")

    def as_array(self, channels=None):
        """Thresholds ordered as ``channels`` (default: own order)."""
        if channels is None:
            return np.array(self.values)
        lookup = dict(zip(self.channels, self.values))
        missing = [c for c in channels if c not in lookup]
        if missing:
            raise ConfigError(f"no threshold for channels {missing}")
        return np.array([lookup[c] for c in channels])


def calibrate_thresholds(nominal_runs, channels, margin=SAFETY_MARGIN):
    """Worst case over fault-free runs, widened by ``margin``.

    Parameters
    ----------
    nominal_runs : list of array_like
        Residue traces of shape ``(n_samples, n_channels)``. NaN entries
        (warm-up, undefined samples) are ignored.
    channels : sequence of str
        Channel names matching the trace columns.
    """
    if len(nominal_runs) == 0:
        raise ConfigError("threshold calibration needs at least one nominal run")
    peak = np.zeros(len(channels))
    for run in nominal_runs:
        r = np.asarray(run, dtype=float)
        if r.ndim != 2 or r.shape[1] != len(channels):
            raise ConfigError(f"residue trace of shape {r.shape} does not match {len(channels)} channels")
        a = np.abs(r)
        a[np.isnan(a)] = 0.0
        peak = np.maximum(peak, a.max(axis=0))
    return ThresholdSet(channels, margin * peak)


def save_thresholds(ts, path):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(("channel", "threshold"))
        for c, v in zip(ts.channels, ts.values):
            w.writerow((c, f"{v:.17g}"))


def load_thresholds(path):
    with open(path, newline="") as fh:
        rows = list(csv.DictReader(fh))
    try:
        return ThresholdSet([r["channel"] for r in rows], [float(r["threshold"]) for r in rows])
    except (KeyError, ValueError) as exc:
        raise ConfigError(f"malformed threshold file {path}: {exc}") from None
