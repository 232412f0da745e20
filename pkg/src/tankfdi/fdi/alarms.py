"""Debounced threshold alarms and the alarm pattern fed to isolation."""
import numpy as np

from ..errors import ConfigError

__all__ = ["DEFAULT_DEBOUNCE", "alarm_stream", "window_pattern", "AlarmEvaluator"]

DEFAULT_DEBOUNCE = 5


def alarm_stream(residues, thresholds, debounce=DEFAULT_DEBOUNCE):
    """Boolean alarms, shape ``(n_samples, n_channels)``.

    A channel alarms at sample ``k`` when ``|r| > threshold`` held for the
    last ``debounce`` samples, ``k`` included. NaN never exceeds.
    """
    r = np.atleast_2d(np.asarray(residues, dtype=float))
    th = np.asarray(thresholds, dtype=float)
    if int(debounce) < 1:
        raise ConfigError("debounce must be >= 1")
    with np.errstate(invalid="ignore"):
        over = np.abs(r) > th
    run = np.zeros(over.shape[1], dtype=int)
    out = np.zeros_like(over)
    for k in range(over.shape[0]):
        run = np.where(over[k], run + 1, 0)
        out[k] = run >= debounce
    return out


def window_pattern(alarms, t, t_start=-np.inf, t_end=np.inf):
    """Channels that alarm at any sample with ``t_start <= t <= t_end``."""
    t = np.asarray(t)
    sel = (t >= t_start) & (t <= t_end)
    return np.asarray(alarms)[sel].any(axis=0)


class AlarmEvaluator:
    """Streaming version of :func:`alarm_stream` for one run."""

    def __init__(self, thresholds, debounce=DEFAULT_DEBOUNCE):
        if int(debounce) < 1:
            raise ConfigError("debounce must be >= 1")
        self.thresholds = np.asarray(thresholds, dtype=float)
        self.debounce = int(debounce)
        self._run = np.zeros(self.thresholds.size, dtype=int)

    def reset(self):
        self._run[:] = 0

    def push(self, residues):
        """Feed one residue vector; returns the current boolean pattern."""
        r = np.asarray(residues, dtype=float)
        with np.errstate(invalid="ignore"):
            over = np.abs(r) > self.thresholds
        self._run = np.where(over, self._run + 1, 0)
        return self._run >= self.debounce
