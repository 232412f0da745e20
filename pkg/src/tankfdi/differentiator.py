"""Receding-horizon algebraic derivative estimation.

The j-th derivative at the newest sample ``t_k`` is a weighted sum of the
last ``M + 1`` samples::

    y^(j)(t_k) ~ (-1)^j * Ts/2 * sum_{i=1..M} (Pi_{i-1} y_{k-i+1} + Pi_i y_{k-i})

where ``Pi_i`` is the algebraic kernel evaluated at the lag ``t_i = i*Ts``
over a window of length ``T = M*Ts``. In continuous time the kernel
reproduces derivatives of polynomials up to degree ``N`` exactly at the
window end. The trapezoidal sum does not (it leaks an O(Ts^2) error and
does not even annihilate constants), so the weights receive the smallest
Euclidean correction that restores exactness on degree-``N`` polynomials.
"""
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import ConfigError

__all__ = ["DifferentiatorConfig", "kernel", "trapezoid_weights",
           "precompute_weights", "estimate", "fd_reference",
           "DerivativeEstimator"]

_MAX_LOG = 700.0


@dataclass(frozen=True)
class DifferentiatorConfig:
    """Window and expansion parameters of the estimator.

    Attributes
    ----------
    window_T : float
        Window length in seconds, an integer multiple ``M`` of ``sample_Ts``.
    sample_Ts : float
        Sample period in seconds.
    taylor_order_N : int
        Truncation order of the local Taylor expansion.
    extra_integrals_nu : int
        Number of additional integrations (smoothing).
    max_derivative : int
        Highest derivative order that will be requested.
    method : str
        ``"algebraic"`` or ``"fd"`` (central differences, one sample late).
    """

    window_T: float = 20.0
    sample_Ts: float = 1.0
    taylor_order_N: int = 2
    extra_integrals_nu: int = 2
    max_derivative: int = 2
    method: str = "algebraic"

    def __post_init__(self):
        if not (self.sample_Ts > 0 and self.window_T > 0):
            raise ConfigError("window_T and sample_Ts must be > 0")
        ratio = self.window_T / self.sample_Ts
        M = int(round(ratio))
        if abs(ratio - M) > 1e-9 * max(1.0, ratio):
            raise ConfigError(
                f"window_T={self.window_T} is not an integer multiple of sample_Ts={self.sample_Ts}")
        if self.taylor_order_N < 0 or self.extra_integrals_nu < 0:
            raise ConfigError("taylor_order_N and extra_integrals_nu must be >= 0")
        if self.taylor_order_N < self.max_derivative:
            raise ConfigError(
                f"taylor_order_N={self.taylor_order_N} < max_derivative={self.max_derivative}")
        if M < self.taylor_order_N + 2:
            raise ConfigError(f"window holds M={M} intervals; need at least N+2={self.taylor_order_N + 2}")
        if self.method not in ("algebraic", "fd"):
            raise ConfigError(f"unknown differentiation method {self.method!r}")

    @property
    def M(self):
        return int(round(self.window_T / self.sample_Ts))

    @property
    def history_length(self):
        """Number of samples needed before the first estimate."""
        return self.M + 1


def _log_abs_pow(base, exponent):
    # log|base**exponent| with 0**0 == 1; None encodes an exact zero
    if exponent == 0:
        return 0.0
    if base == 0:
        return None
    return exponent * math.log(abs(base))


def kernel(cfg, j, lags):
    """Algebraic kernel ``Pi_{jN nu}(T, t)`` at the given lags (seconds).

    Factorials are handled through ``lgamma`` so that the huge prefactor and
    the tiny powers of ``T`` never have to be formed separately.
    """
    N, nu, T = cfg.taylor_order_N, cfg.extra_integrals_nu, cfg.window_T
    if not 0 <= j <= N:
        raise ConfigError(f"derivative order j={j} outside [0, N={N}]")
    lg = math.lgamma
    log_pre = lg(N + j + nu + 2) + lg(N + 2) - (N + j + nu + 1) * math.log(T)
    out = []
    for t in np.atleast_1d(np.asarray(lags, dtype=float)):
        acc = 0.0
        for k1 in range(N - j + 1):
            for k2 in range(j + 1):
                e1 = nu + k1 + k2
                e2 = N - k1 - k2
                l1 = _log_abs_pow(T - t, e1)
                l2 = _log_abs_pow(-t, e2)
                if l1 is None or l2 is None:
                    continue
                log_den = (lg(k1 + 1) + lg(k2 + 1) + lg(N - j - k1 + 1) + lg(j - k2 + 1)
                           + lg(e2 + 1) + lg(e1 + 1) + math.log(N - k1 + 1))
                log_mag = log_pre + l1 + l2 - log_den
                if log_mag > _MAX_LOG:
                    raise ConfigError(
                        f"kernel term overflows for N={N}, nu={nu}, T={T}; use smaller N or nu")
                sign = (-1.0) ** j * ((-1.0) ** e2 if t > 0 else 1.0)
                if T - t < 0 and e1 % 2:
                    sign = -sign
                acc += sign * math.exp(log_mag)
        out.append(acc)
    return np.array(out)


def trapezoid_weights(cfg, j):
    """Weights of the raw trapezoidal sum; ``w[i]`` multiplies ``y_{k-i}``."""
    M, Ts = cfg.M, cfg.sample_Ts
    pi = kernel(cfg, j, np.arange(M + 1) * Ts)
    w = np.zeros(M + 1)
    w[:-1] += pi[:-1]
    w[1:] += pi[1:]
    return (-1.0) ** j * 0.5 * Ts * w


def _moment_matrix(cfg):
    # row n: (-s)^n / n! with s = lag / T in [0, 1]; scaling by T keeps the
    # rows comparable in size
    M, N = cfg.M, cfg.taylor_order_N
    s = -np.arange(M + 1) / M
    return np.array([s ** n / math.factorial(n) for n in range(N + 1)])


@lru_cache(maxsize=64)
def _weights_cached(cfg, j):
    w = trapezoid_weights(cfg, j)
    A = _moment_matrix(cfg)
    target = np.zeros(cfg.taylor_order_N + 1)
    target[j] = cfg.window_T ** -j
    # minimum-norm correction onto {w : A w = target}
    try:
        with np.errstate(all="ignore"):
            w = w + A.T @ np.linalg.solve(A @ A.T, target - A @ w)
    except np.linalg.LinAlgError:
        w = np.full_like(w, np.nan)
    if not np.all(np.isfinite(w)):
        raise ConfigError(
            f"differentiator weights are not finite for N={cfg.taylor_order_N}, "
            f"nu={cfg.extra_integrals_nu}, T={cfg.window_T}; use smaller N or nu")
    w.setflags(write=False)
    return w


def precompute_weights(cfg, j):
    """Convolution weights for the ``j``-th derivative (length ``M + 1``).

    ``w[0]`` multiplies the newest sample. The weights are exact for
    polynomials of degree ``<= N`` evaluated at the newest sample.
    """
    if not 0 <= j <= cfg.taylor_order_N:
        raise ConfigError(f"derivative order j={j} outside [0, N={cfg.taylor_order_N}]")
    return _weights_cached(cfg, j)


def estimate(signal_history, cfg, j):
    """Estimate the ``j``-th derivative at the newest sample.

    ``signal_history`` is ordered oldest to newest. Returns ``nan`` while
    fewer than ``M + 1`` samples are available.
    """
    h = np.asarray(signal_history, dtype=float)
    n = cfg.history_length
    if h.size < n:
        return math.nan
    if cfg.method == "fd":
        return fd_reference(h, j, cfg.sample_Ts)
    w = precompute_weights(cfg, j)
    return float(np.dot(w, h[:-n - 1:-1]))


def fd_reference(signal_history, j, Ts=1.0):
    """Second-order central difference over the last three samples.

    The estimate refers to the middle sample, one period before the newest.
    """
    h = np.asarray(signal_history, dtype=float)
    if h.size < 3:
        return math.nan
    a, b, c = h[-3], h[-2], h[-1]
    if j == 0:
        return float(b)
    if j == 1:
        return float((c - a) / (2.0 * Ts))
    if j == 2:
        return float((c - 2.0 * b + a) / Ts ** 2)
    raise ValueError(f"fd_reference supports j <= 2, got {j}")


class DerivativeEstimator:
    """Streaming estimator holding the last ``M + 1`` samples of one signal."""

    def __init__(self, cfg=DifferentiatorConfig()):
        self.cfg = cfg
        self._buf = np.zeros(cfg.history_length)
        self._count = 0
        if cfg.method == "algebraic":
            self._w = [precompute_weights(cfg, j) for j in range(cfg.max_derivative + 1)]

    @property
    def ready(self):
        return self._count >= self.cfg.history_length

    def push(self, y):
        self._buf[:-1] = self._buf[1:]
        self._buf[-1] = y
        self._count += 1

    def derivative(self, j):
        if not self.ready:
            return math.nan
        if self.cfg.method == "fd":
            return fd_reference(self._buf[-3:], j, self.cfg.sample_Ts)
        return float(np.dot(self._w[j], self._buf[::-1]))
