"""Closed-form propagation on the infinite uniform line and front checks.

The amplitude from site l to site m on the line with on-site energy 3*gamma
and hopping -sqrt(2)*gamma is

    exp(-3i gamma t) * i**(m-l) * J_{m-l}(2 sqrt(2) gamma t),

a wave travelling at speed 2*sqrt(2)*gamma.  Bessel functions are computed
here (ascending series / Miller backward recurrence) rather than borrowed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "MAX_ORDER",
    "bessel_j",
    "bessel_j_orders",
    "infinite_line_amplitude",
    "line_amplitudes",
    "uniform_line",
    "front_speed",
    "FrontReport",
    "front_speed_check",
]

MAX_ORDER = 10_000
_BIG = 1e250


def _check_x(x) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(x)):
        raise ValueError("bessel_j needs a finite argument")
    return x


def _series(n: int, x: np.ndarray) -> np.ndarray:
    # sum_k (-1)^k (x/2)^(2k+n) / (k! (k+n)!), first term via lgamma
    half = x / 2.0
    with np.errstate(divide="ignore", invalid="ignore"):
        logfirst = n * np.log(half) - math.lgamma(n + 1)
    term = np.where(half > 0, np.exp(logfirst), 1.0 if n == 0 else 0.0)
    total = term.copy()
    q = half * half
    k = 1
    while np.any(np.abs(term) > 1e-17 * np.abs(total)) and k < 500:
        term = -term * q / (k * (k + n))
        total += term
        k += 1
    return total


def _miller_start(order: int, xmax: float) -> int:
    top = max(order, xmax)
    m = int(top + 30 + 8 * top ** (1.0 / 3.0))
    return m + (m % 2)


def _miller(max_order: int, x: np.ndarray) -> np.ndarray:
    """J_0..J_max_order at each x > 0; rows are orders."""
    start = _miller_start(max_order, float(x.max()))
    out = np.zeros((max_order + 1,) + x.shape)
    j_next = np.zeros_like(x)
    j_cur = np.full_like(x, 1e-30)
    norm = np.zeros_like(x)
    for k in range(start, 0, -1):
        # j_cur holds J_k, j_next J_{k+1}
        if k <= max_order:
            out[k] = j_cur
        if k % 2 == 0:
            norm += 2.0 * j_cur
        j_prev = (2.0 * k / x) * j_cur - j_next
        j_next, j_cur = j_cur, j_prev
        big = np.abs(j_cur) > _BIG
        if np.any(big):
            scale = np.where(big, 1.0 / _BIG, 1.0)
            j_cur = j_cur * scale
            j_next = j_next * scale
            norm = norm * scale
            out[: max_order + 1] *= scale
    out[0] = j_cur
    norm += j_cur
    return out / norm


def bessel_j_orders(max_order: int, x) -> np.ndarray:
    """``J_0(x) .. J_max_order(x)`` for scalar or array ``x``.

    Rows index the order.  Negative ``x`` uses ``J_k(-x) = (-1)**k J_k(x)``.
    """
    if max_order < 0 or max_order > MAX_ORDER:
        raise ValueError(f"order must be within 0..{MAX_ORDER}")
    x = _check_x(x)
    ax = np.abs(np.atleast_1d(x))
    out = np.zeros((max_order + 1,) + ax.shape)
    zero = ax == 0
    out[0, zero] = 1.0
    pos = ~zero
    if np.any(pos):
        out[:, pos] = _miller(max_order, ax[pos])
    flip = np.atleast_1d(x) < 0
    out[1::2, flip] *= -1.0
    return out.reshape((max_order + 1,) + x.shape)


def bessel_j(order: int, x):
    """Bessel function of the first kind ``J_order(x)`` for integer order."""
    order = int(order)
    if abs(order) > MAX_ORDER:
        raise ValueError(f"|order| must be <= {MAX_ORDER}")
    x = _check_x(x)
    n = abs(order)
    ax = np.abs(np.atleast_1d(x))
    out = np.empty(ax.shape)
    # series has no cancellation when the first term already dominates
    small = ax * ax <= 4.0 * (n + 1)
    if np.any(small):
        out[small] = _series(n, ax[small])
    if np.any(~small):
        out[~small] = _miller(n, ax[~small])[n]
    sign = np.ones(ax.shape)
    if n % 2:
        sign[np.atleast_1d(x) < 0] *= -1.0
        if order < 0:
            sign *= -1.0
    out *= sign
    return float(out[0]) if x.ndim == 0 else out.reshape(x.shape)


def _i_power(k: int) -> complex:
    return (1, 1j, -1, -1j)[k % 4]


def infinite_line_amplitude(l: int, m: int, t: float, gamma: float = 1.0) -> complex:
    """``<m|exp(-iHt)|l>`` on the infinite line."""
    if t < 0:
        raise ValueError("t must be >= 0")
    k = int(m) - int(l)
    return (np.exp(-3j * gamma * t) * _i_power(k)
            * bessel_j(k, 2.0 * math.sqrt(2.0) * gamma * t))


def line_amplitudes(max_distance: int, t: float, gamma: float = 1.0) -> np.ndarray:
    """Amplitudes for offsets ``-max_distance .. max_distance`` at time ``t``."""
    if t < 0:
        raise ValueError("t must be >= 0")
    js = bessel_j_orders(max_distance, 2.0 * math.sqrt(2.0) * gamma * t)
    ks = np.arange(-max_distance, max_distance + 1)
    jk = js[np.abs(ks)] * np.where((ks < 0) & (ks % 2 == 1), -1.0, 1.0)
    phase = np.array([_i_power(k) for k in ks])
    return np.exp(-3j * gamma * t) * phase * jk


def uniform_line(sites: int, gamma: float = 1.0) -> tuple[np.ndarray, np.ndarray]:
    """Diagonal and off-diagonal of a finite piece of the uniform line."""
    return np.full(sites, 3.0 * gamma), np.full(sites - 1, -math.sqrt(2.0) * gamma)


def front_speed(gamma: float = 1.0) -> float:
    return 2.0 * math.sqrt(2.0) * gamma


@dataclass(frozen=True)
class FrontReport:
    distance: int
    gamma: float
    epsilon: float
    constant: float
    distances: tuple[int, ...]
    pre_front_sup: tuple[float, ...]
    decay_slope: float
    peak_amplitude: float
    peak_time: float
    threshold: float

    @property
    def decays(self) -> bool:
        return self.decay_slope < 0

    @property
    def peak_found(self) -> bool:
        return self.peak_amplitude >= self.threshold

    @property
    def passed(self) -> bool:
        return self.decays and self.peak_found


def _abs_amplitude(d: int, times: np.ndarray, gamma: float) -> np.ndarray:
    return np.abs(bessel_j(d, front_speed(gamma) * times))


def front_speed_check(distance: int, gamma: float = 1.0, epsilon: float = 0.05,
                      constant: float = 0.5, scales=(1, 2, 4),
                      samples: int = 2001) -> FrontReport:
    """Scan |amplitude| at separation ``distance`` before and just after the front.

    Before ``t = (1/v - epsilon) d`` the supremum must fall off with ``d``
    (negative slope of log-sup against ``d`` over ``distance * scales``).
    Within ``[d/v, (1/v + epsilon) d]`` some sample must reach
    ``constant / sqrt(d)``.  ``v = 2 sqrt(2) gamma``.
    """
    if distance < 50:
        raise ValueError("distance must be >= 50")
    if not epsilon > 0:
        raise ValueError("epsilon must be positive; the window is empty otherwise")
    if not gamma > 0:
        raise ValueError("gamma must be positive")
    inv_speed = 1.0 / front_speed(gamma)
    if epsilon >= inv_speed:
        raise ValueError("epsilon must be smaller than the inverse front speed")

    dists = tuple(int(distance * s) for s in scales)
    sups = []
    for d in dists:
        times = np.linspace(0.0, (inv_speed - epsilon) * d, samples)
        sups.append(float(_abs_amplitude(d, times, gamma).max()))
    slope = float(np.polyfit(np.array(dists, float), np.log(sups), 1)[0])

    times = np.linspace(inv_speed * distance, (inv_speed + epsilon) * distance, samples)
    amp = _abs_amplitude(distance, times, gamma)
    peak = int(np.argmax(amp))
    return FrontReport(
        distance=distance, gamma=gamma, epsilon=epsilon, constant=constant,
        distances=dists, pre_front_sup=tuple(sups), decay_slope=slope,
        peak_amplitude=float(amp[peak]), peak_time=float(times[peak]),
        threshold=constant / math.sqrt(distance),
    )
