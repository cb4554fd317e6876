"""Precision of static local observables measured on a fragment.

The family studied is A_q = sum_i [q sigma_x^i + (1 - q) sigma_y^i], 0 <= q < 1.
Moments come from closed-form algebra on the single-spin expectations
x_m = cos(2 J_m t/sqrt(N)) and y_m = -sin(2 J_m t/sqrt(N)) of the +t branch
(the -t branch flips y), so nothing here builds 2^|F| matrices.

Because each spin's operator q sigma_x + (1-q) sigma_y squares to
(q^2 + (1-q)^2) I, the same-site part of <A_q^2> is (q^2 + (1-q)^2) |F|.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import spinstar
from .errors import DomainError, UnsupportedRegimeError
from .spinstar import CouplingSet, ModelPoint


@dataclass(frozen=True)
class ObservableSpec:
    q: float = 0.0

    def __post_init__(self):
        if not 0.0 <= self.q < 1.0:
            raise DomainError(f"mixing weight q must lie in [0, 1), got {self.q}")


S_Y = ObservableSpec(0.0)


@dataclass(frozen=True)
class PrecisionResult:
    variance_theta: float  # math.inf when the observable is insensitive to theta
    precision: float
    mean_a: float
    var_a: float


def local_expectations(j: float, time: float, n_env: int) -> tuple[float, float, float]:
    if n_env < 1:
        raise DomainError(f"n_env must be >= 1, got {n_env}")
    a = 2.0 * j * time / math.sqrt(n_env)
    return math.cos(a), -math.sin(a), 0.0


def _sin2(theta: float) -> float:
    th = spinstar.reduce_theta(theta)
    return 0.0 if th in (0.0, spinstar.HALF_PI) else math.sin(2 * th)


def _cos2(theta: float) -> float:
    th = spinstar.reduce_theta(theta)
    return math.cos(2 * th)


def _xy(point: ModelPoint) -> tuple[np.ndarray, np.ndarray]:
    if point.fragment_size < 1:
        raise DomainError("observables need a non-empty fragment")
    a = spinstar.phases(point.time, point.couplings)[0, : point.fragment_size]
    return np.cos(a), -np.sin(a)


def s_y_expectation(point: ModelPoint) -> float:
    _, y = _xy(point)
    return _cos2(point.theta) * float(np.sum(y))


def aq_moments(point: ModelPoint, spec: ObservableSpec = S_Y) -> tuple[float, float]:
    """(<A_q>, <A_q^2>) under the fragment state."""
    x, y = _xy(point)
    q, p = spec.q, 1.0 - spec.q
    c2 = _cos2(point.theta)
    sx, sy = float(np.sum(x)), float(np.sum(y))
    mean = q * sx + p * c2 * sy
    # i != j cross sums: (sum a)(sum b) - sum a*b
    xx = sx * sx - float(np.sum(x * x))
    yy = sy * sy - float(np.sum(y * y))
    xy = sx * sy - float(np.sum(x * y))
    second = (q * q + p * p) * point.fragment_size + q * q * xx + p * p * yy + 2 * q * p * c2 * xy
    return mean, second


def _variance_a(x, y, q, c2, s2):
    p = 1.0 - q
    local = q * q * y * y + p * p * x * x - 2 * q * p * c2 * x * y
    return np.sum(local, axis=-1) + (p * s2) ** 2 * np.sum(y, axis=-1) ** 2


def precision_finite(point: ModelPoint, spec: ObservableSpec = S_Y) -> PrecisionResult:
    """Error-propagation precision |d<A_q>/dtheta|^2 / Var(A_q) at finite N."""
    x, y = _xy(point)
    q = spec.q
    c2, s2 = _cos2(point.theta), _sin2(point.theta)
    # mixture form of the variance avoids <A^2> - <A>^2 cancellation at large |F|
    var_a = float(_variance_a(x, y, q, c2, s2))
    slope = -2.0 * s2 * (1.0 - q) * float(np.sum(y))
    mean = q * float(np.sum(x)) + (1.0 - q) * c2 * float(np.sum(y))
    return _result(slope * slope, var_a, mean)


def _result(slope_sq: float, var_a: float, mean: float) -> PrecisionResult:
    if slope_sq == 0.0:
        return PrecisionResult(math.inf, 0.0, mean, var_a)
    precision = slope_sq / var_a
    return PrecisionResult(1.0 / precision, precision, mean, var_a)


def precision_finite_grid(theta: float, times, couplings: CouplingSet,
                          spec: ObservableSpec = S_Y) -> np.ndarray:
    """Finite-N precision for all times and prefix fragments, shape (T, N)."""
    a = spinstar.phases(times, couplings)
    x, y = np.cos(a), -np.sin(a)
    q, p = spec.q, 1.0 - spec.q
    c2, s2 = _cos2(theta), _sin2(theta)
    local = q * q * y * y + p * p * x * x - 2 * q * p * c2 * x * y
    var_a = np.cumsum(local, axis=1) + (p * s2) ** 2 * np.cumsum(y, axis=1) ** 2
    slope_sq = (2.0 * s2 * p * np.cumsum(y, axis=1)) ** 2
    out = np.zeros_like(var_a)
    nz = slope_sq != 0.0
    out[nz] = slope_sq[nz] / var_a[nz]
    return out


def precision_thermodynamic(theta: float, time: float, f: float, jmean: float,
                            spec: ObservableSpec = S_Y) -> PrecisionResult:
    """Large-N limit Var(theta) = 1/4 [1 + 1/(4 t^2 sin^2(2 theta) <J>^2 f)].

    At leading order in 1/N the sigma_x admixture scales the signal and the
    dominant sigma_y noise by the same factor (1 - q), so the limit does not
    depend on q. ``spec`` is validated for its domain only.
    """
    if not 0 < f <= 1:
        raise DomainError(f"fragment fraction must lie in (0, 1], got {f}")
    if jmean == 0:
        raise UnsupportedRegimeError(
            "the thermodynamic precision for zero-mean couplings is not available"
        )
    if time < 0:
        raise DomainError(f"time must be >= 0, got {time}")
    s2 = _sin2(theta)
    k = 4.0 * time**2 * s2**2 * jmean**2 * f  # (t / tau_Y)^2
    # the moments themselves diverge with N; only the ratio has a limit
    if k == 0.0:
        return PrecisionResult(math.inf, 0.0, math.nan, math.nan)
    precision = 4.0 * k / (1.0 + k)
    return PrecisionResult(0.25 * (1.0 + 1.0 / k), precision, math.nan, math.nan)


def precision_s_y_curve(t_over_tau_y) -> np.ndarray:
    """4 / (1 + (tau_Y / t)^2) as a function of t / tau_Y."""
    u = np.asarray(t_over_tau_y, dtype=float) ** 2
    return 4.0 * u / (1.0 + u)
