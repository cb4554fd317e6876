"""Quantum Fisher information of fragment and system states.

Three routes to the same number:

* ``qfi_closed_form``: 4 [1 - c(t)^2] from the branch overlap.
* ``qfi_thermodynamic``: the large-N Gaussian envelope 4 [1 - exp(-(t/tau_F)^2)].
* ``qfi_generic``: the spectral formula for an arbitrary (rho, d rho).

``qfi_vectorized`` is the literal superoperator expression with a
pseudo-inverse; it exists as an independent cross-check and is quadratic
in the Hilbert-space dimension, so keep it to small fragments.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal

import numpy as np

from . import linalg, spinstar
from .errors import DomainError, EmptyFragmentError, NotDensityMatrixError
from .spinstar import CouplingSet, ModelPoint

F_MAX = 4.0
SUPPORT_CUTOFF = 1e-12

Method = Literal["closed_form", "thermodynamic", "generic", "oracle"]


@dataclass(frozen=True)
class QfiResult:
    value: float
    method: Method

    def __float__(self):
        return self.value


@dataclass(frozen=True)
class TimescaleSet:
    tau_d: float
    tau_f: float
    tau_y: float  # math.inf when S_y carries no information


@dataclass(frozen=True)
class SldDecomposition:
    basis: tuple[np.ndarray, np.ndarray]  # (|phi_t>, |phi_t_perp>)
    matrix_2x2: np.ndarray
    full: np.ndarray


def qfi_closed_form(point: ModelPoint) -> QfiResult:
    if point.fragment_size == 0:
        return QfiResult(0.0, "closed_form")
    c = spinstar.overlap_c(point.time, point.couplings, point.fragment_size)
    return QfiResult(F_MAX * (1.0 - c * c), "closed_form")


def qfi_closed_form_grid(times, couplings: CouplingSet) -> np.ndarray:
    """Closed-form QFI for all times and prefix fragments, shape (T, N)."""
    c = spinstar.overlap_grid(times, couplings)
    return F_MAX * (1.0 - c * c)


def fragment_qfi_time(f: float, j2: float) -> float:
    """tau_F = 1 / (2 sqrt(f <J^2>))."""
    if not 0 < f <= 1:
        raise DomainError(f"fragment fraction must lie in (0, 1], got {f}")
    if not j2 > 0:
        raise DomainError(f"<J^2> must be positive, got {j2}")
    return 1.0 / (2.0 * math.sqrt(f * j2))


def qfi_thermodynamic(time: float, f: float, j2: float) -> QfiResult:
    tau_f = fragment_qfi_time(f, j2)
    return QfiResult(F_MAX * -math.expm1(-((time / tau_f) ** 2)), "thermodynamic")


def _check_density(rho: np.ndarray, tol: float = 1e-10) -> None:
    res = linalg.hermiticity_residual(rho)
    if res > tol:
        raise NotDensityMatrixError("hermiticity", res, tol)
    tr_err = abs(np.trace(rho) - 1.0)
    if tr_err > tol:
        raise NotDensityMatrixError("unit trace", tr_err, tol)


def qfi_generic(rho, drho, cutoff: float = SUPPORT_CUTOFF) -> QfiResult:
    """Spectral QFI: 2 sum_{ij} |<i|drho|j>|^2 / (l_i + l_j) over pairs with l_i + l_j > cutoff."""
    rho = linalg.as_matrix(rho)
    drho = linalg.as_matrix(drho)
    if drho.shape != rho.shape:
        raise linalg.DimensionMismatchError(rho.shape, drho.shape, what="derivative shape")
    _check_density(rho)
    res = linalg.hermiticity_residual(drho)
    if res > 1e-8:
        raise NotDensityMatrixError("derivative hermiticity", res, 1e-8)
    tr = abs(np.trace(drho))
    if tr > 1e-8:
        raise NotDensityMatrixError("derivative trace", tr, 1e-8)

    lam, u = linalg.eig_hermitian(rho)
    if lam[0] < -1e-10:
        raise NotDensityMatrixError("positivity", -lam[0], 1e-10)
    lam = np.clip(lam, 0.0, None)
    d = linalg.dagger(u) @ drho @ u
    denom = lam[:, None] + lam[None, :]
    mask = denom > cutoff
    value = 2.0 * float(np.sum(np.abs(d[mask]) ** 2 / denom[mask]))
    return QfiResult(value, "generic")


def qfi_vectorized(rho, drho, rcond: float = 1e-12) -> float:
    """2 vec(drho)^H (rho^T kron I + I kron rho)^+ vec(drho)."""
    rho = linalg.as_matrix(rho)
    drho = linalg.as_matrix(drho)
    eye = np.eye(rho.shape[0])
    sup = np.kron(rho.T, eye) + np.kron(eye, rho)
    v = linalg.vectorize(drho)
    val = linalg.dagger(v) @ np.linalg.pinv(sup, rcond=rcond, hermitian=True) @ v
    return 2.0 * float(val.real[0, 0])


def system_qfi(theta: float, time: float, couplings: CouplingSet) -> QfiResult:
    rho = spinstar.system_state(theta, time, couplings)
    drho = spinstar.system_state_derivative(theta, time, couplings)
    return QfiResult(qfi_generic(rho, drho).value, "generic")


def timescales(theta: float, f: float, moments: tuple[float, float]) -> TimescaleSet:
    jmean, j2 = moments
    if not f > 0:
        raise DomainError(f"fragment fraction must be positive, got {f}")
    tau_d = spinstar.decoherence_time(j2)
    tau_f = fragment_qfi_time(f, j2)
    th = spinstar.reduce_theta(theta)
    s2 = 0.0 if th in (0.0, spinstar.HALF_PI) else math.sin(2 * th)
    rate = abs(s2 * jmean)
    tau_y = math.inf if rate == 0 else 1.0 / (2.0 * rate * math.sqrt(f))
    return TimescaleSet(tau_d, tau_f, tau_y)


def _require_interior(theta: float) -> None:
    if not 0 < theta < spinstar.HALF_PI:
        raise DomainError(f"the SLD is singular at theta = {theta}; need 0 < theta < pi/2")


def _orthonormal_complement(phi: np.ndarray, other: np.ndarray, c: float) -> np.ndarray:
    r = other - c * phi
    norm = np.linalg.norm(r)
    if norm > 1e-8:
        r = r / norm
        r = r - np.vdot(phi, r) * phi
        return r / np.linalg.norm(r)
    # branches parallel: any unit vector orthogonal to phi completes the basis
    for k in range(phi.size):
        e = np.zeros_like(phi)
        e[k] = 1.0
        r = e - np.vdot(phi, e) * phi
        if np.linalg.norm(r) > 0.5:
            return r / np.linalg.norm(r)
    raise AssertionError("no orthogonal completion found")  # unreachable for dim >= 2


def sld(point: ModelPoint) -> SldDecomposition:
    """Symmetric logarithmic derivative in the {|phi_t>, |phi_t_perp>} basis and lifted."""
    if point.fragment_size == 0:
        raise EmptyFragmentError()
    th = point.theta
    _require_interior(th)
    c = spinstar.overlap_c(point.time, point.couplings, point.fragment_size)
    c2 = c * c
    s = math.sqrt(max(0.0, 1.0 - c2))
    tan = math.tan(th)
    l11 = 2.0 * (c2 - 1.0) * tan
    l22 = (1.0 - c2 + (1.0 + c2) * math.cos(2 * th)) / (math.sin(th) * math.cos(th))
    l12 = 2.0 * c * s * tan
    m = np.array([[l11, l12], [l12, l22]], dtype=float)

    phi_t, phi_mt = spinstar.branch_states(point)
    perp = _orthonormal_complement(phi_t, phi_mt, c)
    b = np.column_stack([phi_t, perp])
    full = b @ m @ linalg.dagger(b)
    return SldDecomposition((phi_t, perp), m, full)


def optimal_observable(point: ModelPoint) -> np.ndarray:
    """X = theta I + L / F, a locally unbiased estimator saturating the QFI bound."""
    fisher = qfi_closed_form(point).value
    if fisher <= 0.0:
        raise DomainError("QFI vanishes at this point; no observable carries information")
    decomposition = sld(point)
    dim = decomposition.full.shape[0]
    return point.theta * np.eye(dim) + decomposition.full / fisher
