"""The spin-star model: one system qubit coupled to N environment qubits.

    H = sum_m (J_m / sqrt(N)) sigma_z^m sigma_z^S

The environment starts in |+>^N and the system in cos(theta)|dn> + i sin(theta)|up>.
Basis ordering everywhere is |up> = (1, 0), |dn> = (0, 1).

The system-down branch drives environment spin m with exp(+i J_m t sigma_z / sqrt(N)),
so the two conditional fragment states are built from Omega_m(+t) (weight
cos^2 theta) and Omega_m(-t) (weight sin^2 theta).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import linalg
from .errors import DomainError, EmptyFragmentError

HALF_PI = math.pi / 2

UP = np.array([1.0, 0.0], dtype=np.complex128)
DOWN = np.array([0.0, 1.0], dtype=np.complex128)
PLUS = (UP + DOWN) / math.sqrt(2.0)


def reduce_theta(theta: float) -> float:
    """Map any angle onto [0, pi/2].

    The fragment and system populations depend on theta only through
    cos^2 and sin^2, so theta -> -theta and theta -> pi - theta are symmetries.
    """
    th = math.fmod(float(theta), math.pi)
    if th < 0:
        th += math.pi
    if th > HALF_PI:
        th = math.pi - th
    return th


@dataclass(frozen=True)
class GaussianCouplingSpec:
    mean: float = 0.5
    std: float = 0.5

    def __post_init__(self):
        if not (self.std >= 0 and math.isfinite(self.std)):
            raise DomainError(f"coupling stddev must be finite and >= 0, got {self.std}")
        if not math.isfinite(self.mean):
            raise DomainError(f"coupling mean must be finite, got {self.mean}")

    @property
    def second_moment(self) -> float:
        return self.mean**2 + self.std**2


@dataclass(frozen=True)
class CouplingSet:
    """One realization of the coupling strengths plus the ensemble moments.

    ``mean`` and ``second_moment`` are the *ensemble* values <J> and <J^2>
    used by thermodynamic-limit formulas, not sample statistics.
    """

    values: np.ndarray
    mean: float
    second_moment: float

    def __post_init__(self):
        v = np.array(self.values, dtype=float).ravel()
        if v.size < 1:
            raise DomainError("a coupling set needs at least one environment spin")
        if not np.all(np.isfinite(v)):
            raise DomainError("coupling values must be finite")
        if self.second_moment < self.mean**2 - 1e-12 * max(1.0, self.mean**2):
            raise DomainError(
                f"inconsistent moments: <J^2>={self.second_moment} < <J>^2={self.mean**2}"
            )
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @classmethod
    def from_values(cls, values, mean: Optional[float] = None,
                    second_moment: Optional[float] = None) -> "CouplingSet":
        v = np.asarray(values, dtype=float).ravel()
        if mean is None:
            mean = float(np.mean(v))
        if second_moment is None:
            second_moment = max(float(np.mean(v**2)), mean**2)
        return cls(v, float(mean), float(second_moment))

    @property
    def n_env(self) -> int:
        return int(self.values.size)


def derive_seed(master_seed: int, index: int) -> int:
    """Counter-based 64-bit seed for realization ``index`` of a run."""
    ss = np.random.SeedSequence(entropy=[int(master_seed) & (2**64 - 1), int(index)])
    return int(ss.generate_state(1, dtype=np.uint64)[0])


def sample_couplings(spec: GaussianCouplingSpec, n_env: int, seed: int) -> CouplingSet:
    if n_env < 1:
        raise DomainError(f"n_env must be >= 1, got {n_env}")
    rng = np.random.Generator(np.random.Philox(int(seed) & (2**64 - 1)))
    z = rng.standard_normal(int(n_env))
    values = spec.mean + spec.std * z
    return CouplingSet(values, spec.mean, spec.second_moment)


@dataclass(frozen=True)
class ModelPoint:
    theta: float
    time: float
    couplings: CouplingSet
    fragment_size: int

    def __post_init__(self):
        object.__setattr__(self, "theta", reduce_theta(self.theta))
        if not (self.time >= 0 and math.isfinite(self.time)):
            raise DomainError(f"time must be finite and >= 0, got {self.time}")
        k = int(self.fragment_size)
        if k != self.fragment_size or not 0 <= k <= self.couplings.n_env:
            raise DomainError(
                f"fragment size must be an integer in [0, {self.couplings.n_env}], got {self.fragment_size}"
            )
        object.__setattr__(self, "fragment_size", k)

    @property
    def n_env(self) -> int:
        return self.couplings.n_env

    @property
    def f(self) -> float:
        return self.fragment_size / self.n_env

    @property
    def fragment_couplings(self) -> np.ndarray:
        return self.couplings.values[: self.fragment_size]


@dataclass(frozen=True)
class FragmentState:
    rho: np.ndarray
    drho_dtheta: np.ndarray = field(repr=False)


def fragment_size_from_fraction(f: float, n_env: int) -> int:
    """|F| = round(f * N) with ties rounded up."""
    if not 0 <= f <= 1:
        raise DomainError(f"fragment fraction must lie in [0, 1], got {f}")
    return int(math.floor(f * n_env + 0.5))


def phases(times, couplings: CouplingSet) -> np.ndarray:
    """Single-spin phases 2 J_m t / sqrt(N), shape (len(times), N)."""
    t = np.atleast_1d(np.asarray(times, dtype=float))
    return 2.0 * np.outer(t, couplings.values) / math.sqrt(couplings.n_env)


def omega(j: float, time: float, n_env: int, sign: int = 1) -> np.ndarray:
    if n_env < 1:
        raise DomainError(f"n_env must be >= 1, got {n_env}")
    ph = np.exp(2j * sign * j * time / math.sqrt(n_env))
    return 0.5 * np.array([[1.0, ph], [np.conj(ph), 1.0]], dtype=np.complex128)


def coherence_factor(time: float, couplings: CouplingSet) -> float:
    """exp(-Gamma(t)) = prod_k cos(2 J_k t / sqrt(N)); negative values are allowed."""
    return float(np.prod(np.cos(phases(time, couplings)[0])))


def decoherence_exponent(time: float, couplings: CouplingSet) -> Optional[float]:
    """Gamma(t), or None when the finite-N coherence factor is not positive."""
    c = coherence_factor(time, couplings)
    return -math.log(c) if c > 0 else None


def gamma_thermodynamic(time: float, j2: float) -> float:
    """(t / tau_D)^2 with tau_D = 1/sqrt(2 <J^2>)."""
    if not j2 > 0:
        raise DomainError(f"<J^2> must be positive, got {j2}")
    return 2.0 * j2 * time**2


def decoherence_time(j2: float) -> float:
    if not j2 > 0:
        raise DomainError(f"<J^2> must be positive, got {j2}")
    return 1.0 / math.sqrt(2.0 * j2)


def system_state(theta: float, time: float, couplings: CouplingSet) -> np.ndarray:
    th = reduce_theta(theta)
    s, c = math.sin(th), math.cos(th)
    coh = 1j * s * c * coherence_factor(time, couplings)
    return np.array([[s * s, coh], [np.conj(coh), c * c]], dtype=np.complex128)


def system_state_derivative(theta: float, time: float, couplings: CouplingSet) -> np.ndarray:
    th = reduce_theta(theta)
    s2, c2 = math.sin(2 * th), math.cos(2 * th)
    coh = 1j * c2 * coherence_factor(time, couplings)
    return np.array([[s2, coh], [np.conj(coh), -s2]], dtype=np.complex128)


def branch_states(point: ModelPoint) -> tuple[np.ndarray, np.ndarray]:
    """Pure conditional fragment states (|phi_t>, |phi_-t>)."""
    out = []
    for sign in (1, -1):
        a = sign * point.fragment_couplings * point.time / math.sqrt(point.n_env)
        vecs = [np.exp(1j * x) * UP / math.sqrt(2) + np.exp(-1j * x) * DOWN / math.sqrt(2) for x in a]
        v = np.ones(1, dtype=np.complex128)
        for u in vecs:
            v = np.kron(v, u)
        out.append(v)
    return out[0], out[1]


def _branch_products(point: ModelPoint) -> tuple[np.ndarray, np.ndarray]:
    js = point.fragment_couplings
    plus = linalg.kron_all([omega(j, point.time, point.n_env, 1) for j in js])
    minus = linalg.kron_all([omega(j, point.time, point.n_env, -1) for j in js])
    return plus, minus


def fragment_state(point: ModelPoint) -> FragmentState:
    if point.fragment_size == 0:
        raise EmptyFragmentError()
    plus, minus = _branch_products(point)
    th = point.theta
    rho = math.cos(th) ** 2 * plus + math.sin(th) ** 2 * minus
    drho = math.sin(2 * th) * (minus - plus)
    return FragmentState(rho, drho)


def overlap_c(time: float, couplings: CouplingSet, fragment_size: int) -> float:
    """<phi_t|phi_-t> = prod_{m <= |F|} cos(2 J_m t / sqrt(N))."""
    if not 1 <= fragment_size <= couplings.n_env:
        raise DomainError(f"fragment size must lie in [1, {couplings.n_env}], got {fragment_size}")
    return float(np.prod(np.cos(phases(time, couplings)[0, :fragment_size])))


def overlap_grid(times, couplings: CouplingSet) -> np.ndarray:
    """c(t) for every prefix fragment: entry [i, k-1] is c at times[i] with |F| = k."""
    return np.cumprod(np.cos(phases(times, couplings)), axis=1)
