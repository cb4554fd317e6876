"""Exact full-state reference for the spin-star model.

The Hamiltonian is diagonal in the sigma_z product basis, so evolution is a
per-amplitude phase and carries no integrator error. Qubit order is
environment spins 1..N (most significant first), then the system qubit.
Bit value 0 is |up> (z = +1), bit value 1 is |dn> (z = -1).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import linalg, qfi, spinstar
from .errors import DimensionMismatchError, DomainError
from .errors import SizeCapError
from .observables import ObservableSpec
from .qfi import QfiResult
from .spinstar import CouplingSet

MAX_QUBITS = 13
FD_STEP = 1e-6

SIGMA_X = np.array([[0, 1], [1, 0]], dtype=np.complex128)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=np.complex128)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=np.complex128)


@dataclass(frozen=True)
class PureState:
    n_qubits: int
    amplitudes: np.ndarray

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))


def _check_size(n_env: int) -> None:
    if n_env < 1:
        raise DomainError(f"n_env must be >= 1, got {n_env}")
    if n_env + 1 > MAX_QUBITS:
        raise SizeCapError(n_env + 1, MAX_QUBITS)


def _z_signs(n_qubits: int) -> np.ndarray:
    idx = np.arange(2**n_qubits)
    bits = (idx[:, None] >> np.arange(n_qubits - 1, -1, -1)) & 1
    return 1 - 2 * bits


def build_initial(theta: float, n_env: int) -> PureState:
    _check_size(n_env)
    system = math.cos(theta) * spinstar.DOWN + 1j * math.sin(theta) * spinstar.UP
    env = np.full(2**n_env, 2.0 ** (-n_env / 2), dtype=np.complex128)
    return PureState(n_env + 1, np.kron(env, system))


def evolve(state: PureState, time: float, couplings: CouplingSet) -> PureState:
    if couplings.n_env != state.n_qubits - 1:
        raise DimensionMismatchError(state.n_qubits - 1, couplings.n_env, what="environment size")
    z = _z_signs(state.n_qubits)
    energy = (z[:, :-1] @ couplings.values) * z[:, -1] / math.sqrt(couplings.n_env)
    return PureState(state.n_qubits, state.amplitudes * np.exp(-1j * time * energy))


def evolved_state(theta: float, time: float, couplings: CouplingSet) -> PureState:
    return evolve(build_initial(theta, couplings.n_env), time, couplings)


def oracle_fragment_state(theta: float, time: float, couplings: CouplingSet,
                          fragment_size: int) -> np.ndarray:
    n = couplings.n_env
    _check_size(n)
    if not 0 <= fragment_size <= n:
        raise DomainError(f"fragment size must lie in [0, {n}], got {fragment_size}")
    psi = evolved_state(theta, time, couplings)
    return linalg.reduced_state_of_pure(psi.amplitudes, [2] * (n + 1), range(fragment_size))


def oracle_system_state(theta: float, time: float, couplings: CouplingSet) -> np.ndarray:
    n = couplings.n_env
    _check_size(n)
    psi = evolved_state(theta, time, couplings)
    return linalg.reduced_state_of_pure(psi.amplitudes, [2] * (n + 1), [n])


def oracle_fragment_derivative(theta, time, couplings, fragment_size, step=FD_STEP):
    plus = oracle_fragment_state(theta + step, time, couplings, fragment_size)
    minus = oracle_fragment_state(theta - step, time, couplings, fragment_size)
    return (plus - minus) / (2.0 * step)


def oracle_qfi(theta: float, time: float, couplings: CouplingSet, fragment_size: int) -> QfiResult:
    if not 0 < theta < spinstar.HALF_PI:
        raise DomainError(f"oracle QFI needs 0 < theta < pi/2, got {theta}")
    if fragment_size == 0:
        return QfiResult(0.0, "oracle")
    rho = oracle_fragment_state(theta, time, couplings, fragment_size)
    drho = oracle_fragment_derivative(theta, time, couplings, fragment_size)
    return QfiResult(qfi.qfi_generic(rho, drho).value, "oracle")


def site_operator(op: np.ndarray, site: int, n_sites: int) -> np.ndarray:
    return linalg.kron_all([op if k == site else np.eye(2) for k in range(n_sites)])


def collective(op: np.ndarray, n_sites: int) -> np.ndarray:
    return sum(site_operator(op, k, n_sites) for k in range(n_sites))


def aq_operator(spec: ObservableSpec, n_sites: int) -> np.ndarray:
    return spec.q * collective(SIGMA_X, n_sites) + (1.0 - spec.q) * collective(SIGMA_Y, n_sites)


def oracle_observable_moments(theta: float, time: float, couplings: CouplingSet,
                              fragment_size: int, spec: ObservableSpec) -> tuple[float, float]:
    rho = oracle_fragment_state(theta, time, couplings, fragment_size)
    a = aq_operator(spec, fragment_size)
    mean = np.trace(a @ rho).real
    second = np.trace(a @ a @ rho).real
    return float(mean), float(second)
