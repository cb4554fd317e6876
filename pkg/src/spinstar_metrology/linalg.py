"""Dense complex linear algebra used by the QFI machinery.

Matrices are plain ``numpy`` arrays of dtype ``complex128``. Vectorization
is column stacking, so that ``vec(A X B) = (B^T kron A) vec(X)`` and the
anticommutator ``rho X + X rho`` maps to ``(rho^T kron I + I kron rho)``.
"""

from __future__ import annotations

from functools import reduce
from typing import NamedTuple, Sequence

import numpy as np

from .errors import DimensionMismatchError, NotHermitianError, SpinStarError

HERMITIAN_TOL = 1e-10


class HermitianEigenSystem(NamedTuple):
    eigenvalues: np.ndarray  # real, ascending
    eigenvectors: np.ndarray  # columns are eigenvectors


def as_matrix(a) -> np.ndarray:
    """Coerce to a 2-D complex array and reject non-finite entries."""
    m = np.asarray(a, dtype=np.complex128)
    if m.ndim == 1:
        m = m.reshape(-1, 1)
    if m.ndim != 2 or m.size == 0:
        raise DimensionMismatchError("non-empty 2-D array", m.shape, what="shape")
    if not np.all(np.isfinite(m)):
        raise SpinStarError("matrix has non-finite entries")
    return m


def dagger(a: np.ndarray) -> np.ndarray:
    return np.conj(np.transpose(a))


def hermiticity_residual(a: np.ndarray) -> float:
    a = np.asarray(a)
    return float(np.max(np.abs(a - dagger(a)))) if a.size else 0.0


def kron(a, b) -> np.ndarray:
    return np.kron(as_matrix(a), as_matrix(b))


def kron_all(mats: Sequence) -> np.ndarray:
    if not mats:
        return np.ones((1, 1), dtype=np.complex128)
    return reduce(np.kron, [as_matrix(m) for m in mats])


def vectorize(a) -> np.ndarray:
    """Column-stack ``a`` into a column vector."""
    return as_matrix(a).reshape(-1, 1, order="F")


def unvectorize(v, rows: int, cols: int | None = None) -> np.ndarray:
    cols = rows if cols is None else cols
    v = np.asarray(v, dtype=np.complex128).ravel()
    if v.size != rows * cols:
        raise DimensionMismatchError(rows * cols, v.size, what="vector length")
    return v.reshape(rows, cols, order="F")


def _check_dims(dim: int, dims: Sequence[int], keep) -> tuple[list[int], list[int]]:
    dims = [int(d) for d in dims]
    if any(d < 1 for d in dims):
        raise DimensionMismatchError("positive factor dimensions", dims, what="factor dims")
    expected = int(np.prod(dims))
    if dim != expected:
        raise DimensionMismatchError(expected, dim)
    keep = sorted(set(int(k) for k in keep))
    if any(k < 0 or k >= len(dims) for k in keep):
        raise DimensionMismatchError(f"indices in 0..{len(dims) - 1}", keep, what="kept factor")
    return dims, keep


def partial_trace(rho, dims: Sequence[int], keep) -> np.ndarray:
    """Trace out every factor of ``rho`` not listed in ``keep``.

    ``dims`` gives the local dimension of each tensor factor, most
    significant first. The result keeps the factors in their original order.
    """
    rho = as_matrix(rho)
    if rho.shape[0] != rho.shape[1]:
        raise DimensionMismatchError("square matrix", rho.shape, what="shape")
    dims, keep = _check_dims(rho.shape[0], dims, keep)
    n = len(dims)
    traced = [k for k in range(n) if k not in keep]
    t = rho.reshape(dims + dims)
    # contract each traced factor's row index with its column index
    letters = "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ"
    if 2 * n > len(letters):
        raise SpinStarError("too many tensor factors for partial_trace")
    row = list(letters[:n])
    col = list(letters[n : 2 * n])
    for k in traced:
        col[k] = row[k]
    out = "".join(row[k] for k in keep) + "".join(col[k] for k in keep)
    reduced = np.einsum("".join(row) + "".join(col) + "->" + out, t)
    d = int(np.prod([dims[k] for k in keep])) if keep else 1
    return reduced.reshape(d, d)


def reduced_state_of_pure(psi, dims: Sequence[int], keep) -> np.ndarray:
    """Reduced density matrix of the pure state ``psi`` on the factors ``keep``.

    Never forms the full projector, so it works for statevectors whose
    density matrix would not fit in memory.
    """
    psi = np.asarray(psi, dtype=np.complex128).ravel()
    dims, keep = _check_dims(psi.size, dims, keep)
    traced = [k for k in range(len(dims)) if k not in keep]
    t = np.transpose(psi.reshape(dims), keep + traced)
    d = int(np.prod([dims[k] for k in keep])) if keep else 1
    m = t.reshape(d, -1)
    return m @ dagger(m)


def eig_hermitian(a, tol: float = HERMITIAN_TOL) -> HermitianEigenSystem:
    a = as_matrix(a)
    if a.shape[0] != a.shape[1]:
        raise DimensionMismatchError("square matrix", a.shape, what="shape")
    res = hermiticity_residual(a)
    if res > tol:
        raise NotHermitianError(res, tol)
    w, v = np.linalg.eigh((a + dagger(a)) / 2)
    return HermitianEigenSystem(w, v)
