"""Exception types raised by the library."""


class SpinStarError(Exception):
    """Base class for all library errors."""


class DimensionMismatchError(SpinStarError, ValueError):
    def __init__(self, expected, actual, what="dimension"):
        self.expected = expected
        self.actual = actual
        super().__init__(f"{what} mismatch: expected {expected}, got {actual}")


class NotHermitianError(SpinStarError, ValueError):
    def __init__(self, residual, tol):
        self.residual = residual
        self.tol = tol
        super().__init__(f"matrix is not Hermitian: max|A - A^H| = {residual:.3e} > {tol:.1e}")


class NotDensityMatrixError(SpinStarError, ValueError):
    def __init__(self, invariant, value, tol):
        self.invariant = invariant
        self.value = value
        self.tol = tol
        super().__init__(f"not a valid density matrix ({invariant}): {value:.3e} exceeds {tol:.1e}")


class EmptyFragmentError(SpinStarError, ValueError):
    def __init__(self):
        super().__init__("fragment is empty (|F| = 0); its QFI is 0 by definition")


class DomainError(SpinStarError, ValueError):
    """An argument lies outside the domain of a formula."""


class UnsupportedRegimeError(SpinStarError, ValueError):
    """The requested limit is not available for these parameters."""


class SizeCapError(SpinStarError, ValueError):
    def __init__(self, n_qubits, cap):
        self.n_qubits = n_qubits
        self.cap = cap
        super().__init__(f"state of {n_qubits} qubits exceeds the exact-simulation cap of {cap}")


class ConfigError(SpinStarError, ValueError):
    """Invalid sweep configuration."""
