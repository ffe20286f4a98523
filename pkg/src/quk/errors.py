"""Exception types raised across the package."""


class QukError(Exception):
    """Base class for all package errors."""


class BudgetExceededError(QukError):
    """An enumeration would exceed its configured size cap."""


class NotUnitaryError(QukError, ValueError):
    def __init__(self, deviation: float, tol: float):
        self.deviation = deviation
        self.tol = tol
        super().__init__(f"matrix is not unitary: max|U^dag U - I| = {deviation:.3e} > {tol:.1e}")


class CommutantAmbiguityError(QukError):
    """A singular value of the commutant system sits too close to the rank threshold."""

    def __init__(self, spectrum, threshold: float):
        self.spectrum = list(spectrum)
        self.threshold = threshold
        shown = ", ".join(f"{s:.3e}" for s in self.spectrum[:8])
        super().__init__(f"ambiguous commutant rank near threshold {threshold:.1e}; smallest singular values: {shown}")


class ConsistencyError(QukError):
    """Two independent routes to the same predicate disagreed."""


class MatrixFormatError(QukError, ValueError):
    """A matrix file could not be parsed."""
