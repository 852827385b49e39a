"""Custom exceptions for ConeLie Extremals.

This module defines the library's exceptions. Report-style operations
(validation, axiom checks, abnormal checks) return report models instead of
raising; the exceptions below signal input errors and the absence of an
extremal.
"""

from collections.abc import Sequence


class ConeLieError(Exception):
    """Base exception for all ConeLie Extremals errors.

    All custom exceptions in this package inherit from this class so callers
    can catch every library error with a single except clause.
    """
    pass


class DimensionMismatchError(ConeLieError):
    """Raised when a vector or covector does not match the algebra dimension.

    Attributes:
        expected: Expected number of coordinates
        actual: Number of coordinates received
    """
    def __init__(self, expected: int, actual: int, what: str = "vector"):
        self.expected = expected
        self.actual = actual
        super().__init__(
            f"Dimension mismatch for {what}: expected {expected}, got {actual}"
        )


class ConstructionError(ConeLieError):
    """Raised when a cone, antinorm, algebra or group model cannot be built.

    Also raised for operations requested on an unsupported variant.
    """
    pass


class InvalidAlgebraError(ConstructionError):
    """Raised when structure constants violate antisymmetry or Jacobi."""
    pass


class NonSalientConeError(ConstructionError):
    """Raised when a cone contains a line."""
    pass


class AntinormAxiomError(ConstructionError):
    """Raised when an antinorm fails the axioms of its cone.

    Attributes:
        violations: Human-readable descriptions of failed checks
    """
    def __init__(self, violations: Sequence[str]):
        self.violations = list(violations)
        super().__init__("Antinorm axioms violated: " + "; ".join(self.violations))


class UnsupportedOperationError(ConeLieError):
    """Raised when an operation is not defined for the given input class."""
    pass


class EmptyDomainError(ConeLieError):
    """Raised when a covector lies outside the negative dual cone.

    Attributes:
        covector: The offending covector
    """
    def __init__(self, covector: Sequence[float]):
        self.covector = tuple(float(x) for x in covector)
        super().__init__(f"Covector {self.covector} is not in the dual cone")


class NonConvergenceError(ConeLieError):
    """Raised when the numeric dual oracle cannot certify its optimum.

    Attributes:
        best_bound: Best value of the dual function found so far
    """
    def __init__(self, best_bound: float, message: str = ""):
        self.best_bound = best_bound
        super().__init__(
            f"Dual oracle did not converge (best bound {best_bound:.12g})"
            + (f": {message}" if message else "")
        )


class NoMaximumError(ConeLieError):
    """Raised when no extremal passes through a covector.

    The maximized Hamiltonian has no maximum over C \\ 0: for nu = 1 the
    covector is outside both the unit dual antisphere and the zero dual
    antisphere; for nu = 0 it is outside the relative boundary of the dual
    cone.

    Attributes:
        covector: The covector
        nu: Multiplier of the cost
        reason: Short explanation
    """
    def __init__(self, covector: Sequence[float], nu: int, reason: str):
        self.covector = tuple(float(x) for x in covector)
        self.nu = nu
        self.reason = reason
        super().__init__(f"No extremal through h={self.covector} (nu={nu}): {reason}")


class StepRejectedError(ConeLieError):
    """Raised when a step lets the zero-Hamiltonian condition drift too far.

    Attributes:
        drift: Observed value of the Hamiltonian at the end of the step
        limit: Rejection threshold
    """
    def __init__(self, drift: float, limit: float):
        self.drift = drift
        self.limit = limit
        super().__init__(f"Hamiltonian drift {drift:.3e} exceeds {limit:.1e}")


class UnknownScenarioError(ConeLieError, KeyError):
    """Raised when a scenario name is not in the registry.

    Attributes:
        name: Requested name
        available: Registered names
    """
    def __init__(self, name: str, available: Sequence[str]):
        self.name = name
        self.available = list(available)
        super().__init__(
            f"Unknown scenario {name!r}; available: {', '.join(self.available)}"
        )

    def __str__(self) -> str:
        return self.args[0]


class ConfigError(ConeLieError):
    """Raised when a configuration document fails validation.

    Attributes:
        diagnostics: List of (field path, message) pairs
    """
    def __init__(self, diagnostics: Sequence[tuple[str, str]]):
        self.diagnostics = list(diagnostics)
        lines = [f"{path}: {msg}" for path, msg in self.diagnostics]
        super().__init__("Invalid configuration:\n  " + "\n  ".join(lines))


class TrajectoryFormatError(ConeLieError):
    """Raised when a trajectory file cannot be parsed."""
    pass
