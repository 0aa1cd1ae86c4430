"""Exception hierarchy shared by all ising_lab modules."""


class IsingLabError(Exception):
    """Base class for library errors."""


class DimensionError(IsingLabError, ValueError):
    """Operands act on different numbers of qubits / matrix sizes."""


class ResourceError(IsingLabError):
    """Requested dense object exceeds the configured qubit cap."""


class NumericalError(IsingLabError, ArithmeticError):
    """Ill-conditioned or non-finite numerical input."""


class BranchCutError(NumericalError):
    """Principal matrix logarithm requested across the negative real axis."""

    def __init__(self, message, eigenvalues=()):
        super().__init__(message)
        self.eigenvalues = tuple(eigenvalues)


class ConventionError(IsingLabError):
    """Two constructions that must agree up to a scalar do not."""


class ContractError(IsingLabError, ValueError):
    """Input violates an operation precondition."""
