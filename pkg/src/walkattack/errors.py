"""Exception types shared across the package."""


class InvalidArgument(ValueError):
    """Raised for malformed or out-of-range inputs."""


class NumericalFailure(ArithmeticError):
    """A linear solve hit a (near-)singular pivot or a non-unique solution."""


class MultiplicityError(NumericalFailure):
    """The stationary equations have more than one normalized solution."""


class BudgetExceeded(RuntimeError):
    """A quantum-walk state was stepped past its position window."""
