"""Exception types raised across the package."""


class RationalKTheoryError(Exception):
    """Base class for errors raised by this package."""


class NonConvergence(RationalKTheoryError):
    def __init__(self, message: str, iterations: int | None = None):
        super().__init__(message)
        self.iterations = iterations


class Indeterminate(RationalKTheoryError):
    """Numerator and denominator vanish together (non-coprime input)."""


class CoprimalityViolation(RationalKTheoryError):
    pass


class DegreeError(RationalKTheoryError, ValueError):
    """A dynamics operation was called on a map of degree < 2."""


class BudgetExceeded(RationalKTheoryError):
    pass


class NotACycle(RationalKTheoryError):
    pass


class MissingHValue(RationalKTheoryError, KeyError):
    def __init__(self, label, cycle):
        super().__init__(f"Herman cycle {cycle!r} has no H value for critical point {label!r}")
        self.label = label
        self.cycle = cycle

    def __str__(self):
        return self.args[0]


class IncompleteSpec(RationalKTheoryError):
    pass


class InconsistentSequence(RationalKTheoryError, ValueError):
    pass


class SpecValidationError(RationalKTheoryError, ValueError):
    pass
