"""Exception types shared across the package."""


class ContractViolation(ValueError):
    """An operation was called with arguments that break its preconditions."""


class InvariantViolation(RuntimeError):
    """Internal state reached a configuration the design rules out."""


class NumericFault(ArithmeticError):
    """A numeric quantity (gradient, loss) became non-finite."""
