"""Exception types shared across the package."""


class DomainError(ValueError):
    """Argument outside the set where a quantity is defined or exact."""


class StructuralError(ArithmeticError):
    """Arithmetic combined values that cannot live in one monomial.

    Raised when adding monomials with different powers of pi. Seeing this
    means a formula was translated wrongly; it is never approximated away.
    """


class ConvergenceError(ArithmeticError):
    """A series or iteration did not converge within its cap."""
