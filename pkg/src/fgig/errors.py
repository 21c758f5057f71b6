"""Exception types shared across the package."""


class DomainError(ValueError):
    """An input violates a documented precondition."""


class NumericError(RuntimeError):
    """An iterative routine failed to converge.

    Carries the last residual when one is available.
    """

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class PoleError(DomainError):
    """An evaluator was queried exactly at a pole.

    The residue is attached so callers can handle the singular part.
    """

    def __init__(self, message, residue):
        super().__init__(message)
        self.residue = residue
