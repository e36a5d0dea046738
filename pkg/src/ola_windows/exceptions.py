"""Exception types raised by the window design toolkit."""


class InvalidArgumentError(ValueError):
    """A parameter violates an operation's precondition."""


class SolverError(RuntimeError):
    """An iterative solver did not converge.

    The final residual is kept on ``residual`` so callers can decide whether
    the partial result is usable.
    """

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class CalibrationError(RuntimeError):
    """Main-lobe calibration could not bracket the target width."""

    def __init__(self, message, bracket=None, widths=None):
        super().__init__(message)
        self.bracket = bracket
        self.widths = widths
