"""Exception types shared across the package."""


class ConfigError(ValueError):
    """An experiment configuration is malformed or inconsistent."""


class ConvergenceError(RuntimeError):
    """A numerical routine could not reach its error target.

    Carries the best available error estimate in ``residual`` so callers can
    report how far the computation was from converging.
    """

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class UnachievableTargetError(RuntimeError):
    """No molecule count within the search bound meets the success target."""

    def __init__(self, message, target=None, bound=None):
        super().__init__(message)
        self.target = target
        self.bound = bound
