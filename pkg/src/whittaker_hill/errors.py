"""Exception types shared across the package."""


class InternalConsistencyError(RuntimeError):
    """Two independent computations disagree beyond tolerance.

    Raised when a mathematically guaranteed property (simplicity,
    interlacing, rooting-vs-grid agreement) fails numerically, which
    indicates an internal defect rather than bad user input.
    """


class SingularPotentialError(ValueError):
    """A Darboux-transformed potential has a pole on the real line."""


class IntegrationError(RuntimeError):
    """The ODE integrator failed to reach the requested accuracy."""

    def __init__(self, message, achieved=None):
        super().__init__(message)
        self.achieved = achieved
