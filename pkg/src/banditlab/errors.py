"""Exception types shared across the package."""


class ConfigurationError(ValueError):
    """An experiment, policy, or environment description is invalid or inconsistent."""


class DegenerateWeightsError(ValueError):
    """Every candidate weight collapsed to zero (all log weights are -inf)."""


class QuadratureAccuracyError(RuntimeError):
    """Adaptive quadrature could not certify the requested error bound.

    Carries the best error bound that was achieved in ``achieved``.
    """

    def __init__(self, message: str, achieved: float):
        super().__init__(message)
        self.achieved = achieved


class VerificationError(RuntimeError):
    """A numerically checked identity or inequality failed its tolerance."""

    def __init__(self, message: str, residuals: dict | None = None):
        super().__init__(message)
        self.residuals = dict(residuals or {})
