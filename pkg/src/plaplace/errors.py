"""Exception hierarchy shared by the solver modules."""


class PLaplaceError(Exception):
    """Base class for every error raised by this package."""


class DomainError(PLaplaceError, ValueError):
    """An argument lies outside the domain where the operation is defined."""


class InadmissibleAmplitude(DomainError):
    """No positive solution with the requested amplitude exists."""

    def __init__(self, alpha, reason):
        super().__init__(f"alpha={alpha!r} is inadmissible: {reason}")
        self.alpha = alpha
        self.reason = reason


class NoSignChange(DomainError):
    """A bracketing root search was given endpoints of equal sign."""


class QuadratureError(PLaplaceError, ArithmeticError):
    """Quadrature failed to converge or met a non-finite integrand value."""


class IntegrationError(PLaplaceError, ArithmeticError):
    """The ODE integrator could not complete the requested solve."""


class NoCrossing(IntegrationError):
    """The shot never reached u = 0."""


class StepSizeUnderflow(IntegrationError):
    """The step-size controller shrank the step below representable size."""


class ProfileTooCoarse(IntegrationError):
    """Interpolation error of a sampled profile exceeds the ODE tolerance."""


class ConfigError(PLaplaceError, ValueError):
    """Malformed or inconsistent problem configuration."""
