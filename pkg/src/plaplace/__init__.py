"""Numerical tools for phi(u')' + lam f(u) = 0 on (-1, 1) with u(+-1) = 0."""

__version__ = "0.1.0"

from .config import ProblemConfig
from .diagnostics import Diagnosis, InvariantReport, diagnose, diagnose_curve, invariant_report, is_nonsingular
from .errors import (
    ConfigError,
    DomainError,
    InadmissibleAmplitude,
    IntegrationError,
    NoCrossing,
    NoSignChange,
    PLaplaceError,
    ProfileTooCoarse,
    QuadratureError,
    StepSizeUnderflow,
)
from .nonlinearity import HypothesisReport, PolyNonlinearity, check_hypotheses, find_alpha_star
from .plaplacian import Exponent, phi, phi_inv, phi_prime
from .profiles import LinearizedProfile, Profile
from .quadrature import integrate_singular
from .shooting import ShootResult, integrate_linearized_along, shoot_and_scale, startup_series
from .timemap import (
    Curve,
    CurvePoint,
    dlambda_dalpha,
    is_admissible,
    lambda_of_alpha,
    locate_endpoint,
    reconstruct_profile,
    time_integral,
    trace_curve,
    uprime_at_1,
)
