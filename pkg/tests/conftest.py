import numpy as np
import pytest

from plaplace import Exponent, PolyNonlinearity, integrate_singular

# criterion number -> pass/fail line, filled by test_acceptance
ACCEPTANCE_LINES = {}

# f(u) = u(u-1)(u-2)(u-4), expanded in ascending degree
EXAMPLE_COEFFS = (0.0, -8.0, 14.0, -7.0, 1.0)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for n in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(ACCEPTANCE_LINES[n])


@pytest.fixture
def example():
    return PolyNonlinearity(EXAMPLE_COEFFS, 4.0), Exponent(3.0)


@pytest.fixture
def linear():
    return PolyNonlinearity((0.0, 1.0), 1.0), Exponent(2.0)


@pytest.fixture
def affine():
    return PolyNonlinearity((-1.0, 1.0), 1.0), Exponent(2.0)


def power_lambda(p, alpha):
    """lambda(alpha) for f = u**(p-1) straight from the quadrature routine.

    Works for non-integer p, where f is not a polynomial.  The gap
    F(alpha) - F(u) is evaluated as alpha**p/p * -expm1(p*log1p(-d/alpha))
    with d = alpha - u so the endpoint singularity is resolved.
    """
    q = p / (p - 1.0)

    def gap(d):
        return alpha**p / p * -np.expm1(p * np.log1p(-d / alpha))

    half = alpha / 2
    lower = integrate_singular(lambda x: (q * (alpha**p - (half * x) ** p) / p) ** (-1 / p) * half)
    upper = integrate_singular(lambda x, c: (q * gap(half * c)) ** (-1 / p) * half, complement=True)
    return (lower.value + upper.value) ** p
