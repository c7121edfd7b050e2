import math

import numpy as np
import pytest

from conftest import power_lambda
from plaplace import (
    Exponent,
    InadmissibleAmplitude,
    PolyNonlinearity,
    dlambda_dalpha,
    is_admissible,
    lambda_of_alpha,
    reconstruct_profile,
    time_integral,
    trace_curve,
    uprime_at_1,
)

# lambda(alpha) for the quintic-F example, 30-digit quadrature after the
# substitution u = alpha - s**q
EXAMPLE_LAMBDA = {
    5.0: 5.394614282244830160842921,
    6.0: 1.137640999034409535536662,
    8.0: 0.2926075120844513672809798,
    10.0: 0.1323477889093789249030719,
}


def affine_lambda(a):
    return math.acos(1.0 / (1.0 - a)) ** 2


def test_admissibility_example(example):
    nl, e = example
    assert is_admissible(nl, e, 6.0).ok
    a = is_admissible(nl, e, 1.5)
    assert not a.ok and a.reason == "F(alpha) < sup F on (0,alpha)"
    assert not is_admissible(nl, e, 3.0).ok
    assert is_admissible(nl, e, 4.0).reason == "f(alpha)=0"
    assert is_admissible(nl, e, -1.0).reason == "alpha <= 0"


def test_time_integral_closed_forms(linear, affine):
    assert time_integral(*linear, 1.0) == pytest.approx(math.pi / 2, rel=1e-12)
    assert time_integral(*linear, 2.0) == pytest.approx(math.pi / 2, rel=1e-12)
    assert time_integral(*affine, 3.0) == pytest.approx(2 * math.pi / 3, rel=1e-12)


def test_lambda_closed_forms(linear, affine):
    assert lambda_of_alpha(*linear, 1.0) == pytest.approx(math.pi**2 / 4, rel=1e-12)
    assert lambda_of_alpha(*affine, 3.0) == pytest.approx(4 * math.pi**2 / 9, rel=1e-12)
    for a in (2.3, 4.0, 7.5):
        assert lambda_of_alpha(*affine, a) == pytest.approx(affine_lambda(a), rel=1e-10)


def test_lambda_example_oracle(example):
    for a, lam in EXAMPLE_LAMBDA.items():
        assert lambda_of_alpha(*example, a) == pytest.approx(lam, rel=1e-10)


def test_inadmissible_raises(example):
    with pytest.raises(InadmissibleAmplitude):
        lambda_of_alpha(*example, 1.5)
    with pytest.raises(InadmissibleAmplitude):
        time_integral(*example, 3.0)


def test_dlambda(linear, affine, example):
    assert abs(dlambda_dalpha(*linear, 1.0)) <= 1e-6
    a = 3.0
    exact = 2 * (2 * math.pi / 3) * (-1 / (a - 1) ** 2) / math.sqrt(1 - 1 / (a - 1) ** 2)
    assert dlambda_dalpha(*affine, a) == pytest.approx(exact, rel=1e-6)
    assert dlambda_dalpha(*example, 6.0) < 0


def test_dlambda_stencil_leaving_admissible_set(affine):
    nl, e = affine
    with pytest.raises(InadmissibleAmplitude):
        dlambda_dalpha(nl, e, 2.0 + 1e-6)


def test_profile_linear_cosine(linear):
    prof = reconstruct_profile(*linear, 1.0, 101)
    assert np.max(np.abs(prof.u - np.cos(np.pi * prof.x / 2))) <= 1e-8


def test_profile_anchors_and_shape(example):
    nl, e = example
    prof = reconstruct_profile(nl, e, 6.0, 501)
    assert prof.u[0] == 6.0 and prof.u[-1] == 0.0
    assert prof.m[0] == 0.0
    assert np.all(np.diff(prof.u) < 0)
    assert np.all(prof.uprime[1:] < 0)
    assert prof.energy_drift(nl) <= 1e-8
    assert prof.lam == pytest.approx(EXAMPLE_LAMBDA[6.0], rel=1e-10)
    u0, _, _ = prof.at(prof.x0)
    assert u0[0] == pytest.approx(4.0, abs=1e-12)


def test_profile_affine_x0(affine):
    prof = reconstruct_profile(*affine, 3.0, 201)
    assert prof.x0 == pytest.approx(0.75, abs=1e-12)


def test_uprime_at_1_matches_profile(example, affine):
    for (nl, e), a in [(example, 6.0), (example, 10.0), (affine, 3.0)]:
        prof = reconstruct_profile(nl, e, a, 401)
        ref = uprime_at_1(nl, e, a, prof.lam)
        assert ref < 0
        assert prof.uprime[-1] == pytest.approx(ref, rel=1e-6)


def test_scaling_covariance(example):
    nl, e = example
    double = nl.scaled(2.0)
    for a in (5.0, 6.0, 9.0):
        assert lambda_of_alpha(double, e, a) == pytest.approx(lambda_of_alpha(nl, e, a) / 2, rel=1e-8)


def test_homogeneity():
    for p in (2.0, 3.0):
        nl = PolyNonlinearity(tuple([0.0] * int(p - 1) + [1.0]), 1.0)
        lams = [lambda_of_alpha(nl, Exponent(p), a) for a in (0.5, 1.0, 2.0)]
        assert (max(lams) - min(lams)) / max(lams) <= 1e-8
    for p in (1.5, 2.0, 3.0):
        lams = [power_lambda(p, a) for a in (0.5, 1.0, 2.0)]
        assert (max(lams) - min(lams)) / max(lams) <= 1e-8
    assert power_lambda(2.0, 1.0) == pytest.approx(math.pi**2 / 4, rel=1e-9)


def test_trace_affine(affine):
    curve = trace_curve(*affine, 2.05, 6.0, 40)
    lams = [pt.lam for pt in curve.points]
    assert len(lams) == 40
    assert np.all(np.diff(lams) < 0)
    assert lams[0] == pytest.approx(affine_lambda(2.05), rel=1e-9)
    assert lams[-1] > (math.pi / 2) ** 2
    assert curve.alpha_star == pytest.approx(2.0, abs=1e-10)
    assert curve.lambda0 == pytest.approx(math.pi**2, rel=1e-9)
    assert all(pt.alpha > curve.alpha_star for pt in curve.points)


def test_trace_example_window(example):
    curve = trace_curve(*example, 4.8, 12.0, 50)
    assert len(curve.points) == 50 and not curve.rejected
    assert np.all(np.diff([pt.lam for pt in curve.points]) < 0)
    assert 4.6 < curve.alpha_star < 4.7


def test_trace_inadmissible_window(example):
    curve = trace_curve(*example, 1.2, 1.8, 7)
    assert curve.points == []
    assert all(pt.reason == "F(alpha) < sup F on (0,alpha)" for pt in curve.rejected)


def test_trace_parallel_identical(example):
    a = trace_curve(*example, 4.8, 12.0, 20)
    b = trace_curve(*example, 4.8, 12.0, 20, jobs=4)
    assert a == b
