import math

import numpy as np
import pytest

from plaplace import (
    DomainError,
    NoCrossing,
    ProfileTooCoarse,
    integrate_linearized_along,
    lambda_of_alpha,
    reconstruct_profile,
    shoot_and_scale,
    startup_series,
    uprime_at_1,
)

GL_X, GL_W = np.polynomial.legendre.leggauss(10)


def test_startup_series_examples(linear, example):
    u, m = startup_series(*linear, 1.0, 1e-4)
    assert u == pytest.approx(1 - 0.5e-8, abs=1e-15)
    assert m == pytest.approx(-1e-4, rel=1e-12)
    _, m = startup_series(*example, 6.0, 1e-4)
    assert m == pytest.approx(-0.0240, rel=1e-12)
    with pytest.raises(DomainError, match="f\\(alpha\\)=0"):
        startup_series(*example, 4.0)
    with pytest.raises(DomainError):
        startup_series(*example, 6.0, 1e-3)


def test_linear_eigenvalue(linear):
    r = shoot_and_scale(*linear, 1.0)
    assert r.b == pytest.approx(math.pi / 2, rel=1e-9)
    assert r.lam == pytest.approx(math.pi**2 / 4, rel=1e-8)
    assert r.lam == r.b**2


def test_affine(affine):
    r = shoot_and_scale(*affine, 3.0)
    assert r.lam == pytest.approx(4 * math.pi**2 / 9, abs=1e-7)


def test_agrees_with_timemap(example):
    for a in (5.0, 6.0, 8.0, 10.0):
        r = shoot_and_scale(*example, a)
        lam = lambda_of_alpha(*example, a)
        assert abs(r.lam - lam) / lam <= 1e-5


def test_rescaled_slope_at_1(example):
    nl, e = example
    r = shoot_and_scale(nl, e, 6.0)
    ref = uprime_at_1(nl, e, 6.0, r.lam)
    assert r.profile.uprime[-1] == pytest.approx(ref, rel=1e-6)
    assert r.profile.m[-1] < 0


def test_flux_residuals(example):
    nl, e = example
    rk_tol = 1e-10
    sol = shoot_and_scale(nl, e, 6.0, rk_tol).solution
    m_first = sol.ys[0][1]
    cum = 0.0
    for k in range(len(sol.xs) - 1):
        a, b = sol.xs[k], sol.xs[k + 1]
        xs = 0.5 * (a + b) + 0.5 * (b - a) * GL_X
        u = np.array([sol(x)[0] for x in xs])
        integral = 0.5 * (b - a) * GL_W @ nl.f(u)
        dm = sol.ys[k + 1][1] - sol.ys[k][1]
        assert abs(dm + integral) <= 10 * rk_tol * max(1.0, abs(sol.ys[k + 1][1]))
        cum += integral
        assert abs(sol.ys[k + 1][1] - m_first + cum) <= 1e-8


def test_energy_of_shot_profile(example):
    nl, e = example
    prof = shoot_and_scale(nl, e, 8.0).profile
    assert prof.energy_drift(nl) <= 1e-8
    assert np.all(np.diff(prof.u) < 0)


def test_inadmissible_amplitude_does_not_cross(example):
    nl, e = example
    with pytest.raises(NoCrossing):
        shoot_and_scale(nl, e, 1.5)


def test_linearized_linear_case(linear):
    nl, e = linear
    r = shoot_and_scale(nl, e, 1.0, linearized=True)
    lin = r.linearized
    assert lin.w[0] == 1.0 and lin.n[0] == 0.0
    assert abs(lin.w_at_1) <= 1e-6
    assert np.max(np.abs(lin.w - np.cos(np.pi * lin.x / 2))) <= 1e-6


def test_linearized_affine(affine):
    nl, e = affine
    prof = reconstruct_profile(nl, e, 3.0)
    lin = integrate_linearized_along(nl, e, prof)
    assert lin.w_at_1 == pytest.approx(-0.5, abs=1e-6)
    assert np.max(np.abs(lin.w - np.cos(2 * np.pi * lin.x / 3))) <= 1e-6


def test_linearized_joint_matches_interpolated(example):
    nl, e = example
    prof = reconstruct_profile(nl, e, 6.0)
    a = integrate_linearized_along(nl, e, prof)
    b = integrate_linearized_along(nl, e, prof, joint=True)
    assert a.w_at_1 == pytest.approx(b.w_at_1, rel=1e-6)
    assert a.w_at_1 != 0


def test_coarse_profile_rejected(example):
    nl, e = example
    with pytest.raises(ProfileTooCoarse):
        integrate_linearized_along(nl, e, reconstruct_profile(nl, e, 12.0, 201))


def test_wronskian_constant(example):
    nl, e = example
    r = shoot_and_scale(nl, e, 6.0, linearized=True)
    prof, lin = r.profile, r.linearized
    sel = prof.x >= 10 * lin.h0
    K = prof.uprime[sel] * lin.n[sel] + prof.lam * nl.f(prof.u[sel]) * lin.w[sel]
    assert (K.max() - K.min()) / np.max(np.abs(K)) <= 1e-6
