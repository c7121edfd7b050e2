"""Shoot-and-scale: an independent route to lam(alpha) and the linearized mode.

The initial value problem ``u(0) = alpha, u'(0) = 0`` for
``phi(u')' + f(u) = 0`` is integrated in the variables ``(u, m = phi(u'))``
until ``u`` first vanishes at ``x = b``.  Since the equation is autonomous,
``v(x) = u(b x)`` solves the problem with parameter ``lam = b**p`` on [-1, 1].
"""

from __future__ import annotations

import bisect
import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, IntegrationError, NoCrossing, ProfileTooCoarse
from .nonlinearity import PolyNonlinearity
from .plaplacian import Exponent, phi, phi_inv, phi_prime
from .profiles import LinearizedProfile, Profile
from .rk import dp_step, hermite, integrate

H0 = 1e-4
DEFAULT_RK_TOL = 1e-10
X_TOL = 1e-12


@dataclass
class ShootResult:
    b: float
    lam: float
    profile: Profile
    linearized: LinearizedProfile | None = None
    solution: object = None


def startup_series(nl: PolyNonlinearity, e: Exponent, alpha: float, h0: float = H0, lam: float = 1.0):
    """Local solution ``(u, m)`` at ``x = h0`` for ``u(0) = alpha, u'(0) = 0``.

    ``m = -lam f(alpha) h0`` and
    ``u = alpha - ((p-1)/p) (lam f(alpha))**(1/(p-1)) h0**q``; the neglected
    terms are relatively ``O(h0**q)``.
    """
    if not (0 < h0 <= 1e-4):
        raise DomainError(f"startup step must lie in (0, 1e-4], got {h0!r}")
    fa = nl.f(alpha)
    if not fa > nl.tol_root:
        reason = "f(alpha)=0" if abs(fa) <= nl.tol_root else "f(alpha) < 0"
        raise DomainError(f"no decreasing solution starts at alpha={alpha!r}: {reason}")
    p, q = e.p, e.q
    g = lam * fa
    u = alpha - (p - 1.0) / p * g ** (1.0 / (p - 1.0)) * h0**q
    m = -g * h0
    return u, m


def _rhs(nl, e, lam=1.0):
    coeffs = nl.coeffs
    a = 1.0 / (e.p - 1.0)

    def fun(x, y):
        u, m = y
        fu = 0.0
        for c in reversed(coeffs):
            fu = fu * u + c
        return np.array([math.copysign(abs(m) ** a, m), -lam * fu])

    return fun


def shoot_and_scale(
    nl: PolyNonlinearity,
    e: Exponent,
    alpha: float,
    rk_tol: float = DEFAULT_RK_TOL,
    n_grid: int = 2001,
    h0: float = H0,
    x_cap: float | None = None,
    linearized: bool = False,
) -> ShootResult:
    """Shoot from ``alpha`` with ``lam = 1`` and rescale to the unit interval."""
    alpha = float(alpha)
    p, q = e.p, e.q
    u0, m0 = startup_series(nl, e, alpha, h0)
    x_cap = 1e3 * alpha ** (1.0 / q) if x_cap is None else float(x_cap)
    fun = _rhs(nl, e)
    state = {"hit": False, "turn": False}

    def on_step(x, y, f):
        if y[0] <= 0.0:
            state["hit"] = True
            return True
        if y[1] >= 0.0:
            state["turn"] = True
            return True
        return False

    sol = integrate(fun, h0, (u0, m0), x_cap, rk_tol, h_init=h0, on_step=on_step)
    if state["turn"]:
        raise NoCrossing(f"u turns back at x={sol.x_end:.6g} before reaching 0 (alpha={alpha!r})")
    if not state["hit"]:
        raise NoCrossing(f"no zero of u before x_cap={x_cap:.6g} (alpha={alpha!r})")

    b, yb, fb, Kb = _locate_zero(fun, sol, e)
    # replace the overshooting last node by the exact crossing
    sol.truncate(len(sol.xs) - 2)
    sol.append(b, yb, fb, Kb)
    lam = b**p

    def evaluate(xq):
        xq = np.atleast_1d(np.asarray(xq, dtype=float))
        u = np.empty(xq.shape)
        m = np.empty(xq.shape)
        for i, xi in enumerate(xq):
            xb = xi * b
            if xi >= 1.0:
                u[i], m[i] = 0.0, yb[1]
            elif xb < h0:
                u[i], m[i] = startup_series(nl, e, alpha, xb) if xb > 0 else (alpha, 0.0)
            else:
                u[i], m[i] = sol(xb)
        up = b * phi_inv(m, e)
        return u, up, phi(up, e)

    x = np.linspace(0.0, 1.0, n_grid)
    u, uprime, mv = evaluate(x)
    x0 = None
    if alpha > nl.gamma:
        x0 = _crossing_in(sol, nl.gamma, h0) / b
    prof = Profile(x, u, uprime, mv, x0, lam, alpha, e, "shoot", evaluate)
    res = ShootResult(b, lam, prof, solution=sol)
    if linearized:
        res.linearized = integrate_linearized_along(nl, e, prof, rk_tol, h0=h0)
    return res


def _locate_zero(fun, sol, e):
    """Bisect the Hermite interpolant on the last step, then polish with RK.

    The polish re-takes a single Dormand-Prince step from the last node
    before the crossing to the candidate point and applies Newton's method
    with ``u' = phi_inv(m)``.
    """
    xa, xb = sol.xs[-2], sol.xs[-1]
    ya, yb, fa, fb = sol.ys[-2], sol.ys[-1], sol.fs[-2], sol.fs[-1]
    lo, hi = xa, xb
    while hi - lo > X_TOL:
        mid = 0.5 * (lo + hi)
        if hermite(xa, xb, ya, yb, fa, fb, mid)[0] > 0:
            lo = mid
        else:
            hi = mid
    b = 0.5 * (lo + hi)
    for _ in range(8):
        y, f, _err = dp_step(fun, xa, ya, fa, b - xa)
        slope = f[0]
        if slope >= 0:
            raise IntegrationError("non-transversal crossing of u = 0")
        db = y[0] / slope
        b -= db
        if abs(db) <= 1e-15 * max(1.0, b):
            break
    y, f, _err, K = dp_step(fun, xa, ya, fa, b - xa, stages=True)
    return b, y, f, K


def _crossing_in(sol, level, x_min):
    """First ``x`` with ``u(x) = level`` on a monotone decreasing dense solution."""
    xs = sol.xs
    k = next(i for i in range(1, len(xs)) if sol.ys[i][0] <= level)
    lo, hi = xs[k - 1], xs[k]
    while hi - lo > X_TOL * max(1.0, hi):
        mid = 0.5 * (lo + hi)
        if sol(mid)[0] > level:
            lo = mid
        else:
            hi = mid
    return max(0.5 * (lo + hi), x_min)


class _ProfileInterp:
    """Cubic Hermite interpolants of ``u`` (with ``u'``) and ``m`` (with ``-lam f(u)``)."""

    def __init__(self, nl, e, profile: Profile):
        self.e = e
        self.x = [float(v) for v in profile.x]
        self.u = profile.u
        self.du = profile.uprime
        self.m = profile.m
        self.dm = -profile.lam * nl.f(profile.u)

    def _k(self, x):
        xs = self.x
        if x >= xs[-1]:
            return len(xs) - 2
        return max(0, bisect.bisect_right(xs, x) - 1)

    def __call__(self, x):
        """``(u, u', m)`` at ``x``; ``u'`` is recovered from the flux."""
        k = self._k(x)
        x0, x1 = self.x[k], self.x[k + 1]
        u = hermite(x0, x1, self.u[k], self.u[k + 1], self.du[k], self.du[k + 1], x)
        m = hermite(x0, x1, self.m[k], self.m[k + 1], self.dm[k], self.dm[k + 1], x)
        return u, phi_inv(m, self.e), m

    def error_estimate(self):
        """Scale of the interpolation error in ``u`` away from the first cell.

        Compares the derivative of the ``u`` interpolant with the slope
        recovered from the ``m`` interpolant at cell midpoints.
        """
        x = np.asarray(self.x)
        h = np.diff(x)[1:]
        mid = x[1:-1] + 0.5 * h
        t = 0.5
        du_h = (
            (6 * t * t - 6 * t) * (self.u[1:-1] - self.u[2:]) / h
            + (3 * t * t - 4 * t + 1) * self.du[1:-1]
            + (3 * t * t - 2 * t) * self.du[2:]
        )
        m_h = np.array([self(xm)[2] for xm in mid])
        return float(np.max(np.abs(du_h - phi_inv(m_h, self.e)) * h))


def _linear_start(nl, e, alpha, lam, h0):
    p, q = e.p, e.q
    fa, dfa = nl.f(alpha), nl.fprime(alpha)
    cw = (p - 1.0) / p * lam * dfa * (lam * fa) ** (-(p - 2.0) / (p - 1.0)) / (p - 1.0)
    return 1.0 - cw * h0**q, -lam * dfa * h0


def integrate_linearized_along(
    nl: PolyNonlinearity,
    e: Exponent,
    profile: Profile,
    rk_tol: float = DEFAULT_RK_TOL,
    h0: float = H0,
    joint: bool = False,
    coarse_factor: float = 1e4,
) -> LinearizedProfile:
    """Even mode of ``(phi'(u') w')' + lam f'(u) w = 0`` with ``w(0) = 1``.

    By default ``u`` and ``u'`` are interpolated from the stored profile; with
    ``joint=True`` the pair ``(u, m)`` is re-integrated alongside ``(w, n)``.
    Raises :class:`ProfileTooCoarse` if the estimated interpolation error
    exceeds ``coarse_factor * rk_tol``.
    """
    lam, alpha = profile.lam, profile.alpha
    dcoeffs = nl.dcoeffs
    w0, n0 = _linear_start(nl, e, alpha, lam, h0)

    def fprime(u):
        acc = 0.0
        for c in reversed(dcoeffs):
            acc = acc * u + c
        return acc

    if joint:
        u0, m0 = startup_series(nl, e, alpha, h0, lam)
        base = _rhs(nl, e, lam)

        def fun(x, y):
            du, dm = base(x, y[:2])
            return np.array([du, dm, y[3] / phi_prime(du, e), -lam * fprime(y[0]) * y[2]])

        sol = integrate(fun, h0, (u0, m0, w0, n0), 1.0, rk_tol, h_init=h0)
        idx = (2, 3)
    else:
        interp = _ProfileInterp(nl, e, profile)
        est = interp.error_estimate()
        if est > coarse_factor * rk_tol:
            raise ProfileTooCoarse(
                f"profile grid of {profile.n_grid} points has interpolation error ~{est:.2e} "
                f"above {coarse_factor:g} x rk_tol={rk_tol:g}"
            )

        def fun(x, y):
            u, up, _m = interp(x)
            return np.array([y[1] / phi_prime(up, e), -lam * fprime(u) * y[0]])

        sol = integrate(fun, h0, (w0, n0), 1.0, rk_tol, h_init=h0)
        idx = (0, 1)

    x = profile.x
    w = np.empty(len(x))
    n = np.empty(len(x))
    for i, xi in enumerate(x):
        if xi == 0.0:
            w[i], n[i] = 1.0, 0.0
        elif xi < h0:
            w[i], n[i] = _linear_start(nl, e, alpha, lam, xi)
        else:
            y = sol(xi)
            w[i], n[i] = y[idx[0]], y[idx[1]]
    yend = sol.ys[-1]
    w[-1], n[-1] = yend[idx[0]], yend[idx[1]]
    x0 = profile.x0
    upto = x <= (x0 if x0 is not None else 1.0)
    positive = bool(np.all(w[upto] > 0))

    def dense(xq):
        if xq < h0:
            return np.array(_linear_start(nl, e, alpha, lam, xq) if xq > 0 else (1.0, 0.0))
        y = sol(xq)
        return np.array([y[idx[0]], y[idx[1]]])

    return LinearizedProfile(x.copy(), w, n, float(w[-1]), positive, h0, dense)
