"""Non-singularity verdicts and the proof quantities evaluated on computed solutions.

All formulas use ``g = lam f`` in place of ``f`` so that identities stated
for ``phi(u')' + f(u) = 0`` hold verbatim for the parameter problem.  With
``m = phi(u')`` and ``n = phi'(u') w'`` the quantities become

    K(x) = u' n + lam f(u) w                  (Wronskian-type constant)
    G(x) = (p-1) w m - u n,   G' = lam [f'(u) u - (p-1) f(u)] w
    T(x) = x K(x) - (p-1) m w,  T' = p lam f(u) w

none of which divides by ``phi'(u')``.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass

import numpy as np

from .errors import DomainError, InadmissibleAmplitude, IntegrationError, QuadratureError
from .nonlinearity import PolyNonlinearity
from .plaplacian import Exponent, phi, phi_prime
from .profiles import LinearizedProfile, Profile  # noqa: F401  (re-exported)
from .quadrature import DEFAULT_REL_TOL
from .shooting import DEFAULT_RK_TOL, H0, integrate_linearized_along
from .timemap import (
    Curve,
    CurvePoint,
    dlambda_dalpha,
    is_admissible,
    reconstruct_profile,
    uprime_at_1,
)

ZERO_THRESHOLD = 1e-4
DEFAULT_N_GRID = 2001
INVARIANT_N_GRID = 8001


@dataclass
class Diagnosis:
    point: CurvePoint
    verdict_nonsingular: bool
    max_abs_w: float
    positive_up_to_x0: bool
    profile: Profile
    linearized: LinearizedProfile

    def to_dict(self) -> dict:
        d = asdict(self.point)
        d.update(
            lam_from="timemap",
            verdict_nonsingular=self.verdict_nonsingular,
            max_abs_w=self.max_abs_w,
            positive_up_to_x0=self.positive_up_to_x0,
            x0=self.profile.x0,
            zero_threshold=ZERO_THRESHOLD,
        )
        return d


def is_nonsingular(lin: LinearizedProfile) -> bool:
    return abs(lin.w_at_1) > ZERO_THRESHOLD * lin.max_abs_w


def diagnose(
    nl: PolyNonlinearity,
    e: Exponent,
    alpha: float,
    n_grid: int = DEFAULT_N_GRID,
    rk_tol: float = DEFAULT_RK_TOL,
    rel_tol: float = DEFAULT_REL_TOL,
    with_slope: bool = True,
) -> Diagnosis:
    """Solve at amplitude ``alpha`` and test the even linearized mode at x = 1.

    The odd mode needs no test: ``u'`` itself solves the linearized equation
    and does not vanish at the boundary.
    """
    adm = is_admissible(nl, e, alpha)
    if not adm.ok or adm.boundary:
        raise InadmissibleAmplitude(alpha, adm.reason or "curve endpoint")
    prof = reconstruct_profile(nl, e, alpha, n_grid, rel_tol)
    lin = integrate_linearized_along(nl, e, prof, rk_tol)
    dl = math.nan
    if with_slope:
        try:
            dl = dlambda_dalpha(nl, e, alpha, rel_tol)
        except InadmissibleAmplitude:
            pass
    pt = CurvePoint(alpha, prof.lam, dl, uprime_at_1(nl, e, alpha, prof.lam), lin.w_at_1)
    return Diagnosis(pt, is_nonsingular(lin), lin.max_abs_w, lin.positive_up_to_x0, prof, lin)


def diagnose_curve(nl, e, curve: Curve, n_grid=DEFAULT_N_GRID, rk_tol=DEFAULT_RK_TOL, jobs=1):
    """Fill ``w_at_1`` on every admissible point of ``curve``; returns the verdicts.

    A point whose linearized integration fails keeps ``w_at_1 = nan`` and a
    ``None`` verdict.
    """

    def work(pt):
        try:
            prof = reconstruct_profile(nl, e, pt.alpha, n_grid)
            return integrate_linearized_along(nl, e, prof, rk_tol)
        except (IntegrationError, QuadratureError) as exc:
            pt.reason = pt.reason or f"linearized mode failed: {exc}"
            return None

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            lins = list(pool.map(work, curve.points))
    else:
        lins = [work(pt) for pt in curve.points]
    verdicts = []
    for pt, lin in zip(curve.points, lins):
        pt.w_at_1 = math.nan if lin is None else lin.w_at_1
        verdicts.append(None if lin is None else is_nonsingular(lin))
    return verdicts


@dataclass
class InvariantReport:
    alpha: float
    lam: float
    x0: float
    energy_drift: float
    q_at_x0: float
    z_at_x0: float
    ineq_3_7_ok: bool
    G_at_x0: float
    G_identity_residual: float
    T_identity_residual: float
    wronskian_spread: float
    endpoint_relation_residual: float
    u_dprime_at_x0: float
    w_at_1: float
    positive_up_to_x0: bool
    verdict_nonsingular: bool
    excluded_sliver: float
    n_grid: int

    def to_dict(self) -> dict:
        return asdict(self)


def _trapezoid(y, x):
    return float(np.sum(0.5 * (y[1:] + y[:-1]) * np.diff(x)))


def invariant_report(
    nl: PolyNonlinearity,
    e: Exponent,
    alpha: float,
    n_grid: int = INVARIANT_N_GRID,
    rk_tol: float = DEFAULT_RK_TOL,
    rel_tol: float = DEFAULT_REL_TOL,
    profile: Profile | None = None,
) -> InvariantReport:
    """Evaluate the proof quantities on the computed solution and even mode.

    Identities are checked in integrated form with the trapezoid rule on the
    profile grid, so their residuals carry the grid discretization error and
    shrink under refinement.  Quantities involving ``phi'(u')`` are only
    evaluated on ``[10*h0, 1]``.
    """
    if not alpha > nl.gamma:
        raise DomainError(f"alpha={alpha!r} must exceed gamma={nl.gamma!r} (x0 undefined)")
    p = e.p
    if profile is None:
        adm = is_admissible(nl, e, alpha)
        if not adm.ok or adm.boundary:
            raise InadmissibleAmplitude(alpha, adm.reason or "curve endpoint")
        profile = reconstruct_profile(nl, e, alpha, n_grid, rel_tol)
    lam = profile.lam
    lin = integrate_linearized_along(nl, e, profile, rk_tol)
    x0 = profile.x0
    delta = 10 * H0

    def lam_f(u):
        return lam * nl.f(u)

    # point values at x0
    u0_, up0_, m0_ = (float(v[0]) for v in profile.at(x0))
    w0_, n0_ = lin.at(x0)
    dphi0 = phi_prime(up0_, e)
    wp0 = n0_ / dphi0

    z = (1.0 - x0) * up0_ + u0_
    qv = (p - 1.0) * (1.0 - x0) * phi(up0_, e) + dphi0 * u0_
    x = profile.x
    after = (x > x0) & (x < 1.0)
    ineq_ok = bool(np.all(up0_ - profile.uprime[after] < 0))

    G0 = (p - 1.0) * w0_ * m0_ - u0_ * n0_

    # G identity on [delta, x0]
    inner = (x > delta) & (x < x0)
    xg = np.concatenate([[delta], x[inner], [x0]])
    ug, _, mg = profile.at(xg)
    wg = np.array([lin.at(v)[0] for v in xg])
    ng = np.array([lin.at(v)[1] for v in xg])
    integrand = lam * (nl.fprime(ug) * ug - (p - 1.0) * nl.f(ug)) * wg
    G = (p - 1.0) * wg * mg - ug * ng
    G_res = float(abs(G[-1] - G[0] - _trapezoid(integrand, xg)))

    # T identity on [x0, 1]
    tail = x > x0
    xt = np.concatenate([[x0], x[tail]])
    ut, upt, mt = profile.at(xt)
    wt = np.array([lin.at(v)[0] for v in xt])
    nt = np.array([lin.at(v)[1] for v in xt])
    wt[-1], nt[-1] = lin.w[-1], lin.n[-1]
    Kt = upt * nt + lam_f(ut) * wt
    T = xt * Kt - (p - 1.0) * mt * wt
    T_res = float(abs(T[-1] - T[0] - p * _trapezoid(lam_f(ut) * wt, xt)))

    # Wronskian-type constant on [10 h0, 1]
    sel = x >= delta
    K = profile.uprime[sel] * lin.n[sel] + lam_f(profile.u[sel]) * lin.w[sel]
    Kscale = float(np.max(np.abs(K)))
    spread = float((np.max(K) - np.min(K)) / Kscale)
    K_end = (p - 1.0) * m0_ * wp0
    endpoint_res = float(abs(K[-1] - K_end) / Kscale)

    return InvariantReport(
        alpha=float(alpha),
        lam=lam,
        x0=x0,
        energy_drift=profile.energy_drift(nl),
        q_at_x0=float(qv),
        z_at_x0=float(z),
        ineq_3_7_ok=ineq_ok,
        G_at_x0=float(G0),
        G_identity_residual=G_res,
        T_identity_residual=T_res,
        wronskian_spread=spread,
        endpoint_relation_residual=endpoint_res,
        u_dprime_at_x0=float(abs(lam_f(u0_)) / dphi0),
        w_at_1=lin.w_at_1,
        positive_up_to_x0=lin.positive_up_to_x0,
        verdict_nonsingular=is_nonsingular(lin),
        excluded_sliver=delta,
        n_grid=profile.n_grid,
    )
