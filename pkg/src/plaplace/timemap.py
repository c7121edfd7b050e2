"""Time-map reduction of the Dirichlet problem phi(u')' + lam f(u) = 0, u(+-1) = 0.

A positive solution is even with its maximum ``alpha = u(0)``.  The first
integral ``(p-1)/p |u'|^p + lam F(u) = lam F(alpha)`` gives

    lam(alpha) = I(alpha)**p,
    I(alpha)   = int_0^alpha [q (F(alpha) - F(u))]**(-1/p) du,   q = p/(p-1),

so every quantity on the solution curve reduces to one-dimensional
integrals of the gap ``F(alpha) - F(u)``.  Near ``u = alpha`` the substitution
``u = alpha - s**q`` removes the endpoint singularity exactly.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, InadmissibleAmplitude, QuadratureError
from .nonlinearity import N_SAMPLES, PolyNonlinearity, horner, real_roots
from .plaplacian import Exponent, phi
from .profiles import Profile
from .quadrature import DEFAULT_REL_TOL, integrate_singular

REASON_NONPOSITIVE = "alpha <= 0"
REASON_REST_POINT = "f(alpha)=0"
REASON_F_NEGATIVE = "f(alpha) < 0"
REASON_GAP = "F(alpha) < sup F on (0,alpha)"
REASON_BOUNDARY_DIVERGENT = "F(alpha)=0 boundary case with non-integrable time map"

_GL_X, _GL_W = np.polynomial.legendre.leggauss(16)


@dataclass(frozen=True)
class Admissibility:
    """Outcome of the amplitude test.

    ``margin`` is ``min F(alpha) - F(u)`` over ``u`` in ``[0, alpha)`` away
    from the trivial approach ``u -> alpha``.  ``boundary`` marks
    ``F(alpha) = F(0)`` with every interior gap positive: the curve endpoint.
    """

    ok: bool
    margin: float
    boundary: bool = False
    reason: str = ""
    at_u: float = math.nan

    def __bool__(self):
        return self.ok


def _F_round_bound(nl, alpha):
    a = abs(alpha)
    return 64 * np.finfo(float).eps * sum(abs(c) * a**k for k, c in enumerate(nl.Fcoeffs))


def _order_at_zero(nl) -> int:
    for k, c in enumerate(nl.Fcoeffs):
        if k and c != 0.0:
            return k
    return 0


def admissibility_margin(nl: PolyNonlinearity, alpha: float):
    """``(margin, u_at)`` with ``margin = min F(alpha) - F(u)`` over the candidates.

    Candidates are ``u = 0``, the roots of ``f`` in ``(0, alpha)`` and a
    uniform sample up to the last such root; beyond it ``F`` rises
    monotonically to ``F(alpha)`` when ``f(alpha) > 0``.
    """
    Fa = nl.F(alpha)
    roots = real_roots(nl.coeffs, 0.0, alpha)
    last = roots[-1] if roots.size else 0.0
    k = np.arange(1, N_SAMPLES)
    samples = alpha * k / N_SAMPLES
    samples = samples[samples <= last]
    cand = np.concatenate([[0.0], roots, samples])
    gaps = Fa - nl.F(cand)
    i = int(np.argmin(gaps))
    return float(gaps[i]), float(cand[i])


def is_admissible(nl: PolyNonlinearity, e: Exponent, alpha: float) -> Admissibility:
    """Whether a positive solution with maximum ``alpha`` exists."""
    alpha = float(alpha)
    if not alpha > 0:
        return Admissibility(False, -math.inf, reason=REASON_NONPOSITIVE)
    margin, at_u = admissibility_margin(nl, alpha)
    fa = nl.f(alpha)
    if abs(fa) <= nl.tol_root:
        return Admissibility(False, margin, reason=REASON_REST_POINT, at_u=alpha)
    if fa < 0:
        return Admissibility(False, margin, reason=REASON_F_NEGATIVE, at_u=alpha)
    tol = _F_round_bound(nl, alpha)
    boundary = at_u == 0.0 and abs(margin) <= tol
    if boundary:
        # equality at u = 0 only; the rest of the gap must stay positive
        interior, _ = _interior_margin(nl, alpha)
        if not interior > 0:
            return Admissibility(False, margin, reason=REASON_GAP, at_u=at_u)
        if _order_at_zero(nl) >= e.p:
            return Admissibility(False, margin, True, REASON_BOUNDARY_DIVERGENT, at_u)
        return Admissibility(True, margin, True, "", at_u)
    if margin > 0:
        return Admissibility(True, margin, False, "", at_u)
    return Admissibility(False, margin, reason=REASON_GAP, at_u=at_u)


def _interior_margin(nl, alpha):
    Fa = nl.F(alpha)
    roots = real_roots(nl.coeffs, 0.0, alpha)
    samples = alpha * np.arange(1, N_SAMPLES) / N_SAMPLES
    if roots.size:
        samples = samples[samples <= roots[-1]]
    else:
        samples = samples[:1]
    cand = np.concatenate([roots, samples])
    gaps = Fa - nl.F(cand)
    i = int(np.argmin(gaps))
    return float(gaps[i]), float(cand[i])


def _require(nl, e, alpha) -> Admissibility:
    adm = is_admissible(nl, e, alpha)
    if not adm.ok:
        raise InadmissibleAmplitude(alpha, adm.reason)
    return adm


class _Gap:
    """``D(u) = F(alpha) - F(u)`` with full relative accuracy near both ends.

    For ``d = alpha - u <= alpha/2`` the gap is evaluated as ``d * P(d)`` from
    the Taylor expansion of F at alpha; otherwise directly.  At the boundary
    case ``F(alpha)`` is taken as exactly 0.
    """

    def __init__(self, nl, alpha, boundary=False):
        self.nl = nl
        self.alpha = alpha
        self.boundary = boundary
        self.Fa = 0.0 if boundary else nl.F(alpha)
        self.taylor = nl.F_taylor_at(alpha)
        k = _order_at_zero(nl)
        self.order = k
        self.reduced = tuple(-c for c in nl.Fcoeffs[k:])

    def over_d(self, d):
        """``P(d) = D/d`` for ``d = alpha - u`` (``P(0) = f(alpha)``)."""
        d = np.asarray(d, dtype=float)
        out = horner(self.taylor, d)
        far = d > 0.5 * self.alpha
        if np.any(far):
            df = d[far]
            out[far] = (self.Fa - self.nl.F(self.alpha - df)) / df
        return out

    def of_u(self, u):
        u = np.asarray(u, dtype=float)
        d = self.alpha - u
        near = d <= 0.5 * self.alpha
        out = self.Fa - self.nl.F(u)
        if np.any(near):
            out[near] = d[near] * horner(self.taylor, d[near])
        return out

    def inv_root(self, u, p, q):
        """``(q D(u))**(-1/p)``; at the boundary case ``D = -F(u)`` is factored
        as ``u**k * R(u)`` so tiny ``u`` does not underflow."""
        if not self.boundary:
            return (q * self.of_u(u)) ** (-1.0 / p)
        u = np.asarray(u, dtype=float)
        R = horner(self.reduced, u)
        return (q * R) ** (-1.0 / p) * u ** (-self.order / p)


def _halves(nl, e, alpha, gap, rel_tol):
    p, q = e.p, e.q
    half = 0.5 * alpha
    sh = half ** (1.0 / q)
    c = q ** (1.0 - 1.0 / p)

    def lower(x):
        return half * gap.inv_root(half * x, p, q)

    def upper(x):
        s = sh * x
        return sh * c * gap.over_d(s**q) ** (-1.0 / p)

    return integrate_singular(lower, rel_tol), integrate_singular(upper, rel_tol)


def time_integral(nl: PolyNonlinearity, e: Exponent, alpha: float, rel_tol: float = DEFAULT_REL_TOL) -> float:
    """``I(alpha)``; the half-length of the lam = 1 solution of amplitude alpha."""
    adm = _require(nl, e, alpha)
    gap = _Gap(nl, float(alpha), adm.boundary)
    lo, hi = _halves(nl, e, float(alpha), gap, rel_tol)
    return lo.value + hi.value


def lambda_of_alpha(nl: PolyNonlinearity, e: Exponent, alpha: float, rel_tol: float = DEFAULT_REL_TOL) -> float:
    return time_integral(nl, e, alpha, rel_tol) ** e.p


def dlambda_dalpha(nl: PolyNonlinearity, e: Exponent, alpha: float, rel_tol: float = DEFAULT_REL_TOL) -> float:
    """Central difference with step ``1e-4*alpha`` plus one Richardson step."""
    alpha = float(alpha)
    h = 1e-4 * alpha
    for a in (alpha - h, alpha + h):
        adm = is_admissible(nl, e, a)
        if not adm.ok or adm.boundary:
            raise InadmissibleAmplitude(a, f"finite-difference stencil leaves admissible set ({adm.reason or 'boundary'})")
    lam = {}

    def L(a):
        if a not in lam:
            lam[a] = lambda_of_alpha(nl, e, a, rel_tol)
        return lam[a]

    d1 = (L(alpha + h) - L(alpha - h)) / (2 * h)
    d2 = (L(alpha + h / 2) - L(alpha - h / 2)) / h
    return (4.0 * d2 - d1) / 3.0


def uprime_at_1(nl, e, alpha, lam) -> float:
    """Boundary slope from the first integral: ``-(q lam F(alpha))**(1/p)``."""
    Fa = max(nl.F(alpha), 0.0)
    return -((e.q * lam * Fa) ** (1.0 / e.p))


class _Panels:
    """Adaptive Gauss-Legendre panels for ``x(s) = int_0^s g`` in ``u = alpha - s**q``."""

    def __init__(self, g, S, rel_tol=1e-14, n_start=16, max_depth=40):
        self.g = g
        edges = np.linspace(0.0, S, n_start + 1)
        stack = [(a, b, self._gl(a, b), 0) for a, b in zip(edges[:-1], edges[1:])]
        scale = abs(sum(v for _, _, v, _ in stack))
        done = []
        while stack:
            a, b, v, depth = stack.pop()
            m = 0.5 * (a + b)
            vl, vr = self._gl(a, m), self._gl(m, b)
            if abs(vl + vr - v) <= rel_tol * scale or depth >= max_depth:
                done.append((a, m, vl))
                done.append((m, b, vr))
            else:
                stack.append((m, b, vr, depth + 1))
                stack.append((a, m, vl, depth + 1))
        done.sort()
        self.a = np.array([d[0] for d in done])
        self.b = np.array([d[1] for d in done])
        vals = np.array([d[2] for d in done])
        self.cum = np.concatenate([[0.0], np.cumsum(vals)])
        self.total = float(self.cum[-1])

    def _gl(self, a, b):
        half = 0.5 * (b - a)
        return float(half * np.dot(_GL_W, self.g(a + half * (_GL_X + 1.0))))

    def partial(self, j, s):
        """``int_{a_j}^{s} g`` for arrays of panel indices and upper limits."""
        a = self.a[j]
        half = 0.5 * (s - a)
        nodes = a[:, None] + half[:, None] * (_GL_X[None, :] + 1.0)
        return half * (self.g(nodes.ravel()).reshape(nodes.shape) @ _GL_W)

    def value_at(self, s):
        s = np.atleast_1d(np.asarray(s, dtype=float))
        j = np.clip(np.searchsorted(self.a, s, side="right") - 1, 0, len(self.a) - 1)
        return self.cum[j] + self.partial(j, s)

    def invert(self, targets, iters=60):
        """Solve ``int_0^s g = target`` for each target by safeguarded Newton."""
        T = np.asarray(targets, dtype=float)
        j = np.clip(np.searchsorted(self.cum, T, side="right") - 1, 0, len(self.a) - 1)
        lo, hi = self.a[j].copy(), self.b[j].copy()
        width = self.cum[j + 1] - self.cum[j]
        s = lo + (hi - lo) * np.clip((T - self.cum[j]) / width, 0.0, 1.0)
        tol = 4 * np.finfo(float).eps * max(self.total, 1.0)
        for _ in range(iters):
            r = self.cum[j] + self.partial(j, s) - T
            lo = np.where(r < 0, s, lo)
            hi = np.where(r > 0, s, hi)
            step = r / self.g(s)
            s_new = s - step
            bad = ~((s_new > lo) & (s_new < hi))
            s_new[bad] = 0.5 * (lo[bad] + hi[bad])
            done = np.abs(r) <= tol
            s = np.where(done, s, s_new)
            if np.all(done):
                break
        return s


def reconstruct_profile(
    nl: PolyNonlinearity,
    e: Exponent,
    alpha: float,
    n_grid: int = 2001,
    rel_tol: float = DEFAULT_REL_TOL,
) -> Profile:
    """Solution profile on a uniform grid of ``n_grid`` points in [0, 1].

    ``x(u) = J(u)/J(0)`` with ``J(u) = int_u^alpha [q(F(alpha) - F(t))]**(-1/p) dt``
    is tabulated on adaptive panels in ``s = (alpha - u)**(1/q)`` and inverted
    by Newton iteration at each grid abscissa.
    """
    if n_grid < 16:
        raise DomainError(f"n_grid must be >= 16, got {n_grid}")
    alpha = float(alpha)
    adm = _require(nl, e, alpha)
    if adm.boundary:
        raise InadmissibleAmplitude(alpha, "profile at the curve endpoint is not tabulated")
    p, q = e.p, e.q
    gap = _Gap(nl, alpha)
    c = q ** (1.0 - 1.0 / p)

    def g(s):
        return c * gap.over_d(np.asarray(s, dtype=float) ** q) ** (-1.0 / p)

    S = alpha ** (1.0 / q)
    panels = _Panels(g, S)
    I = time_integral(nl, e, alpha, rel_tol)
    if abs(panels.total - I) > 1e3 * rel_tol * I:
        raise QuadratureError(f"panel sum {panels.total!r} disagrees with time map {I!r}")
    lam = I**p

    def evaluate(xq):
        xq = np.asarray(xq, dtype=float)
        s = np.empty_like(xq)
        left, right = xq <= 0.0, xq >= 1.0
        mid = ~(left | right)
        s[left], s[right] = 0.0, S
        s[mid] = panels.invert(xq[mid] * panels.total)
        d = s**q
        u = alpha - d
        u[left], u[right] = alpha, 0.0
        D = d * gap.over_d(d)
        D[right] = gap.Fa
        up = -((q * lam * D) ** (1.0 / p))
        return u, up, phi(up, e)

    x = np.linspace(0.0, 1.0, n_grid)
    u, uprime, m = evaluate(x)

    x0 = None
    if alpha > nl.gamma:
        sg = (alpha - nl.gamma) ** (1.0 / q)
        x0 = float(panels.value_at(sg)[0] / panels.total)
    return Profile(x, u, uprime, m, x0, lam, alpha, e, "timemap", evaluate)


@dataclass
class CurvePoint:
    alpha: float
    lam: float = math.nan
    dlambda_dalpha: float = math.nan
    uprime_at_1: float = math.nan
    w_at_1: float = math.nan
    admissible: bool = True
    reason: str = ""


@dataclass
class Curve:
    """Admissible points ordered by alpha, plus rejected amplitudes and the endpoint."""

    points: list
    rejected: list = field(default_factory=list)
    alpha_star: float | None = None
    lambda0: float | None = None
    note: str = ""

    def rows(self):
        return sorted(self.points + self.rejected, key=lambda pt: pt.alpha)


def curve_point(nl, e, alpha, rel_tol=DEFAULT_REL_TOL) -> CurvePoint:
    adm = is_admissible(nl, e, alpha)
    if not adm.ok:
        return CurvePoint(alpha, admissible=False, reason=adm.reason)
    lam = lambda_of_alpha(nl, e, alpha, rel_tol)
    try:
        dl = dlambda_dalpha(nl, e, alpha, rel_tol)
        reason = ""
    except InadmissibleAmplitude as exc:
        dl, reason = math.nan, exc.reason
    return CurvePoint(alpha, lam, dl, uprime_at_1(nl, e, alpha, lam), reason=reason)


def _bisect_margin(nl, e, lo, hi):
    """Bisect the sign change of the admissibility margin on ``(lo, hi)``.

    ``lo`` must be inadmissible (margin <= 0) and ``hi`` strictly admissible;
    the admissible-side endpoint is returned.
    """
    while True:
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            return hi
        if admissibility_margin(nl, mid)[0] > 0:
            hi = mid
        else:
            lo = mid


def locate_endpoint(nl, e, alpha_lo, below=None):
    """Locate the lower admissibility boundary beneath ``alpha_lo``.

    ``below`` is an inadmissible amplitude known to lie under the boundary;
    by default gamma is tried.  Returns ``None`` if no sign change of the
    margin is bracketed.
    """
    lo = nl.gamma if below is None else max(below, nl.gamma)
    if not lo < alpha_lo:
        return None
    if admissibility_margin(nl, lo)[0] > 0 or admissibility_margin(nl, alpha_lo)[0] <= 0:
        return None
    return _bisect_margin(nl, e, lo, alpha_lo)


def trace_curve(
    nl: PolyNonlinearity,
    e: Exponent,
    alpha_min: float,
    alpha_max: float,
    n_points: int,
    rel_tol: float = DEFAULT_REL_TOL,
    jobs: int = 1,
) -> Curve:
    """Sample the solution curve at ``n_points`` equally spaced amplitudes."""
    if not (alpha_max > alpha_min > 0):
        raise DomainError(f"need alpha_max > alpha_min > 0, got [{alpha_min}, {alpha_max}]")
    if n_points < 1:
        raise DomainError("n_points must be positive")
    alphas = np.linspace(alpha_min, alpha_max, n_points) if n_points > 1 else np.array([alpha_min])

    def work(a):
        return curve_point(nl, e, float(a), rel_tol)

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            pts = list(pool.map(work, alphas))
    else:
        pts = [work(a) for a in alphas]

    good = [pt for pt in pts if pt.admissible]
    bad = [pt for pt in pts if not pt.admissible]
    curve = Curve(good, bad)
    if not good:
        return curve
    first = good[0].alpha
    below = [pt.alpha for pt in bad if pt.alpha < first]
    alpha_star = locate_endpoint(nl, e, first, max(below) if below else None)
    if alpha_star is None:
        curve.note = "no admissibility boundary bracketed below the window"
        return curve
    curve.alpha_star = alpha_star
    adm = is_admissible(nl, e, alpha_star)
    if adm.ok and adm.boundary:
        try:
            curve.lambda0 = lambda_of_alpha(nl, e, alpha_star, rel_tol)
        except QuadratureError as exc:
            curve.note = f"endpoint integral did not converge: {exc}"
    else:
        curve.note = adm.reason or "endpoint is not an F(alpha)=0 boundary"
    return curve
