"""Polynomial nonlinearities f(u), their exact antiderivative and derivative.

Also checks the three structural conditions on f that guarantee
non-singularity of large positive solutions, and locates the amplitude at
which F changes sign above the root gamma (the endpoint of the solution
curve).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from numpy.polynomial import polynomial as P

from .errors import DomainError, NoSignChange
from .plaplacian import Exponent

N_SAMPLES = 10_000
MAX_ROOT_DEGREE = 5


def horner(coeffs, u):
    """Evaluate an ascending-degree polynomial at a scalar or array ``u``."""
    acc = 0.0 * u if isinstance(u, np.ndarray) else 0.0
    for c in reversed(coeffs):
        acc = acc * u + c
    return acc


def real_roots(coeffs, lo, hi, *, include_hi=False):
    """Real roots of an ascending-degree polynomial inside ``(lo, hi)``."""
    c = np.trim_zeros(np.asarray(coeffs, dtype=float), "b")
    if c.size <= 1:
        return np.empty(0)
    r = P.polyroots(c)
    r = r[np.abs(r.imag) <= 1e-12 * np.maximum(1.0, np.abs(r.real))].real
    upper = (r <= hi) if include_hi else (r < hi)
    return np.sort(r[(r > lo) & upper])


@dataclass(frozen=True)
class PolyNonlinearity:
    """Polynomial ``f`` in ascending-degree coefficients with a designated root.

    ``gamma`` is the zero above which ``f`` is meant to be positive; it is
    not forced to be a root here, :func:`check_hypotheses` reports that.
    """

    coeffs: tuple
    gamma: float
    dcoeffs: tuple = field(init=False)
    Fcoeffs: tuple = field(init=False)

    def __post_init__(self):
        c = tuple(float(x) for x in self.coeffs)
        if not c or not all(math.isfinite(x) for x in c):
            raise DomainError("coefficients must be a non-empty list of finite reals")
        g = float(self.gamma)
        if not (math.isfinite(g) and g > 0):
            raise DomainError(f"gamma must be a positive real, got {self.gamma!r}")
        object.__setattr__(self, "coeffs", c)
        object.__setattr__(self, "gamma", g)
        d = tuple(k * c[k] for k in range(1, len(c))) or (0.0,)
        F = (0.0,) + tuple(c[k] / (k + 1) for k in range(len(c)))
        object.__setattr__(self, "dcoeffs", d)
        object.__setattr__(self, "Fcoeffs", F)

    def f(self, u):
        return horner(self.coeffs, u)

    def fprime(self, u):
        return horner(self.dcoeffs, u)

    def F(self, u):
        return horner(self.Fcoeffs, u)

    @property
    def scale_f(self) -> float:
        return 1.0 + max(abs(x) for x in self.coeffs)

    @property
    def scale_F(self) -> float:
        return 1.0 + max(abs(x) for x in self.Fcoeffs)

    @property
    def tol_root(self) -> float:
        return 1e-9 * self.scale_f

    def F_taylor_at(self, alpha):
        """Coefficients ``c_k`` (k >= 1) with ``F(alpha) - F(alpha - d) = sum c_k d**k``.

        Evaluating the gap this way keeps full relative accuracy as ``d -> 0``.
        """
        out = []
        cur = np.asarray(self.Fcoeffs)
        sign = 1.0
        fact = 1.0
        for k in range(1, len(self.Fcoeffs)):
            cur = P.polyder(cur)
            fact *= k
            out.append(sign * horner(cur, alpha) / fact)
            sign = -sign
        return tuple(out)

    def scaled(self, c: float) -> "PolyNonlinearity":
        return PolyNonlinearity(tuple(c * x for x in self.coeffs), self.gamma)


def eval_f(nl: PolyNonlinearity, u):
    return nl.f(u)


def eval_fprime(nl: PolyNonlinearity, u):
    return nl.fprime(u)


def eval_F(nl: PolyNonlinearity, u):
    return nl.F(u)


@dataclass(frozen=True)
class Witness:
    u: float
    margin: float


@dataclass(frozen=True)
class HypothesisReport:
    h41_ok: bool
    h4a_ok: bool
    h42_ok: bool
    witnesses: dict
    u_max: float
    margins: dict

    @property
    def all_ok(self) -> bool:
        return self.h41_ok and self.h4a_ok and self.h42_ok

    def to_dict(self) -> dict:
        return {
            "h41_ok": self.h41_ok,
            "h4a_ok": self.h4a_ok,
            "h42_ok": self.h42_ok,
            "all_ok": self.all_ok,
            "u_max": self.u_max,
            "margins": dict(self.margins),
            "witnesses": {k: {"u": w.u, "margin": w.margin} for k, w in self.witnesses.items()},
        }


def _worst(g_coeffs, samples, lo, hi, include_hi):
    """Minimum of a polynomial over samples augmented by its critical points."""
    pts = samples
    dg = P.polyder(np.asarray(g_coeffs, dtype=float))
    if len(g_coeffs) - 2 <= MAX_ROOT_DEGREE:
        pts = np.concatenate([samples, real_roots(dg, lo, hi, include_hi=include_hi)])
    vals = horner(tuple(g_coeffs), pts)
    i = int(np.argmin(vals))
    return float(pts[i]), float(vals[i])


def check_hypotheses(nl: PolyNonlinearity, e: Exponent, u_max: float | None = None) -> HypothesisReport:
    """Sample-check the sign conditions on ``f`` over their intervals.

    This is a dense check, not a certificate: each strict inequality is
    tested on ``N_SAMPLES`` uniform points plus the critical points of the
    tested polynomial.
    """
    g = nl.gamma
    u_max = 4.0 * g if u_max is None else float(u_max)
    if not u_max > g:
        raise DomainError(f"u_max={u_max} must exceed gamma={g}")
    k = np.arange(1, N_SAMPLES + 1)
    upper = g + (u_max - g) * k / N_SAMPLES
    lower = g * np.arange(1, N_SAMPLES) / N_SAMPLES

    witnesses = {}
    margins = {}

    # f(gamma) = 0 and f > 0 on (gamma, u_max]
    fg = nl.f(g)
    u41, m41 = _worst(nl.coeffs, upper, g, u_max, True)
    h41 = abs(fg) <= nl.tol_root and m41 > 0
    margins["h41"] = m41
    if abs(fg) > nl.tol_root:
        witnesses["h41"] = Witness(g, -abs(fg))
    elif m41 <= 0:
        witnesses["h41"] = Witness(u41, m41)

    # u f'(u) - (p-1) f(u) > 0 on (gamma, u_max]
    ha = P.polysub(P.polymulx(nl.dcoeffs), (e.p - 1.0) * np.asarray(nl.coeffs))
    u4a, m4a = _worst(ha, upper, g, u_max, True)
    h4a = m4a > 0
    margins["h4a"] = m4a
    if not h4a:
        witnesses["h4a"] = Witness(u4a, m4a)

    # F(u) - F(gamma) > 0 on (0, gamma)
    h2 = P.polysub(nl.Fcoeffs, [nl.F(g)])
    u42, m42 = _worst(h2, lower, 0.0, g, False)
    h42 = m42 > 0
    margins["h42"] = m42
    if not h42:
        witnesses["h42"] = Witness(u42, m42)

    return HypothesisReport(bool(h41), bool(h4a), bool(h42), witnesses, u_max, margins)


def find_alpha_star(nl: PolyNonlinearity, bracket) -> float:
    """Bisect for the zero of ``F`` in ``bracket``.

    Returns the endpoint of the final machine-width bracket on the side
    where ``F >= 0``, so the result is always an admissible boundary value.
    """
    lo, hi = float(bracket[0]), float(bracket[1])
    if not lo < hi:
        raise DomainError(f"empty bracket {bracket!r}")
    if lo < nl.gamma:
        raise DomainError(f"bracket {bracket!r} must lie in [gamma, inf)")
    Flo, Fhi = nl.F(lo), nl.F(hi)
    if Flo == 0.0:
        return lo
    if Fhi == 0.0:
        return hi
    if (Flo > 0) == (Fhi > 0):
        raise NoSignChange(f"F has equal signs at {lo} ({Flo:.6g}) and {hi} ({Fhi:.6g})")
    while True:
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        Fm = nl.F(mid)
        if Fm == 0.0:
            return mid
        if (Fm > 0) == (Flo > 0):
            lo, Flo = mid, Fm
        else:
            hi, Fhi = mid, Fm
    return lo if Flo > 0 else hi
