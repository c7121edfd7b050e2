"""Dormand-Prince 5(4) embedded pair with step-size control.

Accepted steps keep their stages so the solution can be evaluated anywhere
through the pair's fourth-order continuous extension.  A plain cubic
Hermite interpolant of ``(y, y')`` is provided for cheap event bracketing.
"""

from __future__ import annotations

import bisect
import math

import numpy as np

from .errors import StepSizeUnderflow

_C = np.array([0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0])
_A = [
    [],
    [1 / 5],
    [3 / 40, 9 / 40],
    [44 / 45, -56 / 15, 32 / 9],
    [19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729],
    [9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656],
    [35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84],
]
_B = np.array([35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0.0])
_E = _B - np.array([5179 / 57600, 0.0, 7571 / 16695, 393 / 640, -92097 / 339200, 187 / 2100, 1 / 40])
_A = [np.array(row) for row in _A]
# continuous extension: y(x + t h) = y + h * (K.T @ _P) @ [t, t^2, t^3, t^4]
_P = np.array([
    [1, -8048581381 / 2820520608, 8663915743 / 2820520608, -12715105075 / 11282082432],
    [0, 0, 0, 0],
    [0, 131558114200 / 32700410799, -68118460800 / 10900136933, 87487479700 / 32700410799],
    [0, -1754552775 / 470086768, 14199869525 / 1410260304, -10690763975 / 1880347072],
    [0, 127303824393 / 49829197408, -318862633887 / 49829197408, 701980252875 / 199316789632],
    [0, -282668133 / 205662961, 2019193451 / 616988883, -1453857185 / 822651844],
    [0, 40617522 / 29380423, -110615467 / 29380423, 69997945 / 29380423],
])


def dp_step(fun, x, y, f0, h, *, stages=False):
    """One Dormand-Prince step; returns ``(y_new, f_new, err_vector[, K])``."""
    K = np.empty((7, y.size))
    K[0] = f0
    for i in range(1, 7):
        K[i] = fun(x + _C[i] * h, y + h * (_A[i] @ K[:i]))
    y_new = y + h * (_B @ K)
    # FSAL: the last stage is f(x + h, y_new)
    if stages:
        return y_new, K[6], h * (_E @ K), K
    return y_new, K[6], h * (_E @ K)


class DenseSolution:
    """Accepted nodes ``(x_k, y_k, f_k)``, evaluable between nodes."""

    def __init__(self, x0, y0, f0):
        self.xs = [float(x0)]
        self.ys = [np.array(y0, dtype=float)]
        self.fs = [np.array(f0, dtype=float)]
        self.Qs = []

    def append(self, x, y, f, K=None):
        """Add a node; ``K`` are the stages of the step that produced it."""
        self.xs.append(float(x))
        self.ys.append(y)
        self.fs.append(f)
        self.Qs.append(None if K is None else K.T @ _P)

    def truncate(self, k):
        """Drop nodes after index ``k``."""
        del self.xs[k + 1 :], self.ys[k + 1 :], self.fs[k + 1 :], self.Qs[k:]

    @property
    def x_end(self):
        return self.xs[-1]

    def __call__(self, x):
        xs = self.xs
        if x <= xs[0]:
            k = 0
        elif x >= xs[-1]:
            k = len(xs) - 2
        else:
            k = bisect.bisect_right(xs, x) - 1
        Q = self.Qs[k]
        if Q is None:
            return hermite(xs[k], xs[k + 1], self.ys[k], self.ys[k + 1], self.fs[k], self.fs[k + 1], x)
        h = xs[k + 1] - xs[k]
        t = (x - xs[k]) / h
        return self.ys[k] + h * (Q @ np.array([t, t * t, t**3, t**4]))


def hermite(x0, x1, y0, y1, f0, f1, x):
    h = x1 - x0
    t = (x - x0) / h
    t2 = t * t
    t3 = t2 * t
    h00 = 2 * t3 - 3 * t2 + 1
    h10 = t3 - 2 * t2 + t
    h01 = -2 * t3 + 3 * t2
    h11 = t3 - t2
    return h00 * y0 + h10 * h * f0 + h01 * y1 + h11 * h * f1


def integrate(fun, x0, y0, x_end, tol, *, h_init=None, on_step=None, h_min_rel=1e-14):
    """Integrate ``y' = fun(x, y)`` from ``x0`` to ``x_end`` with mixed tolerance.

    ``on_step(x, y, f)`` is called after every accepted step; returning a
    truthy value stops the integration early.  Returns the
    :class:`DenseSolution` of all accepted nodes.
    """
    y = np.array(y0, dtype=float)
    x = float(x0)
    f = np.asarray(fun(x, y), dtype=float)
    sol = DenseSolution(x, y, f)
    span = x_end - x
    h = min(span, h_init if h_init is not None else 1e-3 * span)
    while x < x_end:
        h = min(h, x_end - x)
        y_new, f_new, err, K = dp_step(fun, x, y, f, h, stages=True)
        sc = tol + tol * np.maximum(np.abs(y), np.abs(y_new))
        e = math.sqrt(float(np.mean((err / sc) ** 2)))
        if e <= 1.0 and np.all(np.isfinite(y_new)):
            x = x + h if x_end - x - h > 1e-15 * abs(x_end) else x_end
            y, f = y_new, f_new
            sol.append(x, y, f, K)
            if on_step is not None and on_step(x, y, f):
                break
            fac = 5.0 if e == 0 else min(5.0, 0.9 * e**-0.2)
        else:
            fac = 0.2 if not math.isfinite(e) else max(0.2, 0.9 * e**-0.2)
        h *= fac
        if h < h_min_rel * max(1.0, abs(x)):
            raise StepSizeUnderflow(f"step size underflow at x={x!r}")
    return sol
