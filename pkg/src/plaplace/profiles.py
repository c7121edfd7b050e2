"""Sampled solution and linearized-mode profiles on the half interval [0, 1]."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .plaplacian import Exponent


@dataclass
class Profile:
    """Positive solution sampled on ``x`` in [0, 1] (even extension implied).

    ``m`` is the flux ``phi(u')``; ``x0`` is where ``u`` crosses gamma (None
    if the amplitude does not exceed gamma).
    """

    x: np.ndarray
    u: np.ndarray
    uprime: np.ndarray
    m: np.ndarray
    x0: float | None
    lam: float
    alpha: float
    exponent: Exponent
    method: str = "timemap"
    evaluator: object = None

    def at(self, x):
        """``(u, u', m)`` at arbitrary points, exact where an evaluator exists."""
        x = np.atleast_1d(np.asarray(x, dtype=float))
        if self.evaluator is not None:
            return self.evaluator(x)
        u = np.interp(x, self.x, self.u)
        up = np.interp(x, self.x, self.uprime)
        return u, up, np.interp(x, self.x, self.m)

    @property
    def n_grid(self) -> int:
        return len(self.x)

    def energy(self, nl) -> np.ndarray:
        p = self.exponent.p
        return (p - 1.0) / p * np.abs(self.uprime) ** p + self.lam * nl.F(self.u)

    def energy_drift(self, nl) -> float:
        E = self.energy(nl)
        return float(np.max(np.abs(E - E[0])) / (1.0 + abs(E[0])))


@dataclass
class LinearizedProfile:
    """Even mode ``w`` of the linearized equation, ``w(0) = 1``, ``w'(0) = 0``.

    ``n`` is the linearized flux ``phi'(u') w'``.  Arrays are sampled on the
    profile grid; the first entry is the exact initial value at ``x = 0``.
    """

    x: np.ndarray
    w: np.ndarray
    n: np.ndarray
    w_at_1: float
    positive_up_to_x0: bool
    h0: float
    dense: object = None

    @property
    def max_abs_w(self) -> float:
        return float(np.max(np.abs(self.w)))

    def at(self, x: float):
        """``(w, n)`` at an arbitrary point of the integration range."""
        if self.dense is None:
            return float(np.interp(x, self.x, self.w)), float(np.interp(x, self.x, self.n))
        y = self.dense(x)
        return float(y[0]), float(y[1])


def nan_if_none(v):
    return math.nan if v is None else v
