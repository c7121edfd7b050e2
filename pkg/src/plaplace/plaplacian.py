"""The one-dimensional p-Laplace flux map phi(t) = t|t|^(p-2) and relatives.

All three maps accept either a Python float or a numpy array.  Scalars take
a ``math`` fast path because the ODE right-hand sides call them per stage.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError


@dataclass(frozen=True)
class Exponent:
    """The exponent ``p > 1`` together with the conjugate ``q = p/(p-1)``."""

    p: float

    def __post_init__(self):
        p = float(self.p)
        if not math.isfinite(p) or p <= 1.0:
            raise DomainError(f"exponent must satisfy p > 1, got {self.p!r}")
        object.__setattr__(self, "p", p)

    @property
    def q(self) -> float:
        return self.p / (self.p - 1.0)


def as_exponent(e) -> Exponent:
    return e if isinstance(e, Exponent) else Exponent(e)


def phi(t, e: Exponent):
    """Return ``t*|t|**(p-2)``; odd, strictly increasing, ``phi(0) = 0``."""
    a = e.p - 1.0
    if isinstance(t, np.ndarray):
        return np.copysign(np.abs(t) ** a, t)
    return math.copysign(abs(t) ** a, t)


def phi_prime(t, e: Exponent):
    """Return ``(p-1)*|t|**(p-2)``.

    At ``t = 0`` the value is 0 for ``p > 2`` and 1 for ``p = 2``; for
    ``p < 2`` it diverges and :class:`DomainError` is raised.
    """
    p = e.p
    if isinstance(t, np.ndarray):
        if p < 2.0 and np.any(t == 0):
            raise DomainError("phi'(0) is infinite for p < 2")
        if p == 2.0:
            return np.ones_like(t, dtype=float)
        return (p - 1.0) * np.abs(t) ** (p - 2.0)
    if t == 0:
        if p < 2.0:
            raise DomainError("phi'(0) is infinite for p < 2")
        return 1.0 if p == 2.0 else 0.0
    return (p - 1.0) * abs(t) ** (p - 2.0)


def phi_inv(s, e: Exponent):
    """Inverse of :func:`phi`: ``sign(s)*|s|**(1/(p-1))``."""
    a = 1.0 / (e.p - 1.0)
    if isinstance(s, np.ndarray):
        return np.copysign(np.abs(s) ** a, s)
    return math.copysign(abs(s) ** a, s)
