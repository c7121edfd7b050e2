"""Problem configuration files (flat TOML).

Example::

    # f(u) = c0 + c1 u + c2 u^2 + ...   (ascending degree)
    p = 3.0
    coeffs = [0.0, -8.0, 14.0, -7.0, 1.0]
    gamma = 4.0
    u_max = 16.0

    [tolerances]
    quad_rel_tol = 1e-10
    rk_tol = 1e-10
"""

from __future__ import annotations

import math
import sys
from dataclasses import dataclass, field

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from .errors import ConfigError, DomainError
from .nonlinearity import PolyNonlinearity
from .plaplacian import Exponent

DEFAULT_TOLERANCES = {"quad_rel_tol": 1e-10, "rk_tol": 1e-10}
_KEYS = {"p", "coeffs", "gamma", "u_max", "tolerances"}


def _toml_float(v: float) -> str:
    s = format(v, ".17g")
    return s if any(ch in s for ch in ".en") else s + ".0"


def _number(name, v):
    if isinstance(v, bool) or not isinstance(v, (int, float)) or not math.isfinite(v):
        raise ConfigError(f"{name} must be a finite number, got {v!r}")
    return float(v)


@dataclass
class ProblemConfig:
    p: float
    coeffs: list
    gamma: float
    u_max: float | None = None
    tolerances: dict = field(default_factory=lambda: dict(DEFAULT_TOLERANCES))

    def __post_init__(self):
        self.p = _number("p", self.p)
        if not isinstance(self.coeffs, (list, tuple)) or not self.coeffs:
            raise ConfigError("coeffs must be a non-empty list")
        self.coeffs = [_number("coeffs[]", c) for c in self.coeffs]
        self.gamma = _number("gamma", self.gamma)
        if self.u_max is not None:
            self.u_max = _number("u_max", self.u_max)
        if not isinstance(self.tolerances, dict):
            raise ConfigError("[tolerances] must be a table")
        unknown = set(self.tolerances) - set(DEFAULT_TOLERANCES)
        if unknown:
            raise ConfigError(f"unknown tolerance keys: {sorted(unknown)}")
        tol = dict(DEFAULT_TOLERANCES)
        tol.update({k: _number(k, v) for k, v in self.tolerances.items()})
        if any(v <= 0 for v in tol.values()):
            raise ConfigError("tolerances must be positive")
        self.tolerances = tol
        try:
            self.exponent
            self.nonlinearity
        except DomainError as exc:
            raise ConfigError(str(exc)) from exc
        if not self.resolved_u_max > self.gamma:
            raise ConfigError(f"u_max={self.u_max} must exceed gamma={self.gamma}")

    @property
    def exponent(self) -> Exponent:
        return Exponent(self.p)

    @property
    def nonlinearity(self) -> PolyNonlinearity:
        return PolyNonlinearity(tuple(self.coeffs), self.gamma)

    @property
    def resolved_u_max(self) -> float:
        return 4.0 * self.gamma if self.u_max is None else self.u_max

    @classmethod
    def from_dict(cls, d: dict) -> "ProblemConfig":
        unknown = set(d) - _KEYS
        if unknown:
            raise ConfigError(f"unknown keys: {sorted(unknown)}")
        missing = {"p", "coeffs", "gamma"} - set(d)
        if missing:
            raise ConfigError(f"missing keys: {sorted(missing)}")
        return cls(d["p"], d["coeffs"], d["gamma"], d.get("u_max"), d.get("tolerances", {}))

    @classmethod
    def loads(cls, text: str) -> "ProblemConfig":
        try:
            d = tomllib.loads(text)
        except tomllib.TOMLDecodeError as exc:
            raise ConfigError(f"malformed config: {exc}") from exc
        return cls.from_dict(d)

    @classmethod
    def load(cls, path) -> "ProblemConfig":
        try:
            with open(path, encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from exc
        return cls.loads(text)

    def dumps(self) -> str:
        lines = [
            "# f(u) = c0 + c1 u + c2 u^2 + ...   (ascending degree)",
            f"p = {_toml_float(self.p)}",
            "coeffs = [" + ", ".join(_toml_float(c) for c in self.coeffs) + "]",
            f"gamma = {_toml_float(self.gamma)}",
        ]
        if self.u_max is not None:
            lines.append(f"u_max = {_toml_float(self.u_max)}")
        lines += ["", "[tolerances]"]
        lines += [f"{k} = {_toml_float(v)}" for k, v in sorted(self.tolerances.items())]
        return "\n".join(lines) + "\n"
