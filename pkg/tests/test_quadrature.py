import math

import numpy as np
import pytest

from plaplace import QuadratureError, integrate_singular
from plaplace.quadrature import MAX_LEVEL, nodes


def test_constant():
    r = integrate_singular(lambda x: np.ones_like(x))
    assert r.value == pytest.approx(1.0, abs=1e-15)
    assert 0 <= r.est_error < 1e-14
    assert r.levels_used >= 1


def test_inverse_sqrt_at_zero():
    r = integrate_singular(lambda s: 0.5 / np.sqrt(s))
    assert abs(r.value - 1.0) <= 1e-10


def test_arcsine_complement_form():
    r = integrate_singular(lambda s, c: 1.0 / np.sqrt(c * (1.0 + s)), complement=True)
    assert abs(r.value - math.pi / 2) <= 1e-10


def test_arcsine_plain_form_limited_by_rounding():
    # nodes within one ulp of 1 are unreachable; the missing mass is ~sqrt(2*eps)
    r = integrate_singular(lambda s: 1.0 / np.sqrt(1.0 - s * s), rel_tol=1e-8)
    assert abs(r.value - math.pi / 2) <= 1e-7


def test_linearity():
    def g(s):
        return s ** -0.3 * np.cos(3 * s) + np.log1p(s)

    base = integrate_singular(g).value
    for a in (-3.5, 0.01, 2.0, 1e4):
        val = integrate_singular(lambda s: a * g(s)).value
        assert abs(val - a * base) <= 1e-12 * abs(a * base)


def test_strong_singularity():
    r = integrate_singular(lambda s: s ** -0.9)
    assert r.value == pytest.approx(10.0, rel=1e-9)


def test_nonfinite_interior_raises():
    with pytest.raises(QuadratureError):
        integrate_singular(lambda s: np.where(s > 0.3, np.nan, 1.0))


def test_nonconvergence_raises():
    with pytest.raises(QuadratureError):
        integrate_singular(lambda s: np.sin(1e5 * s), rel_tol=1e-14)


def test_nodes_inside_open_interval():
    for level in range(MAX_LEVEL + 1):
        x, c, w = nodes(level)
        assert np.all(x > 0) and np.all(c > 0) and np.all(w > 0)
        x, c, w = nodes(level, complement=False)
        assert np.all(x < 1.0)
