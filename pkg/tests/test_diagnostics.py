import math

import numpy as np
import pytest

from plaplace import (
    DomainError,
    InadmissibleAmplitude,
    check_hypotheses,
    diagnose,
    diagnose_curve,
    invariant_report,
    trace_curve,
)


def test_linear_is_singular(linear):
    for a in (0.5, 1.0, 2.0):
        d = diagnose(*linear, a)
        assert not d.verdict_nonsingular
        assert abs(d.point.w_at_1) <= 1e-6


def test_affine_w_at_1(affine):
    for a in (3.0, 5.0):
        d = diagnose(*affine, a)
        assert d.verdict_nonsingular
        assert d.point.w_at_1 == pytest.approx(1 / (1 - a), abs=1e-5)


def test_example_nonsingular(example):
    for a in (5.0, 6.0, 8.0):
        d = diagnose(*example, a)
        assert d.verdict_nonsingular
        assert abs(d.point.w_at_1) > 1e-4 * d.max_abs_w


def test_diagnose_inadmissible(example):
    with pytest.raises(InadmissibleAmplitude):
        diagnose(*example, 3.0)


def test_report_affine_closed_form(affine):
    rep = invariant_report(*affine, 3.0, n_grid=2001)
    assert rep.x0 == pytest.approx(0.75, abs=1e-12)
    assert rep.z_at_x0 == pytest.approx(1 - math.pi / 3, abs=1e-9)
    assert rep.q_at_x0 == pytest.approx(rep.z_at_x0, abs=1e-12)
    assert rep.u_dprime_at_x0 <= 1e-8


def test_report_rejects_alpha_below_gamma(example, linear):
    with pytest.raises(DomainError):
        invariant_report(*example, 3.5)
    with pytest.raises(DomainError):
        invariant_report(*linear, 1.0)


def test_report_example(example):
    rep = invariant_report(*example, 6.0)
    assert rep.energy_drift <= 1e-8
    assert rep.q_at_x0 < 0 and rep.z_at_x0 < 0
    assert rep.ineq_3_7_ok
    assert rep.u_dprime_at_x0 <= 1e-6
    assert rep.wronskian_spread <= 1e-6
    assert rep.endpoint_relation_residual <= 1e-6
    assert rep.G_identity_residual <= 1e-6
    assert rep.T_identity_residual <= 1e-6
    assert rep.verdict_nonsingular
    residuals = [rep.energy_drift, rep.G_identity_residual, rep.T_identity_residual,
                 rep.wronskian_spread, rep.endpoint_relation_residual, rep.u_dprime_at_x0]
    assert all(r >= 0 for r in residuals)


def test_residuals_shrink_under_refinement(example):
    reps = [invariant_report(*example, 6.0, n_grid=n) for n in (2001, 4001, 8001)]
    for coarse, fine in zip(reps, reps[1:]):
        assert fine.G_identity_residual <= coarse.G_identity_residual / 2
        assert fine.T_identity_residual <= coarse.T_identity_residual / 2


def test_positive_mode_implies_G_positive(example):
    seen = 0
    for a in (4.8, 5.0, 5.5, 6.0, 8.0):
        rep = invariant_report(*example, a, n_grid=2001)
        if rep.positive_up_to_x0:
            seen += 1
            assert rep.G_at_x0 > 0
    assert seen > 0


def test_uniqueness_conclusions_on_example(example):
    nl, e = example
    assert check_hypotheses(nl, e, 16.0).all_ok
    for a in (4.8, 7.0, 11.0):
        rep = invariant_report(nl, e, a, n_grid=2001)
        assert rep.verdict_nonsingular
        assert rep.q_at_x0 < 0 and rep.z_at_x0 < 0 and rep.ineq_3_7_ok


def test_sign_consistency_observation(example):
    curve = trace_curve(*example, 4.8, 12.0, 12)
    verdicts = diagnose_curve(*example, curve)
    for pt, ok in zip(curve.points, verdicts):
        if ok:
            assert pt.dlambda_dalpha != 0 and not math.isnan(pt.dlambda_dalpha)


def test_diagnose_curve_parallel(example):
    a = trace_curve(*example, 5.0, 9.0, 6)
    b = trace_curve(*example, 5.0, 9.0, 6)
    va = diagnose_curve(*example, a)
    vb = diagnose_curve(*example, b, jobs=3)
    assert va == vb
    assert [p.w_at_1 for p in a.points] == [p.w_at_1 for p in b.points]
    assert np.all(np.isfinite([p.w_at_1 for p in a.points]))
