import math

import numpy as np
import pytest

from nernst_casimir import analysis as an
from nernst_casimir.asymptotics import correction_coefficient_C2, leading_coefficient_C1, pade_delta_F
from nernst_casimir.dispersion import GOLD_2, Drude, IdealMetal, Plasma
from nernst_casimir.errors import DomainError, NumericalError

A = 1e-6
C1, C2 = 5.8e-13, 3.03
T = np.geomspace(0.01, 1.0, 12)


def _series(num):
    return an.ratio_points(T, num, C1, C2)


def test_perfect_agreement_gives_zero_ratio():
    pts = _series(pade_delta_F(T, C1, C2))
    assert all(p.R == 0.0 for p in pts)


def test_identity_from_stored_columns():
    pts = _series(C1 * T**2 * (1 - C2 * np.sqrt(T) + 2 * T))
    for p in pts:
        assert p.R == pytest.approx((p.delta_F_th - p.delta_F_num) / p.delta_F_th, rel=1e-15)


def test_linear_approach_for_matching_coefficients():
    t = np.array([1e-6, 1e-5])
    num = C1 * t**2 * (1 - C2 * np.sqrt(t) + 5 * t)
    pts = an.ratio_points(t, num, C1, C2)
    assert pts[0].R / t[0] == pytest.approx(C2**2 - 5, rel=1e-2)


def test_pure_T2_series_gives_minus_C2_sqrt_coefficient():
    fit = an.fit_low_T(_series(C1 * T**2))
    assert fit.intercept == pytest.approx(0.0, abs=1e-12)
    assert fit.coefficient_sqrtT == pytest.approx(-C2, rel=1e-10)
    assert fit.slope_in_T == pytest.approx(0.0, abs=1e-10)
    assert not fit.passed


def test_constant_offset_detected():
    fit = an.fit_low_T(_series(0.9 * pade_delta_F(T, C1, C2)))
    assert fit.intercept == pytest.approx(0.1, rel=1e-10)
    assert not fit.passed


def test_planted_coefficients_recovered():
    c = (0.01, -0.02, 1.3)
    R = c[0] + c[1] * np.sqrt(T) + c[2] * T
    th = pade_delta_F(T, C1, C2)
    fit = an.fit_low_T(_series(th * (1 - R)))
    for got, want in zip((fit.intercept, fit.coefficient_sqrtT, fit.slope_in_T), c):
        assert got == pytest.approx(want, rel=1e-6)
    assert fit.rms < 1e-12
    assert fit.window == (T[0], T[-1])
    assert fit.passed


def test_noise_degrades_gracefully():
    rng = np.random.default_rng(7)
    R = 1.3 * T
    th = pade_delta_F(T, C1, C2)
    errs = []
    for level in (1e-6, 1e-4, 1e-2):
        num = th * (1 - R) * (1 + level * rng.standard_normal(T.size))
        f = an.fit_low_T(_series(num))
        errs.append(abs(f.intercept) + abs(f.coefficient_sqrtT))
    assert errs[0] < errs[1] < errs[2]
    assert errs[1] < 0.05


def test_fit_delta_F_recovers_D():
    D1, D2, D3 = 5.5e-13, 2.5, 4.0
    num = D1 * (T**2 - D2 * T**2.5 + D3 * T**3)
    fit = an.fit_low_T(_series(num))
    assert (fit.D1, fit.D2, fit.D3) == pytest.approx((D1, D2, D3), rel=1e-8)


def test_fit_preconditions():
    with pytest.raises(DomainError):
        an.fit_low_T(_series(C1 * T**2)[:4])
    same = an.ratio_points(np.full(6, 0.5), np.full(6, 1e-14), C1, C2)
    with pytest.raises(NumericalError):
        an.fit_low_T(same)


def test_failed_points_annotated_and_skipped(gold):
    pts = an.ratio_series(gold, A, [2.0, 4.0], tol=1e-30)
    assert all(not p.ok and "NumericalError" in p.error and math.isnan(p.R) for p in pts)


def test_ratio_series_preconditions(gold):
    with pytest.raises(DomainError):
        an.ratio_series(Plasma(GOLD_2.omega_p), A, [1.0])
    with pytest.raises(DomainError):
        an.ratio_series(gold, A, [1.0, 0.5])
    with pytest.raises(DomainError):
        an.ratio_series(gold, A, [0.0, 0.5])


def test_default_grids():
    g = an.default_ratio_grid()
    assert g.size == 12 and g[0] == pytest.approx(0.05) and g[-1] == pytest.approx(1.0)
    d = an.default_ratio_grid(deep=True)
    assert d[0] == pytest.approx(0.008) and d.size > g.size


def test_gold_ratio_shrinks_towards_zero(gold):
    pts = an.ratio_series(gold, A, np.geomspace(0.1, 1.0, 5))
    R = np.array([p.R for p in pts])
    assert np.all(np.isfinite(R)) and np.all(np.abs(R) < 0.5)
    assert np.all(np.diff(np.abs(R)) > 0)
    th = pade_delta_F(0.1, leading_coefficient_C1(GOLD_2), correction_coefficient_C2(GOLD_2, A).C2)
    assert pts[0].delta_F_th == pytest.approx(th, rel=1e-15)


@pytest.mark.parametrize("model", [Plasma(GOLD_2.omega_p), IdealMetal()])
def test_verdict_fails_without_zero_mode_suppression(model):
    rep = an.nernst_verdict(model, A)
    assert rep.verdict == "FAIL"
    assert not rep.zero_mode_satisfied
    kv = rep.key_values()
    assert kv["zero_mode_condition"] == "FAIL"
    assert "verdict=FAIL" in rep.text()


def test_verdict_drude_entropy_only(gold):
    cfg = an.VerdictConfig(entropy_T=(0.2,), run_ratio=False)
    rep = an.nernst_verdict(gold, A, cfg)
    assert rep.zero_mode_satisfied and rep.entropy_ok
    assert rep.fit_ok is None
    assert rep.verdict == "PASS"
    T, S, r = rep.entropy[0]
    assert S < 0 and abs(r) < 3
    assert rep.key_values()["ratio_fit"] == "n/a"
