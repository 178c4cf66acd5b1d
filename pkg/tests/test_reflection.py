import io
import math

import mpmath
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from nernst_casimir.constants import C_LIGHT
from nernst_casimir.dispersion import GOLD_2, Drude, DrudeParameters, IdealMetal, Plasma, Vacuum, low_frequency_strength
from nernst_casimir.errors import DomainError
from nernst_casimir.reflection import (
    TE,
    TM,
    ModeCoordinates,
    fresnel_squared,
    model_reflection,
    reflection_surface,
    reflection_terms,
    scaled_te_coefficient,
    scaling_consistency,
    write_surface_csv,
    zero_frequency_terms,
)


def _naive(eps, p):
    # textbook form evaluated in 50-digit arithmetic
    with mpmath.workdps(50):
        eps, p = mpmath.mpf(eps), mpmath.mpf(p)
        s = mpmath.sqrt(eps - 1 + p * p)
        A = ((s - eps * p) / (s + eps * p)) ** 2
        B = ((s - p) / (s + p)) ** 2
        return float(A), float(B), float(1 - A), float(1 - B)


@given(st.floats(1.0, 1e12), st.floats(1.0, 1e8))
def test_fresnel_matches_high_precision_oracle(eps, p):
    zeta = 1e13
    q = p * zeta / C_LIGHT
    A, B, omA, omB = _naive(eps, p)
    pair = fresnel_squared(eps, zeta, q)
    assert pair.A == pytest.approx(A, rel=1e-11, abs=1e-300)
    assert pair.B == pytest.approx(B, rel=1e-11, abs=1e-300)


@given(st.floats(1.0, 1e12), st.floats(1.0, 1e8))
def test_one_minus_r2_is_accurate(eps, p):
    from nernst_casimir.reflection import _coefficients

    A, omA, B, omB = _coefficients(np.float64(eps), np.float64(p))
    _, _, oA, oB = _naive(eps, p)
    assert omA == pytest.approx(oA, rel=1e-11)
    assert omB == pytest.approx(oB, rel=1e-11)


@given(st.floats(1.0, 1e14), st.floats(1e8, 1e16), st.floats(1.0, 1e6))
def test_coefficients_bounded_and_ordered(eps, zeta, p):
    pair = fresnel_squared(eps, zeta, p * zeta / C_LIGHT)
    # A = B at p = 1, so allow rounding there
    assert 0.0 <= pair.B <= pair.A * (1 + 1e-14)
    assert pair.A <= 1.0


def test_vacuum_and_ideal_limits():
    pair = fresnel_squared(1.0, 1e14, 1e7)
    assert (pair.A, pair.B) == (0.0, 0.0)
    pair = fresnel_squared(np.inf, 1e14, 1e7)
    assert (pair.A, pair.B) == (1.0, 1.0)


def test_evanescent_condition_enforced():
    with pytest.raises(DomainError):
        fresnel_squared(2.0, 1e14, 0.5 * 1e14 / C_LIGHT)


def test_lambdas():
    pair = fresnel_squared(np.inf, 1e14, 1e6)
    lt, le = pair.lambdas(1e6, 1e-6)
    assert lt == le == pytest.approx(math.exp(-2.0))


def test_drude_small_zeta_limits():
    m = Drude(GOLD_2)
    k = 1e6
    for zeta in (1e6, 1e3, 1.0):
        pair = model_reflection(m, zeta, math.hypot(k, zeta / C_LIGHT))
    assert pair.A == pytest.approx(1.0, abs=1e-6)
    assert pair.B < 1e-6
    static = model_reflection(m, 0.0, k)
    assert (static.A, static.B) == (1.0, 0.0)


def test_plasma_static_te_limit():
    wp = GOLD_2.omega_p
    q = 1e7
    r2, one_m = zero_frequency_terms(Plasma(wp), np.array([q]), TE)
    expected = ((math.sqrt(wp**2 + (q * C_LIGHT) ** 2) - q * C_LIGHT) / (math.sqrt(wp**2 + (q * C_LIGHT) ** 2) + q * C_LIGHT)) ** 2
    assert r2[0] == pytest.approx(expected, rel=1e-12)
    assert r2[0] + one_m[0] == pytest.approx(1.0, rel=1e-14)
    # continuity with small zeta
    zeta = 1.0
    near = model_reflection(Plasma(wp), zeta, math.hypot(q, zeta / C_LIGHT)).B
    assert near == pytest.approx(expected, rel=1e-8)


def test_ideal_and_vacuum_dispatch():
    assert reflection_terms(IdealMetal(), 1e12, np.ones(3), TE)[0].tolist() == [1.0] * 3
    assert reflection_terms(Vacuum(), 1e12, np.ones(3), TM)[1].tolist() == [1.0] * 3


def test_scaled_te_coefficient():
    assert scaled_te_coefficient(0.0) == 1.0
    x = 1e3
    assert scaled_te_coefficient(x) * 16 * x**4 == pytest.approx(1.0, rel=1e-5)
    t = np.linspace(0, 5, 11)
    assert np.allclose(scaled_te_coefficient(np.sinh(t)), np.exp(-4 * t), rtol=1e-13)
    with pytest.raises(DomainError):
        scaled_te_coefficient(-1.0)


@given(st.floats(0, 1e6), st.floats(1e-6, 1e3))
def test_scaled_te_monotone(x, dx):
    assert scaled_te_coefficient(x + dx) <= scaled_te_coefficient(x)


@pytest.mark.parametrize("frac,bound", [(1e-2, 0.05), (1e-4, 1e-3)])
def test_scaling_consistency(frac, bound):
    m = Drude(GOLD_2)
    zeta = GOLD_2.nu * frac
    D = low_frequency_strength(GOLD_2).D
    for x in (0.01, 0.3, 1.0, 3.0, 30.0):
        q = x * math.sqrt(D * zeta) / C_LIGHT
        assert scaling_consistency(m, zeta, q) < bound


def test_scaling_exact_for_pure_low_frequency_form():
    # eps - 1 = D/zeta exactly: nu huge with omega_p^2 = D nu
    D = 3.6e18
    nu = 1e40
    params = DrudeParameters(math.sqrt(D * nu), nu)
    zeta = 1e9
    q = 2.0 * math.sqrt(D * zeta) / C_LIGHT
    assert scaling_consistency(Drude(params), zeta, q) < 1e-12


def test_scaling_consistency_precondition():
    with pytest.raises(DomainError):
        scaling_consistency(Drude(GOLD_2), GOLD_2.nu, 1.0)


def test_mode_coordinates():
    zeta, q = 1e14, 1e7
    eps = Drude(GOLD_2).permittivity(zeta)
    mc = ModeCoordinates.build(zeta, q, eps, a=1e-6, D=low_frequency_strength(GOLD_2).D)
    assert mc.k_perp**2 == pytest.approx(q**2 - (zeta / C_LIGHT) ** 2, rel=1e-12)
    assert mc.p == pytest.approx(q * C_LIGHT / zeta)
    assert mc.s >= mc.p >= 1.0
    assert mc.y == pytest.approx(2 * q * 1e-6)
    assert mc.x == pytest.approx(mc.p / math.sqrt(eps - 1.0))


def test_surface_shape_edges_and_csv():
    m = Drude(GOLD_2)
    z = np.array([0.0, 1e10, 1e14])
    k = np.array([0.0, 1e5, 1e7])
    A, B = reflection_surface(m, z, k)
    assert A.shape == B.shape == (3, 3)
    assert np.all(A[0, 1:] == 1.0) and np.all(B[0, 1:] == 0.0)
    # k_perp = 0 -> p = 1, TE reduces to ((sqrt(eps)-1)/(sqrt(eps)+1))^2
    eps = m.permittivity(1e14)
    assert B[2, 0] == pytest.approx(((math.sqrt(eps) - 1) / (math.sqrt(eps) + 1)) ** 2, rel=1e-12)
    A_v, B_v = reflection_surface(Vacuum(), z[1:], k)
    assert not A_v.any() and not B_v.any()
    buf = io.StringIO()
    write_surface_csv(buf, z, k, A, B)
    lines = buf.getvalue().splitlines()
    assert lines[0] == "zeta_rad_s,kperp_rad_m,A,B"
    assert len(lines) == 10


def test_single_point_surface():
    A, B = reflection_surface(IdealMetal(), [1e12], [1e6])
    assert A.shape == (1, 1) and A[0, 0] == B[0, 0] == 1.0
