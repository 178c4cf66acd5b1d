"""Low-temperature expansion of the TE free energy of a Drude metal.

For zeta << nu the Drude permittivity reduces to eps - 1 = D/zeta with
D = omega_p^2 / nu, and the TE reflection coefficient depends on zeta and q
only through x = q c / sqrt(D zeta): B(x) = (sqrt(1 + x^2) - x)^4.  The TE
free energy becomes

    beta F_TE = C sum'_m g(m),   g(m) = m int_{x0}^inf x ln(1 - B(x) e^{-alpha x}) dx,

with C = omega_p^2 k T / (c^2 hbar nu) and alpha = 2 a sqrt(2 pi C m).
Near m = 0, g(m) = g'(0) m + 2 a sqrt(2 pi C) I m^{3/2} + ..., so the
temperature-dependent part is a sum-minus-integral of two power terms.
It is evaluated in two ways:

* Euler-Maclaurin summation started at m = p, which sidesteps the
  divergent higher derivatives of m^{3/2} at the origin;
* the zeta-function route, where the sums over m^1 and m^{3/2} are the
  regularised values zeta(-1) and zeta(-3/2).

The resulting expansion is dF_TE = C1 T^2 (1 - C2 T^{1/2} + ...).
"""
from __future__ import annotations

import logging
import math
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import numpy as np
from scipy import integrate

from .constants import C_LIGHT, HBAR, K_B
from .dispersion import Drude, DrudeParameters, low_frequency_strength
from .errors import DomainError, NumericalError
from .reflection import scaled_te_coefficient

log = logging.getLogger(__name__)

__all__ = [
    "riemann_zeta",
    "bernoulli",
    "g_prime_zero_analytic",
    "g_prime_zero_quadrature",
    "g_prime_zero_sinh",
    "integral_I",
    "integral_I_quadrature",
    "integral_Bx",
    "integral_Bx_quadrature",
    "integral_Bx2",
    "integral_Bx2_quadrature",
    "ScaledTE",
    "coefficient_C",
    "leading_coefficient_C1",
    "CorrectionCoefficient",
    "correction_coefficient_C2",
    "pade_delta_F",
    "EulerMaclaurinPieces",
    "euler_maclaurin_shifted",
    "power_term_pieces",
    "ZetaRouteExpansion",
    "zeta_route",
    "AsymptoticCoefficients",
    "asymptotic_coefficients",
    "validity_parameter",
]


# -- special functions -------------------------------------------------------


@lru_cache(maxsize=None)
def bernoulli(n):
    """Bernoulli number B_n as a Fraction (convention B_1 = -1/2)."""
    if n < 0:
        raise ValueError("n must be >= 0")
    B = [Fraction(1)]
    for m in range(1, n + 1):
        B.append(-sum(math.comb(m + 1, k) * B[k] for k in range(m)) / (m + 1))
    return B[n]


def _zeta_euler_maclaurin(s, N=30, K=8):
    """zeta(s) for real s != 1 by a direct sum plus Euler-Maclaurin tail."""
    head = math.fsum(n ** (-s) for n in range(1, N))
    tail = N ** (1.0 - s) / (s - 1.0) + 0.5 * N ** (-s)
    rising = s  # s (s+1) ... (s + 2k - 2)
    for k in range(1, K + 1):
        tail += float(bernoulli(2 * k)) / math.factorial(2 * k) * rising * N ** (-s - 2 * k + 1)
        rising *= (s + 2 * k - 1) * (s + 2 * k)
    return head + tail


def riemann_zeta(s):
    """Riemann zeta function for real s.

    Non-positive integers use zeta(-n) = -B_{n+1}/(n+1) exactly; other
    arguments below -1/2 go through the functional equation
    zeta(s) = 2^s pi^(s-1) sin(pi s/2) Gamma(1-s) zeta(1-s).
    """
    s = float(s)
    if s == 1.0:
        raise DomainError("zeta has a pole at s = 1")
    if s <= 0 and s == int(s):
        n = int(-s)
        return float(-bernoulli(n + 1) / (n + 1)) if n > 0 else -0.5
    if s < -0.5:
        # the direct series would need many more correction terms here
        return (
            2.0**s * math.pi ** (s - 1.0) * math.sin(math.pi * s / 2.0) * math.gamma(1.0 - s) * riemann_zeta(1.0 - s)
        )
    return _zeta_euler_maclaurin(s)


# -- closed-form integrals over the scaled TE coefficient ---------------------


def g_prime_zero_analytic():
    """g'(0) = int_0^inf x ln(1 - B(x)) dx = -(2 ln 2 - 1)/4."""
    return -(2.0 * math.log(2.0) - 1.0) / 4.0


def _one_minus_B(x):
    # with r = sqrt(1+x^2) - x: 1 - r^2 = 2 x r, so 1 - B = 2 x r (1 + r^2)
    r = 1.0 / (math.sqrt(1.0 + x * x) + x)
    return 2.0 * x * r * (1.0 + r * r)


def _log_one_minus_B(x):
    B = scaled_te_coefficient(x)
    return math.log1p(-B) if B < 0.5 else math.log(_one_minus_B(x))


def _quad_0_inf(f, split=1.0):
    opts = dict(epsabs=0.0, epsrel=1e-13, limit=400)
    v1, e1 = integrate.quad(f, 0.0, split, **opts)
    v2, e2 = integrate.quad(f, split, np.inf, **opts)
    return v1 + v2


def g_prime_zero_quadrature():
    """int_0^inf x ln(1 - B(x)) dx by adaptive quadrature."""
    return _quad_0_inf(lambda x: x * _log_one_minus_B(x) if x > 0 else 0.0)


def g_prime_zero_sinh():
    """Same integral after x = sinh t: int_0^inf sinh t cosh t ln(1 - e^{-4t}) dt."""

    def f(t):
        if t == 0:
            return 0.0
        # sinh t cosh t = e^{2t} (1 - e^{-4t}) / 4
        e4 = math.exp(-4.0 * t)
        return 0.25 * math.exp(2.0 * t) * (1.0 - e4) * math.log1p(-e4)

    opts = dict(epsabs=0.0, epsrel=1e-13, limit=400)
    v1, _ = integrate.quad(f, 0.0, 1.0, **opts)
    v2, _ = integrate.quad(f, 1.0, 40.0, **opts)  # integrand ~ e^{-2t}/4
    return v1 + v2


def integral_I():
    """I = int_0^inf x^2 B / (1 - B) dx = 1/12."""
    return 1.0 / 12.0


def integral_I_quadrature():
    return _quad_0_inf(lambda x: x * x * scaled_te_coefficient(x) / _one_minus_B(x) if x > 0 else 0.0)


def integral_Bx():
    """int_0^inf B x dx = 1/12."""
    return 1.0 / 12.0


def integral_Bx_quadrature():
    return _quad_0_inf(lambda x: x * scaled_te_coefficient(x))


def integral_Bx2():
    """int_0^inf B x^2 dx = 8/105."""
    return 8.0 / 105.0


def integral_Bx2_quadrature():
    return _quad_0_inf(lambda x: x * x * scaled_te_coefficient(x))


# -- the scaled TE free energy -----------------------------------------------


def _drude_params(params):
    if isinstance(params, Drude):
        return params.params
    if not isinstance(params, DrudeParameters):
        raise DomainError("the low-temperature expansion applies to Drude metals only")
    return params


def _c_per_kelvin(params):
    """C / T = omega_p^2 k / (c^2 hbar nu), in 1/(m^2 K)."""
    p = _drude_params(params)
    D = low_frequency_strength(p).D
    return D * K_B / (C_LIGHT**2 * HBAR)


def coefficient_C(params, T):
    """C = omega_p^2 / (c^2 hbar nu beta) = omega_p^2 k T / (c^2 hbar nu), in 1/m^2."""
    if not T > 0:
        raise DomainError("C needs T > 0")
    return _c_per_kelvin(params) * T


@dataclass(frozen=True)
class ScaledTE:
    """beta F_TE = C sum'_m g(m) in the zeta << nu limit."""

    params: DrudeParameters
    a: float
    T: float

    @property
    def C(self):
        return coefficient_C(self.params, self.T)

    def alpha(self, m):
        """alpha = 2 a sqrt(2 pi C m), so that y = alpha x."""
        return 2.0 * self.a * math.sqrt(2.0 * math.pi * self.C * m)

    def x0(self, m):
        """sqrt(zeta_m / D)."""
        zeta = 2.0 * math.pi * K_B * self.T * m / HBAR
        return math.sqrt(zeta / low_frequency_strength(self.params).D)

    def g(self, m, lower_limit=True):
        """g(m) = m int_{x0}^inf x ln(1 - B(x) e^{-alpha x}) dx (g(0) = 0, g <= 0).

        ``lower_limit=False`` puts x0 to zero as in the small-m expansion.
        """
        if m < 0:
            raise DomainError("m must be >= 0")
        if m == 0:
            return 0.0
        al = self.alpha(m)
        t0 = math.asinh(self.x0(m)) if lower_limit else 0.0

        # x = sinh t: B = e^{-4t}, and the integrand decays like e^{-2t}
        def f(t):
            u = 4.0 * t + al * math.sinh(t)
            if u == 0:
                return 0.0
            lg = math.log1p(-math.exp(-u)) if u > 0.7 else math.log(-math.expm1(-u))
            return 0.5 * math.sinh(2.0 * t) * lg

        v1, _ = integrate.quad(f, t0, t0 + 1.0, epsabs=0.0, epsrel=1e-12, limit=400)
        v2, _ = integrate.quad(
            f, t0 + 1.0, max(t0 + 2.0, 40.0), epsabs=1e-14 * abs(v1), epsrel=1e-12, limit=400
        )
        return m * (v1 + v2)


def leading_coefficient_C1(params):
    """C1 in dF_TE = C1 T^2: (omega_p^2 k^2 / (c^2 hbar nu)) (2 ln 2 - 1)/48, in J/(m^2 K^2)."""
    return _c_per_kelvin(params) * K_B * (-g_prime_zero_analytic() / 12.0)


# -- Euler-Maclaurin with a shifted start -----------------------------------


@dataclass(frozen=True)
class EulerMaclaurinPieces:
    sigma: float
    p: int
    S: float  # sum_{n<p} g(n) + g(p)/2 - int_0^p g
    first_derivative_term: float  # -g'(p)/12
    third_derivative_term: float  # +g'''(p)/720
    fifth_derivative_term: float  # -g^(5)(p)/30240
    delta_S: float  # S - g'(p)/12 + g'''(p)/720
    error_estimate: float  # the next (fifth-derivative) term


_EM_COEFFS = (-1.0 / 12.0, 1.0 / 720.0, -1.0 / 30240.0)  # -B_2k/(2k)!


def _falling(sigma, k):
    out = 1.0
    for j in range(k):
        out *= sigma - j
    return out


def power_term_pieces(sigma, p=1):
    """Euler-Maclaurin pieces of sum'_n n^sigma - int_0^inf u^sigma du started at n = p.

    All pieces are closed forms.  For sigma = 3/2 and p = 1 the corrected
    sum is about -0.02552, close to zeta(-3/2).
    """
    if sigma < 0:
        raise DomainError("sigma must be >= 0")
    if not (p >= 1 and int(p) == p):
        raise DomainError("p must be a positive integer")
    p = int(p)
    head = math.fsum(float(n) ** sigma for n in range(p))
    S = head + 0.5 * p**sigma - p ** (sigma + 1) / (sigma + 1)
    d1 = _EM_COEFFS[0] * sigma * p ** (sigma - 1)
    d3 = _EM_COEFFS[1] * _falling(sigma, 3) * p ** (sigma - 3)
    d5 = _EM_COEFFS[2] * _falling(sigma, 5) * p ** (sigma - 5)
    return EulerMaclaurinPieces(sigma, p, S, d1, d3, d5, S + d1 + d3, d5)


def _fd_derivative(g, x, order, h=None):
    """Central finite-difference derivative of order 1, 3 or 5."""
    h = h or 0.05 * max(1.0, abs(x))
    stencils = {
        1: ([-3, -2, -1, 1, 2, 3], [-1 / 60, 3 / 20, -3 / 4, 3 / 4, -3 / 20, 1 / 60]),
        3: ([-4, -3, -2, -1, 1, 2, 3, 4], [-7 / 240, 3 / 10, -169 / 120, 61 / 30, -61 / 30, 169 / 120, -3 / 10, 7 / 240]),
        5: ([-4, -3, -2, -1, 1, 2, 3, 4], [1 / 6, -3 / 2, 13 / 3, -29 / 6, 29 / 6, -13 / 3, 3 / 2, -1 / 6]),
    }
    offs, cs = stencils[order]
    return math.fsum(c * g(x + k * h) for k, c in zip(offs, cs)) / h**order


def euler_maclaurin_shifted(g, p=1, derivatives=None, orders=2, check_tail=True):
    """Approximate sum'_{n>=0} g(n) - int_0^inf g(u) du from the start point p.

    Parameters
    ----------
    g : callable
        Smooth on [p, inf).
    p : int
        Start of the Euler-Maclaurin part; terms below p are summed directly.
    derivatives : dict, optional
        ``{1: g1, 3: g3, 5: g5}`` analytic odd derivatives.  Missing ones are
        taken by central finite differences.
    orders : int
        Number of Bernoulli corrections: 1 (g'), 2 (g', g''') or 3 (up to g^(5)).
    check_tail : bool
        Verify that int_p^inf g converges.  The tail integral cancels and is
        never used otherwise; switch the check off to get the regularised
        value for growing g such as polynomials.

    Returns
    -------
    EulerMaclaurinPieces
        ``delta_S`` is the approximation, ``error_estimate`` the first
        neglected term.  Here ``S`` counts g(0) with half weight.
    """
    if not (p >= 1 and int(p) == p):
        raise DomainError("p must be a positive integer")
    if orders not in (1, 2, 3):
        raise ValueError("orders must be 1, 2 or 3")
    p = int(p)
    derivatives = derivatives or {}
    if check_tail:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", integrate.IntegrationWarning)
            res = integrate.quad(g, p, np.inf, limit=200, full_output=1)
        val, err = res[0], res[1]
        # a fourth element is the QUADPACK failure message
        if len(res) > 3 or not (math.isfinite(val) and math.isfinite(err)):
            raise NumericalError("tail integral of g does not converge", p=p, estimate=val, error=err)
    head = math.fsum(g(n) for n in range(1, p)) + 0.5 * g(0)
    integral, _ = integrate.quad(g, 0.0, p, epsabs=0.0, epsrel=1e-13, limit=200)
    S = head + 0.5 * g(p) - integral

    def deriv(k):
        return derivatives[k](p) if k in derivatives else _fd_derivative(g, p, k)

    terms = [_EM_COEFFS[i] * deriv(2 * i + 1) for i in range(3)]
    delta = S + math.fsum(terms[:orders])
    # first neglected term; with all three used, the last one is a safe bound
    err = terms[min(orders, 2)]
    return EulerMaclaurinPieces(float("nan"), p, S, terms[0], terms[1], terms[2], delta, err)


# -- correction coefficient and Pade form -------------------------------------


def em_factor(p=1, exact_zeta=False):
    """Factor multiplying 3 a sqrt(2 pi C) / (-12 g'(0)) in the T^{1/2} correction.

    From the shifted Euler-Maclaurin sum it is -8 dS_{3/2}(p) (0.2042 for
    p = 1, printed as 0.204); with ``exact_zeta`` it is -8 zeta(-3/2).
    """
    if exact_zeta:
        return -8.0 * riemann_zeta(-1.5)
    return -8.0 * power_term_pieces(1.5, p).delta_S


@dataclass(frozen=True)
class CorrectionCoefficient:
    C2: float  # K^(-1/2)
    factor: float  # dimensionless Euler-Maclaurin / zeta factor
    exact_zeta: bool


def correction_coefficient_C2(params, a, exact_zeta=False, p=1, factor=None):
    """C2 in dF_TE = C1 T^2 (1 - C2 T^{1/2} + ...).

    C2 = factor * 3 a sqrt(2 pi C/T) / (-12 g'(0)).  ``factor`` defaults to
    the Euler-Maclaurin value at start ``p``; pass ``exact_zeta=True`` for
    -8 zeta(-3/2), or a number (e.g. 0.204) to override.
    """
    if not a > 0:
        raise DomainError("a must be positive")
    f = factor if factor is not None else em_factor(p, exact_zeta)
    c2 = f * 3.0 * a * math.sqrt(2.0 * math.pi * _c_per_kelvin(params)) / (-12.0 * g_prime_zero_analytic())
    return CorrectionCoefficient(c2, f, exact_zeta)


def pade_delta_F(T, C1, C2):
    """dF_th = C1 T^2 / (1 + C2 T^{1/2}); agrees with C1 T^2 (1 - C2 T^{1/2}) to two terms."""
    T = np.asarray(T, dtype=float)
    if np.any(T < 0):
        raise DomainError("T must be >= 0")
    out = C1 * T**2 / (1.0 + C2 * np.sqrt(T))
    return float(out) if out.ndim == 0 else out


# -- zeta-function route -----------------------------------------------------


@dataclass(frozen=True)
class ZetaRouteExpansion:
    T: float
    t2_coefficient: float  # J/(m^2 K^2)
    t52_coefficient: float  # J/(m^2 K^(5/2))
    terms: tuple  # (T^2 term, T^{5/2} term) at this T, J/m^2
    zeta_m1: float
    zeta_m32: float
    discarded: str

    @property
    def delta_F(self):
        return math.fsum(self.terms)


def zeta_route(params, a, T, n_orders=2):
    """Temperature-dependent TE free energy via the Mellin representation.

    dF_TE = -(C/beta) [ -g'(0) zeta(-1) - 2 a sqrt(2 pi C) I zeta(-3/2) + ... ].

    Closing the Mellin contour also produces a term from the pole of
    zeta(s/2 - 1) at s = 4; it is independent of T (and divergent once the
    lower limit x0 is set to zero), so it is dropped.
    """
    if n_orders not in (1, 2):
        raise ValueError("n_orders must be 1 or 2")
    if not T > 0:
        raise DomainError("T must be positive")
    cpk = _c_per_kelvin(params)
    z1, z32 = riemann_zeta(-1), riemann_zeta(-1.5)
    t2 = cpk * K_B * (g_prime_zero_analytic() * z1)
    t52 = cpk * K_B * (2.0 * a * math.sqrt(2.0 * math.pi * cpk) * integral_I() * z32)
    note = "T-independent Gamma(4)/(2 a x)^4 term from the s = 4 pole omitted"
    log.info(note)
    terms = (t2 * T**2,) if n_orders == 1 else (t2 * T**2, t52 * T**2.5)
    return ZetaRouteExpansion(T, t2, t52 if n_orders == 2 else 0.0, terms, z1, z32, note)


# -- summary -----------------------------------------------------------------


@dataclass(frozen=True)
class AsymptoticCoefficients:
    C_per_K: float  # C/T, 1/(m^2 K)
    g_prime_0: float
    I: float
    C1: float
    C2: float  # Euler-Maclaurin factor
    C2_exact_zeta: float
    factor: float
    factor_exact_zeta: float
    zeta_m32: float
    a: float
    special_values: dict = field(default_factory=dict)

    def pade(self, T, exact_zeta=False):
        return pade_delta_F(T, self.C1, self.C2_exact_zeta if exact_zeta else self.C2)


def asymptotic_coefficients(params, a, p=1):
    em = correction_coefficient_C2(params, a, p=p)
    ex = correction_coefficient_C2(params, a, exact_zeta=True)
    return AsymptoticCoefficients(
        C_per_K=_c_per_kelvin(params),
        g_prime_0=g_prime_zero_analytic(),
        I=integral_I(),
        C1=leading_coefficient_C1(params),
        C2=em.C2,
        C2_exact_zeta=ex.C2,
        factor=em.factor,
        factor_exact_zeta=ex.factor,
        zeta_m32=riemann_zeta(-1.5),
        a=a,
        special_values={
            "zeta(-1)": riemann_zeta(-1),
            "zeta(-3/2)": riemann_zeta(-1.5),
            "zeta(5/2)": riemann_zeta(2.5),
            "Gamma(4)": math.gamma(4.0),
            "res Gamma(0)": 1.0,
            "res Gamma(-1)": -1.0,
        },
    )


def validity_parameter(params, a, T):
    """a sqrt(C); the two-term expansion needs this << 1."""
    return a * math.sqrt(coefficient_C(params, T))
