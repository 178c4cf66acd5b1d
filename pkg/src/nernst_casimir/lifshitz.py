"""Lifshitz free energy between two identical half-spaces.

Per unit area,

    F(T) = k T / (2 pi) sum'_m  int_{zeta_m/c}^inf q [ln(1 - A e^{-2qa}) + ln(1 - B e^{-2qa})] dq,

with zeta_m = m 2 pi k T / hbar and the m = 0 term at half weight.  The
q-integral is written in y = 2 q a,

    int q ln(1 - lambda) dq = G(zeta) / (4 a^2),   G(zeta) = int_{y0}^inf y ln(1 - r^2 e^{-y}) dy,

with y0 = 2 a zeta / c, and G is evaluated by the trapezoidal rule in
s = ln(y - y0) on a fixed node set.  That rule converges exponentially
(the integrand is analytic in a strip |Im s| < pi/2) and, because its
nodes move smoothly with zeta, its residual error is a smooth function of
zeta.  The temperature-dependent part F(T) - F(0) is therefore computed as
the Matsubara sum of G minus the continuum integral of the same G: the
quadrature error cancels and only the physical difference survives.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

import numpy as np

from .constants import C_LIGHT, HBAR, K_B, matsubara_step
from .errors import DomainError, NumericalError, TruncationError
from .reflection import TE, TM, reflection_terms, zero_frequency_terms

log = logging.getLogger(__name__)

__all__ = [
    "TE",
    "TM",
    "Geometry",
    "ThermalContext",
    "FreeEnergyBreakdown",
    "ZeroTemperatureResult",
    "DeltaFreeEnergy",
    "inner_integral",
    "mode_integral",
    "free_energy",
    "free_energy_T0",
    "delta_free_energy",
    "delta_free_energy_TE",
    "entropy",
]

POLARIZATIONS = (TM, TE)

# log(y - y0) window: below e^-40 the integrand is constant to round-off,
# above e^4.2 = 67 it is below e^-67 of its peak
_S_MIN, _S_MAX = -40.0, 4.2
_N_NODES = 264  # even, so the odd nodes can be dropped for the 2h estimate
_Y_CUT = 60.0  # zeta cutoff for sum-minus-integral, in units of c/(2a)
_CHUNK = 2048


@dataclass(frozen=True)
class Geometry:
    a: float

    def __post_init__(self):
        if not self.a > 0:
            raise DomainError("gap width a must be positive")


@dataclass(frozen=True)
class ThermalContext:
    T: float

    def __post_init__(self):
        if not self.T > 0:
            raise DomainError("the Matsubara sum needs T > 0; use free_energy_T0 for T = 0")

    @property
    def beta(self):
        return 1.0 / (K_B * self.T)

    @property
    def matsubara_step(self):
        return matsubara_step(self.T)


def _nodes(n=_N_NODES):
    s = np.linspace(_S_MIN, _S_MAX, n + 1)
    h = (_S_MAX - _S_MIN) / n
    t = np.exp(s)
    w = t * h
    w[0] *= 0.5
    w[-1] *= 0.5
    # coarse rule on every other node
    w2 = 2.0 * t[::2] * h
    w2[0] *= 0.5
    w2[-1] *= 0.5
    return t, w, w2


_T_NODES, _W_FINE, _W_COARSE = _nodes()


def _log_one_minus(r2, one_m_r2, y):
    """ln(1 - r^2 e^{-y}) without cancellation for r^2 e^{-y} near 0 or 1."""
    lam = r2 * np.exp(-y)
    small = lam < 0.5
    out = np.empty(np.broadcast_shapes(lam.shape, y.shape))
    out[small] = np.log1p(-lam[small])
    big = ~small
    if np.any(big):
        r2b = np.broadcast_to(r2, out.shape)[big]
        omb = np.broadcast_to(one_m_r2, out.shape)[big]
        out[big] = np.log(omb - r2b * np.expm1(-y[big]))
    return out


def inner_integral(model, a, zetas, polarization, nodes=None):
    """G(zeta) = int_{y0}^inf y ln(1 - r^2 e^{-y}) dy for each zeta.

    Returns ``(G, G_coarse)``: the fine rule and the rule on every other
    node.  Their difference bounds the error of the coarse rule and is
    used as a conservative error estimate for the fine one.
    """
    if polarization not in POLARIZATIONS:
        raise ValueError(f"polarization must be 'TE' or 'TM', got {polarization!r}")
    t, w, w2 = nodes or (_T_NODES, _W_FINE, _W_COARSE)
    z = np.atleast_1d(np.asarray(zetas, dtype=float))
    if np.any(z < 0):
        raise DomainError("zeta must be >= 0")
    fine = np.zeros(z.shape)
    coarse = np.zeros(z.shape)
    static = z == 0
    if np.any(static):
        y = t  # y0 = 0
        r2, omr = zero_frequency_terms(model, y / (2.0 * a), polarization)
        f = y * _log_one_minus(r2, omr, y)
        fine[static] = f @ w
        coarse[static] = f[::2] @ w2
    dyn = ~static
    if np.any(dyn):
        zd = z[dyn]
        y0 = 2.0 * a * zd / C_LIGHT
        y = y0[:, None] + t[None, :]
        p = y / y0[:, None]
        r2, omr = reflection_terms(model, zd[:, None], p, polarization)
        f = y * _log_one_minus(r2, omr, y)
        fine[dyn] = f @ w
        coarse[dyn] = f[:, ::2] @ w2
    return fine, coarse


def mode_integral(model, a, zeta, polarization, weight="full", tol_inner=1e-10):
    """int_{zeta/c}^inf q ln(1 - lambda) dq for one Matsubara frequency (1/m^2).

    The node count is doubled until the fine/coarse difference is below
    ``tol_inner`` relative; failing that a :class:`NumericalError` is raised.
    ``weight='half'`` applies the m = 0 half weight.
    """
    if weight not in ("full", "half"):
        raise ValueError("weight must be 'full' or 'half'")
    n = _N_NODES
    for _ in range(4):
        nodes = None if n == _N_NODES else _nodes(n)
        fine, coarse = inner_integral(model, a, [zeta], polarization, nodes)
        err = abs(fine[0] - coarse[0])
        if err <= tol_inner * abs(fine[0]) or fine[0] == 0.0:
            value = fine[0] / (4.0 * a * a)
            return 0.5 * value if weight == "half" else value
        n *= 2
    raise NumericalError(
        "inner quadrature did not converge", zeta=zeta, polarization=polarization, value=fine[0], error=err
    )


@dataclass
class FreeEnergyBreakdown:
    T: float
    a: float
    F_TE: float
    F_TM: float
    m_max: int
    terms: np.ndarray = field(repr=False)  # weighted |G_TM + G_TE| per m, diagnostic
    tol_achieved: float
    te_zero_mode: bool  # True when the static TE term vanishes identically

    @property
    def F_total(self):
        return self.F_TE + self.F_TM


def _check_inner(fine, coarse, tol_inner, where):
    err = np.abs(fine - coarse)
    # absolute floor: far-tail terms underflow into subnormals
    bad = err > tol_inner * np.abs(fine) + 1e-290
    if np.any(bad):
        i = int(np.argmax(bad))
        raise NumericalError(
            "inner quadrature above tolerance", where=where, index=i, value=fine[i], error=err[i]
        )
    return float(np.max(err / np.where(fine == 0, 1.0, np.abs(fine)), initial=0.0))


def free_energy(model, a, T, tol_inner=1e-10, tol_sum=1e-12, m_cap=10_000_000, consecutive=5):
    """Casimir free energy per unit area at temperature T > 0 (J/m^2).

    The Matsubara sum runs in ascending m until ``consecutive`` successive
    terms are each below ``tol_sum`` times the running sum; the terms are
    then added with ``math.fsum`` (exactly rounded, hence independent of
    chunking and evaluation order).
    """
    Geometry(a)
    ctx = ThermalContext(T)
    step = ctx.matsubara_step
    parts = {TM: [], TE: []}
    all_terms = []
    partial, run, m0 = 0.0, 0, 0
    m_stop = None
    while m_stop is None:
        if m0 >= m_cap:
            F_part = K_B * T / (8.0 * math.pi * a * a) * math.fsum(np.concatenate(all_terms))
            raise TruncationError("Matsubara sum reached m_cap", partial=F_part, m_cap=m_cap)
        m = np.arange(m0, min(m0 + _CHUNK, m_cap))
        zetas = m * step
        wts = np.where(m == 0, 0.5, 1.0)
        chunk_total = np.zeros(m.shape)
        for pol in POLARIZATIONS:
            fine, coarse = inner_integral(model, a, zetas, pol)
            _check_inner(fine, coarse, tol_inner, f"{pol} at T={T}")
            parts[pol].append(wts * fine)
            chunk_total += wts * fine
        for i, term in enumerate(chunk_total):
            if abs(term) <= tol_sum * abs(partial + term):
                run += 1
                if run >= consecutive:
                    m_stop = m0 + i
                    break
            else:
                run = 0
            partial += term
        all_terms.append(chunk_total)
        m0 += _CHUNK
    n = m_stop + 1
    pref = K_B * T / (8.0 * math.pi * a * a)
    F = {pol: pref * math.fsum(np.concatenate(parts[pol])[:n]) for pol in POLARIZATIONS}
    terms = np.abs(np.concatenate(all_terms)[:n])
    total = F[TM] + F[TE]
    # geometric tail beyond m_stop: decay length in m is c / (2 a step)
    tail = float(terms[-1]) * max(1.0, C_LIGHT / (2.0 * a * step)) * pref
    tol = tail / abs(total) if total != 0 else 0.0
    static_te = inner_integral(model, a, [0.0], TE)[0][0]
    return FreeEnergyBreakdown(T, a, F[TE], F[TM], int(m_stop), terms, tol, bool(static_te == 0.0))


def _continuum(model, a, pol, zeta_top, h=0.1, span=50.0):
    """int_0^zeta_top G(zeta) d zeta, trapezoid rule in ln(zeta).

    Returns ``(fine, outer_coarse, inner_coarse)``: the full-resolution
    value, the value on every other outer node, and the value with the
    coarse inner rule.
    """
    n = int(math.ceil(span / h))
    n += n % 2
    v = np.linspace(math.log(zeta_top) - span, math.log(zeta_top), n + 1)
    hv = span / n
    z = np.exp(v)
    G, Gc = [], []
    for i in range(0, z.size, _CHUNK):
        f, c = inner_integral(model, a, z[i : i + _CHUNK], pol)
        G.append(f)
        Gc.append(c)
    G, Gc = np.concatenate(G), np.concatenate(Gc)

    def trap(g, zz, hh):
        f = g * zz
        # G is flat below the window
        return float(hh * (math.fsum(f[1:-1]) + 0.5 * (f[0] + f[-1])) + g[0] * zz[0])

    return trap(G, z, hv), trap(G[::2], z[::2], 2 * hv), trap(Gc, z, hv)


@dataclass(frozen=True)
class ZeroTemperatureResult:
    a: float
    F_TE: float
    F_TM: float
    error_estimate: float  # relative

    @property
    def F_total(self):
        return self.F_TE + self.F_TM


def free_energy_T0(model, a, tol=1e-9):
    """Zero-temperature free energy per unit area (J/m^2).

    F(0) = hbar/(4 pi^2) int_0^inf d zeta int_{zeta/c}^inf q [ln(1-lambda_TM) + ln(1-lambda_TE)] dq,

    i.e. the Matsubara sum replaced by its continuum limit.  The outer
    integral uses the trapezoidal rule in ln(zeta), the inner one the same
    evaluator as the finite-temperature sum.
    """
    Geometry(a)
    zeta_top = _Y_CUT * C_LIGHT / (2.0 * a)
    out, errs = {}, []
    for pol in POLARIZATIONS:
        fine, coarse, _ = _continuum(model, a, pol, zeta_top)
        out[pol] = HBAR / (16.0 * math.pi**2 * a * a) * fine
        if fine != 0:
            errs.append(abs(fine - coarse) / abs(fine))
    # the two rules can agree to the last bit; report round-off then
    err = max(errs, default=0.0)
    if errs:
        err = max(err, np.finfo(float).eps)
    if err > tol:
        raise NumericalError("T = 0 integral above tolerance", error=err, F_TE=out[TE], F_TM=out[TM])
    return ZeroTemperatureResult(a, out[TE], out[TM], err)


@dataclass(frozen=True)
class DeltaFreeEnergy:
    """F_pol(T) - F_pol(0) from one shared integrand family."""

    T: float
    polarization: str
    delta: float  # J/m^2
    sum_part: float  # k T/(8 pi a^2) sum' G(zeta_m)
    integral_part: float  # same prefactor times (1/step) int G d zeta
    m_max: int
    error_estimate: float  # relative to |delta|


def delta_free_energy(model, a, T, polarization, tol=1e-4):
    """Temperature-dependent part of one polarization's free energy (J/m^2).

    Sum and continuum integral are truncated at the same frequency
    zeta_M ~ 60 c/(2a); beyond it G is below e^-60 of its scale.  The error
    estimate repeats the whole computation on the coarse node subsets.
    """
    Geometry(a)
    ctx = ThermalContext(T)
    step = ctx.matsubara_step
    M = int(math.ceil(_Y_CUT * C_LIGHT / (2.0 * a * step)))
    fine_terms, coarse_terms = [], []
    for m0 in range(0, M + 1, _CHUNK):
        m = np.arange(m0, min(m0 + _CHUNK, M + 1))
        fine, coarse = inner_integral(model, a, m * step, polarization)
        w = np.where(m == 0, 0.5, 1.0)
        fine_terms.append(w * fine)
        coarse_terms.append(w * coarse)
    fine_terms = np.concatenate(fine_terms)
    coarse_terms = np.concatenate(coarse_terms)
    # the last point closes the trapezoid on [0, zeta_M]
    fine_terms[-1] *= 0.5
    coarse_terms[-1] *= 0.5
    s_fine, s_coarse = math.fsum(fine_terms), math.fsum(coarse_terms)

    # integral on the fine inner rule, and with the coarse inner rule
    i_fine, i_fine_v2, i_coarse = _continuum(model, a, polarization, M * step)
    pref = K_B * T / (8.0 * math.pi * a * a)
    sum_part = pref * s_fine
    int_part = pref * i_fine / step
    delta = sum_part - int_part
    delta_coarse = pref * (s_coarse - i_coarse / step)
    err_abs = abs(delta - delta_coarse) + pref * abs(i_fine - i_fine_v2) / step
    rel = err_abs / abs(delta) if delta != 0 else (0.0 if err_abs == 0 else math.inf)
    if rel > tol:
        raise NumericalError(
            "delta free energy above tolerance",
            T=T,
            polarization=polarization,
            sum_part=sum_part,
            integral_part=int_part,
            error=rel,
        )
    return DeltaFreeEnergy(T, polarization, delta, sum_part, int_part, M, rel)


def delta_free_energy_TE(model, a, T, tol=1e-4):
    """F_TE(T) - F_TE(0); T = 0 gives exactly zero."""
    if T == 0:
        return 0.0
    return delta_free_energy(model, a, T, TE, tol).delta


def entropy(model, a, T, h=None, tol=1e-4):
    """Casimir entropy per unit area -dF/dT by a central difference (J/(m^2 K)).

    F(0) drops out of the difference, so the cancellation-safe
    temperature-dependent parts are differenced instead of the totals.
    """
    if h is None:
        h = max(1e-3, T / 20.0)
    if not (T > h > 0):
        raise DomainError("entropy needs T > h > 0")

    def dF(t):
        return sum(delta_free_energy(model, a, t, pol, tol).delta for pol in POLARIZATIONS)

    return -(dF(T + h) - dF(T - h)) / (2.0 * h)
