"""Squared Fresnel reflection coefficients for a vacuum/metal interface.

TM and TE coefficients A and B are written in terms of

    p = q c / zeta >= 1,   s = sqrt(epsilon - 1 + p^2),

with A = ((s - eps p)/(s + eps p))^2 and B = ((s - p)/(s + p))^2.  Both
are evaluated as r^2 with the numerators rewritten so that nothing
cancels when s is close to p:

    s - p      = (eps - 1) / (s + p)
    s - eps p  = (eps - 1)(1 - p^2 (eps + 1)) / (s + eps p)

and 1 - r^2 is carried alongside so that ln(1 - r^2 e^{-y}) stays accurate
when r^2 is close to one.
"""
from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np

from .constants import C_LIGHT
from .dispersion import Drude, IdealMetal, Plasma, Tabulated, Vacuum, low_frequency_strength, te_zero_mode_condition
from .errors import DomainError

__all__ = [
    "ModeCoordinates",
    "ReflectionPair",
    "fresnel_squared",
    "model_reflection",
    "reflection_terms",
    "zero_frequency_terms",
    "scaled_te_coefficient",
    "scaling_consistency",
    "reflection_surface",
    "write_surface_csv",
]

TM, TE = "TM", "TE"


@dataclass(frozen=True)
class ModeCoordinates:
    """Kinematic quantities of one (zeta, q) mode.  Works element-wise on arrays."""

    zeta: np.ndarray
    q: np.ndarray
    k_perp: np.ndarray
    p: np.ndarray
    s: np.ndarray
    x: np.ndarray
    y: np.ndarray
    x0: np.ndarray

    @classmethod
    def build(cls, zeta, q, epsilon, a=np.nan, D=np.nan):
        """Derive every field from ``zeta``, ``q`` and ``epsilon``.

        ``x`` is the TE scaling variable p / sqrt(eps - 1); ``y = 2 q a`` and
        ``x0 = sqrt(zeta / D)`` are NaN unless ``a`` and ``D`` are supplied.
        """
        zeta = np.asarray(zeta, dtype=float)
        q = np.asarray(q, dtype=float)
        eps = np.asarray(epsilon, dtype=float)
        if np.any(zeta <= 0):
            raise DomainError("mode coordinates need zeta > 0")
        kz = zeta / C_LIGHT
        if np.any(q < kz * (1 - 1e-12)):
            raise DomainError("q must satisfy q >= zeta/c")
        k_perp = np.sqrt(np.maximum(q**2 - kz**2, 0.0))
        p = np.maximum(q / kz, 1.0)
        s = np.sqrt(eps - 1.0 + p**2)
        with np.errstate(divide="ignore"):
            x = p / np.sqrt(eps - 1.0)
        return cls(zeta, q, k_perp, p, s, x, 2.0 * q * a, np.sqrt(zeta / D))


@dataclass(frozen=True)
class ReflectionPair:
    A: np.ndarray
    B: np.ndarray

    def lambdas(self, q, a):
        """(lambda_TM, lambda_TE) = (A, B) * exp(-2 q a)."""
        damp = np.exp(-2.0 * np.asarray(q) * a)
        return self.A * damp, self.B * damp


def _coefficients(eps, p):
    """(A, 1 - A, B, 1 - B) for finite eps >= 1 and p >= 1."""
    em1 = eps - 1.0
    s = np.sqrt(em1 + p * p)
    sp = s + p
    sep = s + eps * p
    r_te = em1 / (sp * sp)
    one_m_b = 4.0 * p * s / (sp * sp)
    r_tm = em1 * (1.0 - p * p * (eps + 1.0)) / (sep * sep)
    one_m_a = 4.0 * eps * p * s / (sep * sep)
    return r_tm * r_tm, one_m_a, r_te * r_te, one_m_b


def fresnel_squared(epsilon, zeta, q):
    """Squared reflection coefficients (A, B) at permittivity ``epsilon``.

    ``epsilon = inf`` is the ideal-metal sentinel and gives A = B = 1.
    """
    eps = np.asarray(epsilon, dtype=float)
    zeta = np.asarray(zeta, dtype=float)
    q = np.asarray(q, dtype=float)
    if np.any(zeta <= 0):
        raise DomainError("fresnel_squared needs zeta > 0")
    if np.any(q < zeta / C_LIGHT * (1 - 1e-12)):
        raise DomainError("q < zeta/c: not an evanescent-sector mode")
    if np.any(eps < 1):
        raise DomainError("epsilon must be >= 1 on the imaginary axis")
    p = np.maximum(q * C_LIGHT / zeta, 1.0)
    inf = np.isinf(eps)
    A, _, B, _ = _coefficients(np.where(inf, 2.0, eps), p)
    A = np.where(inf, 1.0, A)
    B = np.where(inf, 1.0, B)
    if A.ndim == 0:
        return ReflectionPair(float(A), float(B))
    return ReflectionPair(A, B)


def reflection_terms(model, zeta, p, polarization):
    """(r^2, 1 - r^2) for ``polarization`` at zeta > 0, as arrays broadcast over p.

    The model type is dispatched before any arithmetic; the ideal metal never
    goes through a large finite epsilon.
    """
    zeta = np.asarray(zeta, dtype=float)
    p = np.asarray(p, dtype=float)
    shape = np.broadcast_shapes(zeta.shape, p.shape)
    if isinstance(model, IdealMetal):
        return np.ones(shape), np.zeros(shape)
    if isinstance(model, Vacuum):
        return np.zeros(shape), np.ones(shape)
    eps = np.asarray(model.permittivity(zeta), dtype=float)
    A, one_m_a, B, one_m_b = _coefficients(eps, p)
    if polarization == TM:
        return np.broadcast_to(A, shape), np.broadcast_to(one_m_a, shape)
    return np.broadcast_to(B, shape), np.broadcast_to(one_m_b, shape)


def _tabulated_static_plasma_sq(model):
    """omega_p^2-like strength zeta^2 (eps - 1) at zeta -> 0 for tabulated data."""
    probes = model.zeta[:3][::-1]
    check = te_zero_mode_condition(model, probes)
    return 0.0 if check.satisfied else float(check.values[-1])


def zero_frequency_terms(model, q, polarization):
    """Limits zeta -> 0 of (r^2, 1 - r^2) at fixed q.

    The TM coefficient tends to one for every metal.  The TE coefficient
    tends to zero whenever zeta^2 (eps - 1) -> 0 (Drude) and to
    ((sqrt(wp^2 + q^2 c^2) - qc)/(sqrt(wp^2 + q^2 c^2) + qc))^2 for the
    plasma model.
    """
    q = np.asarray(q, dtype=float)
    one, zero = np.ones(q.shape), np.zeros(q.shape)
    if isinstance(model, Vacuum):
        return zero, one
    if isinstance(model, IdealMetal) or polarization == TM:
        return one, zero
    if isinstance(model, Drude):
        return zero, one
    if isinstance(model, Plasma):
        wp2 = model.omega_p**2
    elif isinstance(model, Tabulated):
        wp2 = _tabulated_static_plasma_sq(model)
    else:
        raise DomainError(f"no zero-frequency limit known for {type(model).__name__}")
    if wp2 == 0.0:
        return zero, one
    qc = q * C_LIGHT
    root = np.sqrt(wp2 + qc * qc)
    r = wp2 / (root + qc) ** 2
    return r * r, 4.0 * qc * root / (root + qc) ** 2


def model_reflection(model, zeta, q):
    """(A, B) for a dispersion model; zeta = 0 entries take the static limits."""
    zeta = np.asarray(zeta, dtype=float)
    q = np.asarray(q, dtype=float)
    zeta, q = np.broadcast_arrays(zeta, q)
    A = np.empty(zeta.shape)
    B = np.empty(zeta.shape)
    static = zeta == 0
    if np.any(static):
        A[static] = zero_frequency_terms(model, q[static], TM)[0]
        B[static] = zero_frequency_terms(model, q[static], TE)[0]
    dyn = ~static
    if np.any(dyn):
        if np.any(q[dyn] < zeta[dyn] / C_LIGHT * (1 - 1e-12)):
            raise DomainError("q < zeta/c: not an evanescent-sector mode")
        p = np.maximum(q[dyn] * C_LIGHT / zeta[dyn], 1.0)
        A[dyn] = reflection_terms(model, zeta[dyn], p, TM)[0]
        B[dyn] = reflection_terms(model, zeta[dyn], p, TE)[0]
    if A.ndim == 0:
        return ReflectionPair(float(A), float(B))
    return ReflectionPair(A, B)


def scaled_te_coefficient(x):
    """B(x) = (sqrt(1 + x^2) - x)^4, evaluated as (sqrt(1 + x^2) + x)^-4."""
    x = np.asarray(x, dtype=float)
    if np.any(x < 0):
        raise DomainError("x must be >= 0")
    out = 1.0 / (np.sqrt(1.0 + x * x) + x) ** 4
    return float(out) if out.ndim == 0 else out


def scaling_consistency(model, zeta, q):
    """Relative deviation of the full TE coefficient from its scaled form.

    Compares B from the full Drude permittivity with B(x) at
    x^2 = q^2 c^2 / (D zeta).  The deviation is of order zeta/nu, so the
    check is only meaningful for zeta < nu/10.
    """
    params = model.params if isinstance(model, Drude) else model
    if not zeta < params.nu / 10:
        raise DomainError("scaling_consistency requires zeta < nu/10")
    D = low_frequency_strength(params).D
    full = fresnel_squared(Drude(params).permittivity(zeta), zeta, q).B
    x = np.asarray(q) * C_LIGHT / np.sqrt(D * zeta)
    scaled = scaled_te_coefficient(x)
    return np.abs(full - scaled) / scaled


def reflection_surface(model, zeta_grid, kperp_grid):
    """A and B on a (zeta, k_perp) grid; rows follow zeta, columns k_perp.

    q = sqrt(k_perp^2 + zeta^2/c^2); zeta = 0 rows take the static limits.
    """
    z = np.asarray(zeta_grid, dtype=float)
    k = np.asarray(kperp_grid, dtype=float)
    if np.any(z < 0) or np.any(k < 0):
        raise DomainError("zeta and k_perp grids must be non-negative")
    Z, K = np.meshgrid(z, k, indexing="ij")
    q = np.sqrt(K**2 + (Z / C_LIGHT) ** 2)
    pair = model_reflection(model, Z, q)
    return np.atleast_2d(pair.A), np.atleast_2d(pair.B)


def write_surface_csv(stream, zeta_grid, kperp_grid, A, B):
    w = csv.writer(stream, lineterminator="\n")
    w.writerow(["zeta_rad_s", "kperp_rad_m", "A", "B"])
    for i, z in enumerate(zeta_grid):
        for j, k in enumerate(kperp_grid):
            w.writerow([repr(float(z)), repr(float(k)), repr(float(A[i, j])), repr(float(B[i, j]))])
