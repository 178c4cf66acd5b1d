"""Permittivity on the imaginary frequency axis.

All frequencies are angular frequencies in rad/s.  Every model exposes
``permittivity(zeta)`` which accepts scalars or arrays and returns
epsilon(i zeta).  The ideal metal returns ``inf`` as a sentinel; the
reflection code dispatches on the model type before doing arithmetic,
so the infinity never propagates into a formula.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import integrate
from scipy.interpolate import PchipInterpolator
from scipy.special import expit, log_expit

from .constants import C_LIGHT, ev_to_rad_s
from .errors import DegenerateModelError, DomainError, RangeError, ValidationError

__all__ = [
    "DrudeParameters",
    "Drude",
    "Plasma",
    "IdealMetal",
    "Vacuum",
    "Tabulated",
    "LowFrequencyStrength",
    "ZeroModeCheck",
    "GOLD_2",
    "GOLD_1",
    "PRESETS",
    "eval_permittivity",
    "low_frequency_strength",
    "te_zero_mode_condition",
    "kramers_kronig_imaginary_axis",
    "load_eps_imag_table",
    "tabulated_from_eps_imag",
]


@dataclass(frozen=True)
class DrudeParameters:
    """Plasma frequency and relaxation frequency of a Drude metal (rad/s).

    ``nu = 0`` is rejected: that is the plasma model and has to be asked
    for explicitly with :class:`Plasma`.
    """

    omega_p: float
    nu: float
    note: str = ""

    def __post_init__(self):
        if not (self.omega_p > 0 and math.isfinite(self.omega_p)):
            raise DomainError(f"omega_p must be positive and finite, got {self.omega_p!r}")
        if self.nu < 0 or not math.isfinite(self.nu):
            raise DomainError(f"nu must be >= 0 and finite, got {self.nu!r}")
        if self.nu == 0:
            raise DegenerateModelError(
                "nu = 0 turns the Drude model into the plasma model; use Plasma(omega_p) instead"
            )

    @classmethod
    def from_ev(cls, omega_p_ev, nu_ev, note=""):
        return cls(ev_to_rad_s(omega_p_ev), ev_to_rad_s(nu_ev), note)

    @property
    def plasma_wavelength(self):
        """2 pi c / omega_p in metres."""
        return 2.0 * math.pi * C_LIGHT / self.omega_p


GOLD_2 = DrudeParameters.from_ev(9.03, 34.5e-3, "gold, omega_p = 9.03 eV, nu = 34.5 meV")
GOLD_1 = DrudeParameters.from_ev(9.0, 35.0e-3, "gold, omega_p = 9.0 eV, nu = 35 meV")
PRESETS = {"gold-2": GOLD_2, "gold-1": GOLD_1}


def _positive_zeta(zeta):
    z = np.asarray(zeta, dtype=float)
    if np.any(~(z > 0)):
        raise DomainError("permittivity requires zeta > 0 (zeta = 0 is a limit handled by callers)")
    return z


def _scalar_or_array(values, like):
    return float(values) if np.ndim(like) == 0 else values


@dataclass(frozen=True)
class Drude:
    params: DrudeParameters

    def permittivity(self, zeta):
        z = _positive_zeta(zeta)
        p = self.params
        return _scalar_or_array(1.0 + p.omega_p**2 / (z * (z + p.nu)), zeta)


@dataclass(frozen=True)
class Plasma:
    omega_p: float

    def __post_init__(self):
        if not self.omega_p > 0:
            raise DomainError("omega_p must be positive")

    def permittivity(self, zeta):
        z = _positive_zeta(zeta)
        return _scalar_or_array(1.0 + self.omega_p**2 / z**2, zeta)


@dataclass(frozen=True)
class IdealMetal:
    def permittivity(self, zeta):
        z = np.asarray(zeta, dtype=float)
        return _scalar_or_array(np.full(z.shape, np.inf), zeta)


@dataclass(frozen=True)
class Vacuum:
    """epsilon = 1 everywhere; every free-energy contribution vanishes."""

    def permittivity(self, zeta):
        z = np.asarray(zeta, dtype=float)
        return _scalar_or_array(np.ones(z.shape), zeta)


@dataclass(frozen=True, eq=False)
class Tabulated:
    """epsilon(i zeta) sampled on a strictly increasing grid.

    Interpolation is monotone cubic (PCHIP) in log(zeta), applied to
    log(epsilon - 1) when all samples exceed 1 and to epsilon otherwise.
    Queries outside the grid raise :class:`RangeError`.
    """

    zeta: np.ndarray
    epsilon: np.ndarray
    _interp: PchipInterpolator = field(init=False, repr=False)
    _log_eps: bool = field(init=False, repr=False)

    def __post_init__(self):
        z = np.asarray(self.zeta, dtype=float)
        e = np.asarray(self.epsilon, dtype=float)
        if z.ndim != 1 or z.shape != e.shape or z.size < 2:
            raise ValidationError("tabulated permittivity needs two equal-length 1-d arrays of >= 2 points")
        if np.any(z <= 0) or np.any(np.diff(z) <= 0):
            raise ValidationError("zeta grid must be positive and strictly increasing")
        if np.any(~np.isfinite(e)) or np.any(e < 1):
            raise ValidationError("tabulated epsilon must be finite and >= 1")
        object.__setattr__(self, "zeta", z)
        object.__setattr__(self, "epsilon", e)
        log_eps = bool(np.all(e > 1))
        y = np.log(e - 1.0) if log_eps else e
        object.__setattr__(self, "_log_eps", log_eps)
        object.__setattr__(self, "_interp", PchipInterpolator(np.log(z), y, extrapolate=False))

    def permittivity(self, zeta):
        z = _positive_zeta(zeta)
        lo, hi = self.zeta[0], self.zeta[-1]
        # tolerate round-off at the grid ends
        if np.any(z < lo * (1 - 1e-12)) or np.any(z > hi * (1 + 1e-12)):
            raise RangeError(f"zeta outside tabulated range [{lo:.4g}, {hi:.4g}] rad/s")
        u = np.clip(np.log(z), math.log(lo), math.log(hi))
        y = self._interp(u)
        eps = 1.0 + np.exp(y) if self._log_eps else np.maximum(y, 1.0)
        return _scalar_or_array(eps, zeta)


def eval_permittivity(model, zeta):
    """epsilon(i zeta) for any supported model."""
    return model.permittivity(zeta)


@dataclass(frozen=True)
class LowFrequencyStrength:
    """D = omega_p^2 / nu, so that epsilon - 1 ~ D / zeta for zeta << nu."""

    D: float


def low_frequency_strength(params):
    if isinstance(params, Drude):
        params = params.params
    if not params.nu > 0:
        raise DegenerateModelError("D = omega_p^2/nu is undefined for nu = 0")
    return LowFrequencyStrength(params.omega_p**2 / params.nu)


@dataclass(frozen=True)
class ZeroModeCheck:
    satisfied: bool
    zetas: np.ndarray
    values: np.ndarray  # zeta^2 (epsilon - 1) at each probe
    exponent: float  # local log-log slope at the smallest probe


def te_zero_mode_condition(model, probe_zetas, min_exponent=0.05):
    """Test whether zeta^2 [epsilon(i zeta) - 1] goes to zero as zeta -> 0.

    ``probe_zetas`` must be positive and decreasing.  The condition holds
    when the sequence is non-increasing along the probes and its local
    power-law exponent at the small end is at least ``min_exponent``
    (a positive exponent means the sequence extrapolates to zero; the
    plasma model gives exponent 0).
    """
    z = np.asarray(probe_zetas, dtype=float)
    if z.ndim != 1 or z.size < 2:
        raise DomainError("need at least two probe frequencies")
    if np.any(z <= 0) or np.any(np.diff(z) >= 0):
        raise DomainError("probe frequencies must be positive and strictly decreasing")
    if isinstance(model, IdealMetal):
        vals = np.full(z.shape, np.inf)
        return ZeroModeCheck(False, z, vals, float("nan"))
    vals = z**2 * (np.asarray(model.permittivity(z)) - 1.0)
    if np.all(vals == 0):
        return ZeroModeCheck(True, z, vals, float("inf"))
    if np.any(vals <= 0):
        return ZeroModeCheck(False, z, vals, float("nan"))
    exponent = math.log(vals[-2] / vals[-1]) / math.log(z[-2] / z[-1])
    monotone = bool(np.all(np.diff(vals) <= 0))
    return ZeroModeCheck(monotone and exponent >= min_exponent, z, vals, exponent)


# -- tabulated optical data --------------------------------------------------


def _validate_eps_imag_table(table):
    arr = np.asarray(table, dtype=float)
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise ValidationError("expected a table of (omega, eps_imag) rows")
    if arr.shape[0] < 2:
        raise ValidationError("need at least two (omega, eps_imag) rows")
    w, e2 = arr[:, 0], arr[:, 1]
    if np.any(~np.isfinite(arr)):
        raise ValidationError("table contains non-finite values")
    if np.any(w <= 0) or np.any(np.diff(w) <= 0):
        raise ValidationError("omega must be positive and strictly increasing")
    if np.any(e2 < 0):
        raise ValidationError("eps_imag must be non-negative")
    return w, e2


def _tail_exponent(logw, loge, end):
    """Power-law exponent fitted over the last decade at one end of the table."""
    if end == "high":
        n = max(2, int(np.sum(logw >= logw[-1] - math.log(10.0))))
        sl = slice(-n, None)
    else:
        n = max(2, int(np.sum(logw <= logw[0] + math.log(10.0))))
        sl = slice(0, n)
    slope, intercept = np.polyfit(logw[sl], loge[sl], 1)
    return slope, intercept


class _EpsImag:
    """Interpolated eps''(omega) with power-law tails beyond the table."""

    def __init__(self, table):
        w, e2 = _validate_eps_imag_table(table)
        self.zero = bool(np.all(e2 == 0))
        self.logw = np.log(w)
        self.positive = bool(np.all(e2 > 0))
        if self.zero:
            return
        if self.positive:
            loge = np.log(e2)
            self.interp = PchipInterpolator(self.logw, loge, extrapolate=False)
            self.low = _tail_exponent(self.logw, loge, "low")
            self.high = _tail_exponent(self.logw, loge, "high")
        else:
            # zeros present: no log-log tails, eps'' taken as 0 outside the table
            self.interp = PchipInterpolator(self.logw, e2, extrapolate=False)
            self.low = self.high = None
        if self.low is not None and self.low[0] <= -2.0:
            raise ValidationError("low-frequency tail of eps'' too steep for the dispersion integral")
        if self.high is not None and self.high[0] >= 0.0:
            raise ValidationError("high-frequency tail of eps'' does not decay")

    def inside(self, u):
        v = self.interp(u)
        return np.exp(v) if self.positive else np.maximum(v, 0.0)


def kramers_kronig_imaginary_axis(eps_imag_table, zeta):
    """epsilon(i zeta) from absorption data via the dispersion relation.

    epsilon(i zeta) = 1 + (2/pi) int_0^inf omega eps''(omega)/(omega^2 + zeta^2) d omega,

    integrated in log(omega) with adaptive quadrature.  Outside the table
    eps'' is continued as a power law fitted over the last decade at each
    end.
    """
    ei = eps_imag_table if isinstance(eps_imag_table, _EpsImag) else _EpsImag(eps_imag_table)
    if not zeta > 0:
        raise DomainError("zeta must be positive")
    if ei.zero:
        return 1.0
    lz = math.log(zeta)
    u0, u1 = ei.logw[0], ei.logw[-1]

    def kernel(u):
        # omega^2 / (omega^2 + zeta^2) with omega = e^u
        return expit(2.0 * (u - lz))

    def f_in(u):
        return float(ei.inside(u)) * kernel(u)

    # unit-width pieces in ln(omega), plus a break at ln(zeta)
    edges = np.union1d(np.linspace(u0, u1, int(math.ceil(u1 - u0)) + 1), [lz] if u0 < lz < u1 else [])
    total = math.fsum(
        integrate.quad(f_in, lo, hi, limit=200, epsabs=0.0, epsrel=1e-9)[0] for lo, hi in zip(edges[:-1], edges[1:])
    )
    if ei.low is not None:
        s, c = ei.low
        # omega eps''/(omega^2+zeta^2) d omega with omega = e^u
        # combined in log form so that neither factor overflows alone
        lo, _ = integrate.quad(
            lambda u: math.exp(c + s * u + log_expit(2.0 * (u - lz))), -np.inf, u0, epsabs=0.0, epsrel=1e-9, limit=200
        )
        s, c = ei.high
        hi, _ = integrate.quad(
            lambda u: math.exp(c + s * u + log_expit(2.0 * (u - lz))), u1, np.inf, epsabs=0.0, epsrel=1e-9, limit=200
        )
        total += lo + hi
    return 1.0 + 2.0 / math.pi * total


def load_eps_imag_table(path):
    """Read a two-column ``omega_rad_s eps_imag`` text file (``#`` comments)."""
    try:
        arr = np.loadtxt(path, comments="#", ndmin=2)
    except ValueError as exc:
        raise ValidationError(f"cannot parse permittivity table {path}: {exc}") from exc
    _validate_eps_imag_table(arr)
    return arr


def tabulated_from_eps_imag(eps_imag_table, zeta_grid=None, n=241):
    """Build a :class:`Tabulated` model by Kramers-Kronig transforming eps''.

    The default grid is log-spaced over the frequency span of the table.
    """
    ei = _EpsImag(eps_imag_table)
    if zeta_grid is None:
        zeta_grid = np.exp(np.linspace(ei.logw[0], ei.logw[-1], n))
    zeta_grid = np.asarray(zeta_grid, dtype=float)
    eps = np.array([kramers_kronig_imaginary_axis(ei, z) for z in zeta_grid])
    return Tabulated(zeta_grid, eps)
