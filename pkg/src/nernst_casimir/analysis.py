"""Numerical versus analytic low-temperature TE free energy, and the Nernst check.

The comparison quantity is

    R = (dF_th - dF_num) / dF_th

with dF_th the Pade form C1 T^2 / (1 + C2 T^{1/2}).  If the numerical
result behaves as D1 (T^2 - D2 T^{5/2} + D3 T^3 + ...), then

    R = (C1 - D1)/C1 + (D1/C1)(D2 - C2) T^{1/2} + (D1/C1)(C2 D2 - D3) T + ...

so a vanishing constant and sqrt(T) coefficient confirm C1 and C2.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import asymptotics
from .dispersion import Drude, te_zero_mode_condition
from .errors import CasimirError, DomainError, NumericalError
from .lifshitz import TE, delta_free_energy, entropy

__all__ = [
    "RatioPoint",
    "RatioFit",
    "ratio_value",
    "ratio_points",
    "ratio_series",
    "default_ratio_grid",
    "fit_low_T",
    "fit_delta_F",
    "VerdictConfig",
    "NernstReport",
    "nernst_verdict",
]

INTERCEPT_THRESHOLD = 0.05
SQRT_T_THRESHOLD = 0.05  # K^(-1/2)


@dataclass(frozen=True)
class RatioPoint:
    T: float
    delta_F_num: float
    delta_F_th: float
    R: float
    tol_achieved: float = float("nan")
    error: str | None = None

    @property
    def ok(self):
        return self.error is None


def ratio_value(delta_F_num, delta_F_th):
    if not delta_F_th > 0:
        raise DomainError("dF_th must be positive")
    return (delta_F_th - delta_F_num) / delta_F_th


def ratio_points(T, delta_F_num, C1, C2, tol_achieved=None):
    """RatioPoints from precomputed numerical values."""
    T = np.asarray(T, dtype=float)
    num = np.asarray(delta_F_num, dtype=float)
    th = np.atleast_1d(asymptotics.pade_delta_F(T, C1, C2))
    tols = np.full(T.shape, np.nan) if tol_achieved is None else np.asarray(tol_achieved, dtype=float)
    return [
        RatioPoint(float(t), float(n), float(h), ratio_value(n, h), float(e))
        for t, n, h, e in zip(T, num, th, tols)
    ]


def default_ratio_grid(deep=False):
    """12 log-spaced points in [0.05, 1] K, or 19 down to 0.008 K with ``deep``."""
    if deep:
        return np.geomspace(0.008, 1.0, 19)
    return np.geomspace(0.05, 1.0, 12)


def _te_delta(args):
    model, a, T, tol = args
    try:
        res = delta_free_energy(model, a, T, TE, tol)
        return res.delta, res.error_estimate, None
    except CasimirError as exc:
        return float("nan"), float("nan"), f"{type(exc).__name__}: {exc}"


def ratio_series(model, a, T_grid, tol=1e-4, map_fn=map):
    """R(T) for a Drude model on an ascending positive grid.

    Numerical failures do not abort the series; the affected points carry
    ``error`` and NaN values.  ``map_fn`` may be a pool's ordered ``map``.
    """
    if not isinstance(model, Drude):
        raise DomainError("the ratio study needs a Drude model")
    T_grid = np.asarray(T_grid, dtype=float)
    if T_grid.ndim != 1 or T_grid.size == 0 or np.any(T_grid <= 0) or np.any(np.diff(T_grid) <= 0):
        raise DomainError("T grid must be positive and strictly ascending")
    C1 = asymptotics.leading_coefficient_C1(model.params)
    C2 = asymptotics.correction_coefficient_C2(model.params, a).C2
    results = list(map_fn(_te_delta, [(model, a, float(t), tol) for t in T_grid]))
    out = []
    for t, (num, err, msg) in zip(T_grid, results):
        th = asymptotics.pade_delta_F(t, C1, C2)
        R = ratio_value(num, th) if msg is None else float("nan")
        out.append(RatioPoint(float(t), num, th, R, err, msg))
    return out


@dataclass(frozen=True)
class RatioFit:
    intercept: float
    coefficient_sqrtT: float  # K^(-1/2)
    slope_in_T: float  # 1/K
    window: tuple
    residuals: np.ndarray
    rms: float
    n_points: int
    D1: float = float("nan")
    D2: float = float("nan")
    D3: float = float("nan")
    intercept_threshold: float = INTERCEPT_THRESHOLD
    sqrt_threshold: float = SQRT_T_THRESHOLD

    @property
    def passed(self):
        return (
            abs(self.intercept) < self.intercept_threshold
            and abs(self.coefficient_sqrtT) < self.sqrt_threshold
            and math.isfinite(self.slope_in_T)
        )


def _weighted_lstsq(T, y):
    """Least squares in the basis (1, sqrt T, T) with weights 1/T."""
    X = np.column_stack([np.ones_like(T), np.sqrt(T), T])
    sw = np.sqrt(1.0 / T)
    Xw = X * sw[:, None]
    if np.linalg.matrix_rank(Xw) < 3:
        raise NumericalError("rank-deficient fit", n_points=T.size)
    coef, *_ = np.linalg.lstsq(Xw, y * sw, rcond=None)
    return coef, y - X @ coef


def _usable(series, min_points):
    pts = [p for p in series if p.ok and math.isfinite(p.R)]
    if len(pts) < min_points:
        raise DomainError(f"need at least {min_points} usable points, got {len(pts)}")
    return pts


def fit_delta_F(series, min_points=5):
    """(D1, D2, D3) from dF_num / T^2 = D1 - D1 D2 T^{1/2} + D1 D3 T."""
    pts = _usable(series, min_points)
    T = np.array([p.T for p in pts])
    y = np.array([p.delta_F_num for p in pts]) / T**2
    (b0, b1, b2), _ = _weighted_lstsq(T, y)
    return b0, -b1 / b0, b2 / b0


def fit_low_T(
    series,
    intercept_threshold=INTERCEPT_THRESHOLD,
    sqrt_threshold=SQRT_T_THRESHOLD,
    min_points=5,
):
    """Fit R = c0 + c1 T^{1/2} + c2 T with weights 1/T.

    Points carrying an error are skipped.  The fit passes when |c0| and
    |c1| are under their thresholds and c2 is finite.
    """
    pts = _usable(series, min_points)
    T = np.array([p.T for p in pts])
    R = np.array([p.R for p in pts])
    (c0, c1, c2), resid = _weighted_lstsq(T, R)
    try:
        D1, D2, D3 = fit_delta_F(pts, min_points)
    except (NumericalError, ZeroDivisionError):
        D1 = D2 = D3 = float("nan")
    return RatioFit(
        intercept=float(c0),
        coefficient_sqrtT=float(c1),
        slope_in_T=float(c2),
        window=(float(T[0]), float(T[-1])),
        residuals=resid,
        rms=float(np.sqrt(np.mean(resid**2))),
        n_points=len(pts),
        D1=float(D1),
        D2=float(D2),
        D3=float(D3),
        intercept_threshold=intercept_threshold,
        sqrt_threshold=sqrt_threshold,
    )


# -- verdict -----------------------------------------------------------------


@dataclass(frozen=True)
class VerdictConfig:
    T_grid: tuple = tuple(default_ratio_grid())
    entropy_T: tuple = (0.05, 0.1, 0.2)
    entropy_bound: float = 3.0  # |S| <= bound * C1 * T
    probe_zetas: tuple = (1e9, 1e8, 1e7, 1e6)
    tol: float = 1e-4
    intercept_threshold: float = INTERCEPT_THRESHOLD
    sqrt_threshold: float = SQRT_T_THRESHOLD
    run_entropy: bool = True
    run_ratio: bool = True


@dataclass
class NernstReport:
    model: str
    a: float
    zero_mode_satisfied: bool
    zero_mode_exponent: float
    entropy: list = field(default_factory=list)  # (T, S, S/(C1 T))
    entropy_ok: bool | None = None
    series: list = field(default_factory=list)
    fit: RatioFit | None = None
    fit_ok: bool | None = None
    notes: list = field(default_factory=list)

    @property
    def verdict(self):
        # skipped checks (None) do not count against the model
        ok = self.zero_mode_satisfied and self.entropy_ok is not False and self.fit_ok is not False
        return "PASS" if ok else "FAIL"

    def key_values(self):
        kv = {
            "verdict": self.verdict,
            "model": self.model,
            "gap_m": repr(self.a),
            "zero_mode_condition": "PASS" if self.zero_mode_satisfied else "FAIL",
            "zero_mode_exponent": repr(self.zero_mode_exponent),
            "entropy_check": _flag(self.entropy_ok),
            "ratio_fit": _flag(self.fit_ok),
        }
        for T, S, r in self.entropy:
            kv[f"entropy_{T!r}K"] = repr(S)
        if self.fit is not None:
            f = self.fit
            kv.update(
                fit_intercept=repr(f.intercept),
                fit_sqrtT=repr(f.coefficient_sqrtT),
                fit_T=repr(f.slope_in_T),
                fit_rms=repr(f.rms),
                fit_window_K=f"{f.window[0]!r},{f.window[1]!r}",
                D1=repr(f.D1),
                D2=repr(f.D2),
                D3=repr(f.D3),
            )
        return kv

    def text(self):
        lines = [f"Nernst check for {self.model}, a = {self.a:g} m: {self.verdict}"]
        lines.append(
            f"  TE zero-mode condition zeta^2 (eps - 1) -> 0: "
            f"{'satisfied' if self.zero_mode_satisfied else 'violated'} (exponent {self.zero_mode_exponent:.3g})"
        )
        for T, S, r in self.entropy:
            lines.append(f"  S({T:g} K) = {S:.6e} J/(m^2 K), S/(C1 T) = {r:.4f}")
        if self.fit is not None:
            f = self.fit
            lines.append(
                f"  R fit on [{f.window[0]:g}, {f.window[1]:g}] K: "
                f"c0 = {f.intercept:.4g}, c_sqrtT = {f.coefficient_sqrtT:.4g} K^-1/2, c_T = {f.slope_in_T:.4g} 1/K"
            )
        lines += [f"  note: {n}" for n in self.notes]
        lines.append("")
        lines += [f"{k}={v}" for k, v in self.key_values().items()]
        return "\n".join(lines) + "\n"


def _flag(x):
    return "n/a" if x is None else ("PASS" if x else "FAIL")


def nernst_verdict(model, a, config=None, map_fn=map):
    """Run the zero-mode test, an entropy scan and the R fit; never raises on physics."""
    config = config or VerdictConfig()
    name = type(model).__name__
    check = te_zero_mode_condition(model, np.asarray(config.probe_zetas, dtype=float))
    report = NernstReport(name, a, bool(check.satisfied), float(check.exponent))
    if not check.satisfied:
        report.notes.append("TE zero mode survives: a term linear in T remains in the free energy")
    if not isinstance(model, Drude):
        report.notes.append("entropy bound and ratio fit need the Drude low-frequency coefficients; skipped")
        return report
    C1 = asymptotics.leading_coefficient_C1(model.params)
    if config.run_entropy:
        ok = True
        for T in config.entropy_T:
            try:
                S = entropy(model, a, T, tol=config.tol)
            except CasimirError as exc:
                report.notes.append(f"entropy at {T} K failed: {exc}")
                ok = False
                continue
            report.entropy.append((T, S, S / (C1 * T)))
            ok &= abs(S) <= config.entropy_bound * C1 * T
        report.entropy_ok = bool(ok)
    if config.run_ratio:
        report.series = ratio_series(model, a, config.T_grid, config.tol, map_fn)
        try:
            report.fit = fit_low_T(report.series, config.intercept_threshold, config.sqrt_threshold)
            report.fit_ok = report.fit.passed
        except CasimirError as exc:
            report.notes.append(f"ratio fit failed: {exc}")
            report.fit_ok = False
    return report

