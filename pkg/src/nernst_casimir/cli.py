"""Command-line frontend.

Subcommands write data files into ``--out``:

    sweep       F_TE, F_TM, F_total over a temperature grid (sweep.csv)
    t0          zero-temperature free energy (t0.txt)
    asymptote   low-temperature coefficients C1, C2 (asymptote.txt)
    ratio       R(T) series and Nernst verdict (ratio.csv, verdict.txt)
    reflection  A and B on a (zeta, k_perp) grid (reflection.csv)

Settings come from defaults, then an optional ``--config`` file of
``key = value`` lines, then command flags.  Every file starts with a
comment header holding the settings and constants; worker count and
output directory are left out so reruns are byte-identical.
"""
from __future__ import annotations

import argparse
import logging
import math
import re
import sys
from concurrent.futures import ProcessPoolExecutor
from contextlib import contextmanager
from dataclasses import dataclass, fields, replace
from pathlib import Path

import numpy as np

from . import __version__, analysis, asymptotics
from .constants import C_LIGHT, HBAR, K_B, ev_to_rad_s, ideal_metal_energy_T0
from .dispersion import (
    PRESETS,
    Drude,
    DrudeParameters,
    IdealMetal,
    Plasma,
    Vacuum,
    load_eps_imag_table,
    tabulated_from_eps_imag,
)
from .errors import CasimirError, NumericalError, ValidationError
from .lifshitz import free_energy, free_energy_T0
from .reflection import reflection_surface, write_surface_csv

log = logging.getLogger(__name__)

EXIT_OK, EXIT_CONFIG, EXIT_NUMERICAL = 0, 2, 3

_LENGTH_UNITS = {"m": 1.0, "mm": 1e-3, "um": 1e-6, "μm": 1e-6, "micron": 1e-6, "nm": 1e-9}


@dataclass(frozen=True)
class RunConfig:
    model: str = "drude"
    preset: str = "gold-2"
    omega_p: str = ""  # overrides the preset, e.g. "9.03eV"
    nu: str = ""
    gap: str = "1um"
    tmin: float = 0.0
    tmax: float = 800.0
    tcount: int = 40
    tspacing: str = "linear"
    tol_inner: float = 1e-10
    tol_sum: float = 1e-12
    delta_tol: float = 1e-4
    deep: bool = False
    zeta_min: float = 0.0
    zeta_max: float = 1e15
    zeta_count: int = 41
    kperp_min: float = 0.0
    kperp_max: float = 1e8
    kperp_count: int = 41
    out: str = "."
    workers: int = 1

    def header_items(self, command):
        skip = {"out", "workers"}
        items = [("command", command)]
        items += [(f.name, getattr(self, f.name)) for f in fields(self) if f.name not in skip]
        return items


_HEADER_CONSTANTS = (("hbar_J_s", HBAR), ("k_B_J_K", K_B), ("c_m_s", C_LIGHT))


# -- parsing and validation --------------------------------------------------


def parse_length(text):
    m = re.fullmatch(r"\s*([-+0-9.eE]+)\s*([a-zμ]+)\s*", str(text))
    if not m or m.group(2) not in _LENGTH_UNITS:
        raise ValidationError(f"cannot parse length {text!r}; use e.g. 1um or 1000nm")
    try:
        return float(m.group(1)) * _LENGTH_UNITS[m.group(2)]
    except ValueError:
        raise ValidationError(f"cannot parse length {text!r}") from None


def parse_frequency(text):
    """Angular frequency in rad/s from '9.03eV', '34.5meV' or '1.3e16rad/s'."""
    m = re.fullmatch(r"\s*([-+0-9.eE]+)\s*(eV|meV|rad/s)\s*", str(text))
    if not m:
        raise ValidationError(f"cannot parse frequency {text!r}; use eV, meV or rad/s")
    try:
        value = float(m.group(1))
    except ValueError:
        raise ValidationError(f"cannot parse frequency {text!r}") from None
    unit = m.group(2)
    if unit == "eV":
        return ev_to_rad_s(value)
    if unit == "meV":
        return ev_to_rad_s(value * 1e-3)
    return value


def read_config_file(path):
    """Flat ``key = value`` file with ``#`` comments; keys may use '-' or '_'."""
    known = {f.name: f for f in fields(RunConfig)}
    out = {}
    try:
        lines = Path(path).read_text().splitlines()
    except OSError as exc:
        raise ValidationError(f"cannot read config file: {exc}") from None
    for n, raw in enumerate(lines, 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValidationError(f"{path}:{n}: expected key = value")
        key, value = (s.strip() for s in line.split("=", 1))
        key = key.replace("-", "_")
        if key not in known:
            raise ValidationError(f"{path}:{n}: unknown key {key!r}")
        out[key] = value
    return out


def _coerce(name, value):
    default = getattr(RunConfig, name)
    try:
        if isinstance(default, bool):
            if isinstance(value, bool):
                return value
            if str(value).lower() in ("1", "true", "yes", "on"):
                return True
            if str(value).lower() in ("0", "false", "no", "off"):
                return False
            raise ValueError(value)
        if isinstance(default, int):
            return int(value)
        if isinstance(default, float):
            return float(value)
    except ValueError:
        raise ValidationError(f"bad value for {name}: {value!r}") from None
    return str(value)


def build_config(file_values, flag_values):
    values = {}
    for source in (file_values, flag_values):
        for k, v in source.items():
            if v is not None:
                values[k] = _coerce(k, v)
    cfg = replace(RunConfig(), **values)
    validate(cfg)
    return cfg


def validate(cfg):
    """Raise ValidationError for anything that would fail later."""
    for name in ("tol_inner", "tol_sum", "delta_tol"):
        v = getattr(cfg, name)
        if not (0 < v < 1e-2):
            raise ValidationError(f"{name} must lie in (0, 1e-2), got {v}")
    if not parse_length(cfg.gap) > 0:
        raise ValidationError("gap must be positive")
    if cfg.tspacing not in ("linear", "log"):
        raise ValidationError("tspacing must be linear or log")
    if cfg.tcount < 1:
        raise ValidationError("tcount must be >= 1")
    if not (0 <= cfg.tmin <= cfg.tmax) or not math.isfinite(cfg.tmax):
        raise ValidationError("need 0 <= tmin <= tmax")
    if cfg.tspacing == "log" and cfg.tmin <= 0:
        raise ValidationError("log spacing needs tmin > 0")
    if cfg.workers < 1:
        raise ValidationError("workers must be >= 1")
    for prefix in ("zeta", "kperp"):
        lo, hi, n = (getattr(cfg, f"{prefix}_{s}") for s in ("min", "max", "count"))
        if n < 1 or not (0 <= lo <= hi):
            raise ValidationError(f"{prefix} grid needs count >= 1 and 0 <= min <= max")
    if cfg.preset not in PRESETS:
        raise ValidationError(f"unknown preset {cfg.preset!r}; choose from {sorted(PRESETS)}")
    make_model(cfg)


def drude_parameters(cfg):
    base = PRESETS[cfg.preset]
    wp = parse_frequency(cfg.omega_p) if cfg.omega_p else base.omega_p
    nu = parse_frequency(cfg.nu) if cfg.nu else base.nu
    if (wp, nu) == (base.omega_p, base.nu):
        return base
    return DrudeParameters(wp, nu, note="custom")


def make_model(cfg):
    kind = cfg.model
    if kind == "drude":
        return Drude(drude_parameters(cfg))
    if kind == "plasma":
        return Plasma(drude_parameters(cfg).omega_p)
    if kind == "ideal":
        return IdealMetal()
    if kind == "vacuum":
        return Vacuum()
    if kind.startswith("table:"):
        try:
            return tabulated_from_eps_imag(load_eps_imag_table(kind[len("table:"):]))
        except (OSError, ValueError) as exc:
            raise ValidationError(f"cannot build tabulated model: {exc}") from None
    raise ValidationError(f"unknown model {kind!r}")


def temperature_grid(cfg):
    if cfg.tcount == 1:
        return np.array([cfg.tmin])
    if cfg.tspacing == "log":
        return np.geomspace(cfg.tmin, cfg.tmax, cfg.tcount)
    return np.linspace(cfg.tmin, cfg.tmax, cfg.tcount)


# -- output helpers ----------------------------------------------------------


def header(cfg, command):
    lines = [f"# nernst_casimir {__version__}"]
    lines += [f"# {k} = {v}" for k, v in cfg.header_items(command)]
    lines += [f"# {k} = {v!r}" for k, v in _HEADER_CONSTANTS]
    if cfg.model in ("drude", "plasma"):
        p = drude_parameters(cfg)
        lines.append(f"# omega_p_rad_s = {p.omega_p!r}")
        lines.append(f"# nu_rad_s = {p.nu!r}")
    return "\n".join(lines) + "\n"


@contextmanager
def _pool(workers):
    if workers == 1:
        yield map
    else:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            yield ex.map


def _f(x):
    return repr(float(x))


def _out_path(cfg, name):
    d = Path(cfg.out)
    d.mkdir(parents=True, exist_ok=True)
    return d / name


def _sweep_point(args):
    model, a, T, tol_inner, tol_sum = args
    try:
        r = free_energy(model, a, T, tol_inner=tol_inner, tol_sum=tol_sum)
        return (r.F_TE, r.F_TM, r.F_total, r.m_max, r.tol_achieved), None
    except CasimirError as exc:
        return None, f"{type(exc).__name__}: {exc}"


# -- subcommands -------------------------------------------------------------


def cmd_sweep(cfg):
    """Free energy over a temperature grid plus the T = 0 anchor."""
    model, a = make_model(cfg), parse_length(cfg.gap)
    grid = temperature_grid(cfg)
    path = _out_path(cfg, "sweep.csv")
    with open(path, "w", newline="") as fh:
        fh.write(header(cfg, "sweep"))
        fh.write("T_K,F_TE_J_m2,F_TM_J_m2,F_total_J_m2,m_max,tol_achieved\n")
        try:
            r0 = free_energy_T0(model, a, tol=max(cfg.tol_inner, 1e-9))
        except CasimirError as exc:
            fh.write(f"# FAILED at T=0: {type(exc).__name__}: {exc}\n")
            return EXIT_NUMERICAL
        fh.write(f"0.0,{_f(r0.F_TE)},{_f(r0.F_TM)},{_f(r0.F_total)},0,{_f(r0.error_estimate)}\n")
        fh.flush()
        temps = [float(t) for t in grid if t > 0]
        jobs = [(model, a, t, cfg.tol_inner, cfg.tol_sum) for t in temps]
        with _pool(cfg.workers) as pmap:
            for T, (row, err) in zip(temps, pmap(_sweep_point, jobs)):
                if err is not None:
                    fh.write(f"# FAILED at T={T!r}: {err}\n")
                    return EXIT_NUMERICAL
                fte, ftm, ftot, m_max, tol = row
                fh.write(f"{_f(T)},{_f(fte)},{_f(ftm)},{_f(ftot)},{m_max},{_f(tol)}\n")
                fh.flush()
    return EXIT_OK


def cmd_t0(cfg):
    """Zero-temperature free energy against the ideal-metal value."""
    model, a = make_model(cfg), parse_length(cfg.gap)
    r = free_energy_T0(model, a, tol=max(cfg.tol_inner, 1e-9))
    ref = ideal_metal_energy_T0(a)
    text = header(cfg, "t0") + "".join(
        f"{k} = {_f(v)}\n"
        for k, v in (
            ("a_m", a),
            ("F_TE_J_m2", r.F_TE),
            ("F_TM_J_m2", r.F_TM),
            ("F_total_J_m2", r.F_total),
            ("error_estimate", r.error_estimate),
            ("ideal_metal_J_m2", ref),
            ("ratio_to_ideal", r.F_total / ref),
        )
    )
    _out_path(cfg, "t0.txt").write_text(text)
    return EXIT_OK


def cmd_asymptote(cfg):
    """Low-temperature coefficients C1 and C2."""
    model, a = make_model(cfg), parse_length(cfg.gap)
    if not isinstance(model, Drude):
        raise ValidationError("asymptote needs the Drude model")
    p = model.params
    co = asymptotics.asymptotic_coefficients(p, a)
    T = cfg.tmax if cfg.tmax > 0 else 1.0
    C = asymptotics.coefficient_C(p, T)
    # a^2 k T << hbar nu c^2 / omega_p^2 is (a sqrt(C))^2 << 1
    scale = HBAR * p.nu * C_LIGHT**2 / p.omega_p**2
    rows = [
        ("a_m", a),
        ("T_K", T),
        ("C_per_K_1_m2K", co.C_per_K),
        ("C_1_m2", C),
        ("g_prime_0", co.g_prime_0),
        ("I", co.I),
        ("zeta_minus_1", co.special_values["zeta(-1)"]),
        ("zeta_minus_3_2", co.zeta_m32),
        ("C1_J_m2K2", co.C1),
        ("C2_K_minus_half", co.C2),
        ("C2_factor", co.factor),
        ("C2_exact_zeta_K_minus_half", co.C2_exact_zeta),
        ("C2_exact_zeta_factor", co.factor_exact_zeta),
        ("a_sqrtC", asymptotics.validity_parameter(p, a, T)),
        ("a2_kT_J_m2", a * a * K_B * T),
        ("hbar_nu_c2_over_wp2_J_m2", scale),
    ]
    text = header(cfg, "asymptote") + "".join(f"{k} = {_f(v)}\n" for k, v in rows)
    _out_path(cfg, "asymptote.txt").write_text(text)
    return EXIT_OK


def _ratio_grid(cfg, explicit):
    if explicit:
        return temperature_grid(cfg)
    return analysis.default_ratio_grid(cfg.deep)


def cmd_ratio(cfg, explicit_grid=False):
    """Ratio R(T) of analytic to numerical TE free energy and the Nernst verdict."""
    model, a = make_model(cfg), parse_length(cfg.gap)
    grid = _ratio_grid(cfg, explicit_grid)
    if np.any(grid <= 0):
        raise ValidationError("ratio grid must be positive")
    if cfg.deep:
        log.warning("deep grid reaches 0.008 K; expect a long run")
    vc = analysis.VerdictConfig(T_grid=tuple(float(t) for t in grid), tol=cfg.delta_tol)
    with _pool(cfg.workers) as pmap:
        report = analysis.nernst_verdict(model, a, vc, map_fn=pmap)
    failed = False
    with open(_out_path(cfg, "ratio.csv"), "w", newline="") as fh:
        fh.write(header(cfg, "ratio"))
        fh.write("T_K,deltaF_num_J_m2,deltaF_th_J_m2,R\n")
        for pt in report.series:
            if not pt.ok:
                fh.write(f"# FAILED at T={pt.T!r}: {pt.error}\n")
                failed = True
                continue
            fh.write(f"{_f(pt.T)},{_f(pt.delta_F_num)},{_f(pt.delta_F_th)},{_f(pt.R)}\n")
    _out_path(cfg, "verdict.txt").write_text(header(cfg, "ratio") + report.text())
    return EXIT_NUMERICAL if failed else EXIT_OK


def cmd_reflection(cfg):
    """Squared reflection coefficients on a (zeta, k_perp) grid."""
    model = make_model(cfg)
    z = np.linspace(cfg.zeta_min, cfg.zeta_max, cfg.zeta_count)
    k = np.linspace(cfg.kperp_min, cfg.kperp_max, cfg.kperp_count)
    A, B = reflection_surface(model, z, k)
    with open(_out_path(cfg, "reflection.csv"), "w", newline="") as fh:
        fh.write(header(cfg, "reflection"))
        write_surface_csv(fh, z, k, A, B)
    return EXIT_OK


COMMANDS = {
    "sweep": cmd_sweep,
    "t0": cmd_t0,
    "asymptote": cmd_asymptote,
    "ratio": cmd_ratio,
    "reflection": cmd_reflection,
}


# -- entry point -------------------------------------------------------------


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    g = common.add_argument_group("model and geometry")
    g.add_argument("--config", help="key = value settings file")
    g.add_argument("--model", help="drude, plasma, ideal, vacuum or table:<path>")
    g.add_argument("--preset", choices=sorted(PRESETS))
    g.add_argument("--omega-p", dest="omega_p", help="plasma frequency, e.g. 9.03eV")
    g.add_argument("--nu", help="relaxation frequency, e.g. 34.5meV")
    g.add_argument("--gap", help="plate separation with unit, e.g. 1um or 1000nm")
    t = common.add_argument_group("temperature grid")
    t.add_argument("--tmin", type=float)
    t.add_argument("--tmax", type=float)
    t.add_argument("--tcount", type=int)
    t.add_argument("--tspacing", choices=("linear", "log"))
    t.add_argument("--deep", action="store_const", const=True, default=None, help="ratio grid down to 0.008 K")
    n = common.add_argument_group("numerics and output")
    n.add_argument("--tol-inner", dest="tol_inner", type=float)
    n.add_argument("--tol-sum", dest="tol_sum", type=float)
    n.add_argument("--delta-tol", dest="delta_tol", type=float)
    n.add_argument("--out", help="output directory")
    n.add_argument("--workers", type=int)
    r = common.add_argument_group("reflection grid (rad/s, rad/m)")
    for name in ("zeta-min", "zeta-max", "kperp-min", "kperp-max"):
        r.add_argument(f"--{name}", dest=name.replace("-", "_"), type=float)
    r.add_argument("--zeta-count", dest="zeta_count", type=int)
    r.add_argument("--kperp-count", dest="kperp_count", type=int)

    parser = argparse.ArgumentParser(prog="nernst-casimir", description="Casimir free energy between Drude metal plates")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, fn in COMMANDS.items():
        sub.add_parser(name, parents=[common], help=fn.__doc__ or name)
    return parser


def main(argv=None):
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s: %(message)s")
    args = build_parser().parse_args(argv)
    flags = {k: v for k, v in vars(args).items() if k not in ("command", "config")}
    try:
        file_values = read_config_file(args.config) if args.config else {}
        cfg = build_config(file_values, flags)
        explicit = any(flags.get(k) is not None or k in file_values for k in ("tmin", "tmax", "tcount", "tspacing"))
        if args.command == "ratio":
            return cmd_ratio(cfg, explicit_grid=explicit)
        return COMMANDS[args.command](cfg)
    except ValidationError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except CasimirError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
