import csv
import io

import numpy as np
import pytest

from nernst_casimir import cli
from nernst_casimir.errors import ValidationError


def _run(tmp_path, *args):
    return cli.main([*args, "--out", str(tmp_path)])


def _rows(path):
    body = [ln for ln in path.read_text().splitlines() if not ln.startswith("#")]
    return list(csv.DictReader(io.StringIO("\n".join(body))))


def _kv(path):
    out = {}
    for ln in path.read_text().splitlines():
        if not ln.startswith("#") and " = " in ln:
            k, v = ln.split(" = ", 1)
            out[k] = float(v)
    return out


def test_parse_units():
    assert cli.parse_length("1um") == 1e-6
    assert cli.parse_length("1000nm") == pytest.approx(1e-6, rel=1e-15)
    assert cli.parse_length("0.5 μm") == 5e-7
    assert cli.parse_frequency("1e16rad/s") == 1e16
    assert cli.parse_frequency("34.5meV") == pytest.approx(cli.parse_frequency("0.0345eV"), rel=1e-15)
    for bad in ("1", "1 furlong", "xnm"):
        with pytest.raises(ValidationError):
            cli.parse_length(bad)
    with pytest.raises(ValidationError):
        cli.parse_frequency("9 GHz")


@pytest.mark.parametrize(
    "args",
    [
        ["sweep", "--tol-inner", "0.5"],
        ["sweep", "--gap=-1um"],
        ["sweep", "--gap", "1"],
        ["sweep", "--model", "copper"],
        ["sweep", "--tmin", "5", "--tmax", "1"],
        ["sweep", "--tspacing", "log", "--tmin", "0"],
        ["sweep", "--workers", "0"],
        ["sweep", "--model", "table:/nonexistent.csv"],
        ["asymptote", "--model", "plasma"],
    ],
)
def test_config_errors_exit_2_without_output(tmp_path, args):
    assert _run(tmp_path, *args) == cli.EXIT_CONFIG
    assert not (tmp_path / "sweep.csv").exists()


def test_config_file_precedence(tmp_path):
    conf = tmp_path / "run.conf"
    conf.write_text("# settings\ngap = 2um\ntcount = 7  # trailing comment\nzeta-count = 3\n")
    cfg = cli.build_config(cli.read_config_file(conf), {"tcount": 9, "gap": None})
    assert cfg.gap == "2um" and cfg.tcount == 9 and cfg.zeta_count == 3
    conf.write_text("colour = blue\n")
    with pytest.raises(ValidationError):
        cli.read_config_file(conf)
    assert cli.main(["t0", "--config", str(conf)]) == cli.EXIT_CONFIG


def test_header_records_settings_not_workers():
    cfg = cli.RunConfig(workers=4, out="/somewhere")
    h = cli.header(cfg, "sweep")
    assert h.startswith(f"# nernst_casimir {cli.__version__}\n")
    for needle in ("# preset = gold-2", "# gap = 1um", "# hbar_J_s = 1.0545e-34", "# k_B_J_K = 1.381e-23",
                   "# c_m_s = 299800000.0", "# omega_p_rad_s", "# tol_inner = 1e-10"):
        assert needle in h
    assert "workers" not in h and "somewhere" not in h
    assert all(line.startswith("#") for line in h.splitlines())


def test_temperature_grids():
    assert cli.temperature_grid(cli.RunConfig(tmin=0, tmax=10, tcount=3)).tolist() == [0, 5, 10]
    g = cli.temperature_grid(cli.RunConfig(tmin=1, tmax=100, tcount=3, tspacing="log"))
    assert g == pytest.approx([1, 10, 100])
    assert cli.temperature_grid(cli.RunConfig(tmin=4, tcount=1)).tolist() == [4]


def test_sweep_anchor_and_deterministic_workers(tmp_path):
    args = ["sweep", "--tmin", "0", "--tmax", "600", "--tcount", "3"]
    assert _run(tmp_path / "a", *args) == 0
    assert _run(tmp_path / "b", *args, "--workers", "2") == 0
    a, b = (tmp_path / d / "sweep.csv" for d in "ab")
    assert a.read_bytes() == b.read_bytes()
    rows = _rows(a)
    assert [float(r["T_K"]) for r in rows] == [0.0, 300.0, 600.0]
    for r in rows:
        assert float(r["F_total_J_m2"]) == pytest.approx(float(r["F_TE_J_m2"]) + float(r["F_TM_J_m2"]), rel=1e-14)
        assert float(r["F_total_J_m2"]) < 0


def test_sweep_vacuum_all_zero(tmp_path):
    assert _run(tmp_path, "sweep", "--model", "vacuum", "--tmax", "300", "--tcount", "2") == 0
    for r in _rows(tmp_path / "sweep.csv"):
        assert float(r["F_total_J_m2"]) == 0.0


def test_sweep_plasma_below_drude_at_low_T(tmp_path):
    F = {}
    for model in ("drude", "plasma"):
        assert _run(tmp_path / model, "sweep", "--model", model, "--tmin", "5", "--tmax", "20", "--tcount", "2") == 0
        F[model] = np.array([float(r["F_total_J_m2"]) for r in _rows(tmp_path / model / "sweep.csv")])
    assert np.all(F["plasma"][1:] < F["drude"][1:])


def test_sweep_failure_keeps_partial_file(tmp_path, monkeypatch):
    def boom(args):
        return None, "NumericalError: planted"

    monkeypatch.setattr(cli, "_sweep_point", boom)
    assert _run(tmp_path, "sweep", "--tmax", "300", "--tcount", "2") == cli.EXIT_NUMERICAL
    text = (tmp_path / "sweep.csv").read_text()
    assert "\n0.0," in text and "# FAILED at T=300.0: NumericalError: planted" in text


def test_t0_report(tmp_path):
    assert _run(tmp_path, "t0", "--model", "ideal") == 0
    kv = _kv(tmp_path / "t0.txt")
    assert kv["ratio_to_ideal"] == pytest.approx(1.0, rel=1e-6)


def test_asymptote_report(tmp_path):
    assert _run(tmp_path / "x", "asymptote", "--gap", "1000nm") == 0
    assert _run(tmp_path / "y", "asymptote", "--gap", "2um") == 0
    assert _run(tmp_path / "z", "asymptote", "--preset", "gold-1") == 0
    x, y, z = (_kv(tmp_path / d / "asymptote.txt") for d in "xyz")
    assert x["C1_J_m2K2"] == pytest.approx(5.81e-13, rel=0.01)
    assert x["C2_K_minus_half"] == pytest.approx(3.03, rel=0.02)
    assert x["zeta_minus_3_2"] == pytest.approx(-0.025485, abs=1e-6)
    assert y["C2_K_minus_half"] == pytest.approx(2 * x["C2_K_minus_half"], rel=1e-12)
    assert y["C1_J_m2K2"] == x["C1_J_m2K2"]
    assert 0.005 < abs(z["C1_J_m2K2"] / x["C1_J_m2K2"] - 1) < 0.05
    assert x["a_sqrtC"] ** 2 == pytest.approx(x["a2_kT_J_m2"] / x["hbar_nu_c2_over_wp2_J_m2"], rel=1e-12)


def test_reflection_edges(tmp_path):
    assert _run(tmp_path, "reflection", "--zeta-max", "1e14", "--zeta-count", "3", "--kperp-count", "3") == 0
    rows = _rows(tmp_path / "reflection.csv")
    assert len(rows) == 9
    edge = [r for r in rows if float(r["zeta_rad_s"]) == 0.0]
    assert all(float(r["A"]) == 1.0 and float(r["B"]) == 0.0 for r in edge)
    assert all(0 <= float(r["B"]) <= float(r["A"]) <= 1 for r in rows)


def test_reflection_single_point_and_ideal(tmp_path):
    assert _run(tmp_path / "s", "reflection", "--zeta-min", "1e13", "--zeta-max", "1e13", "--zeta-count", "1",
                "--kperp-min", "1e6", "--kperp-max", "1e6", "--kperp-count", "1") == 0
    assert len(_rows(tmp_path / "s" / "reflection.csv")) == 1
    assert _run(tmp_path / "i", "reflection", "--model", "ideal", "--zeta-count", "4", "--kperp-count", "4") == 0
    for r in _rows(tmp_path / "i" / "reflection.csv"):
        assert float(r["A"]) == 1.0 and float(r["B"]) == 1.0


def test_ratio_plasma_notes_zero_mode(tmp_path):
    assert _run(tmp_path, "ratio", "--model", "plasma") == 0
    text = (tmp_path / "verdict.txt").read_text()
    assert "zero_mode_condition=FAIL" in text and "verdict=FAIL" in text
    assert (tmp_path / "ratio.csv").exists()


def test_ratio_explicit_grid(tmp_path):
    args = ["ratio", "--tmin", "2", "--tmax", "4", "--tcount", "2"]
    assert _run(tmp_path, *args) == 0
    rows = _rows(tmp_path / "ratio.csv")
    assert [float(r["T_K"]) for r in rows] == [2.0, 4.0]
    for r in rows:
        num, th = float(r["deltaF_num_J_m2"]), float(r["deltaF_th_J_m2"])
        assert float(r["R"]) == pytest.approx((th - num) / th, rel=1e-14)
    # too few points for the fit: reported, not raised
    assert "ratio fit failed" in (tmp_path / "verdict.txt").read_text()


def test_version_flag(capsys):
    with pytest.raises(SystemExit) as info:
        cli.main(["--version"])
    assert info.value.code == 0
    assert cli.__version__ in capsys.readouterr().out
