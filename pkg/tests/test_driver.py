import time

import pytest

from advverify import cli, driver
from advverify.driver import CaseConfig, ConfigError


def small(cfg, **kw):
    return CaseConfig(**{**cfg.__dict__, "n_levels": 3, **kw})


def test_preset_values():
    assert driver.preset("fig1de").dt_fixed == 1e-8
    assert driver.preset("fig1de").t_final == 1e-8
    assert driver.preset("fig2").mu == 0.95
    assert driver.preset("fig2").t_final_multiple == 1.0
    b = driver.preset("fig1b")
    assert (b.base_cells, b.n_levels, b.a) == (8, 6, 1.0)
    c = driver.preset("fig1c")
    assert (c.experiment, c.mu, c.t_final_multiple) == ("ode_time", 0.01, 1.0)
    assert driver.preset("scaled_dt_pitfall").mu == 0.01
    assert driver.preset("exp_tables").experiment == "factors"
    with pytest.raises(ConfigError):
        driver.preset("fig9")


def test_scaled_time_settings_match_cfl_rule():
    from advverify.grid import grid_family

    cfg = driver.preset("fig1c")
    grids = grid_family("regular", 8, 6)
    settings = driver.time_settings(cfg, grids)
    for k, (g, (dt, tf)) in enumerate(zip(grids, settings)):
        assert dt == 0.01 * g.h
        assert tf == 0.01 / 8
        assert round(tf / dt) == 2**k


@pytest.mark.parametrize("fields", [
    dict(experiment="steady", mu=0.5),
    dict(experiment="unsteady_fixed_dt"),
    dict(experiment="unsteady_fixed_dt", dt_fixed=1e-3, mu=0.5),
    dict(experiment="unsteady_scaled_dt"),
    dict(experiment="unsteady_scaled_dt", mu=0.1, dt_fixed=0.1),
    dict(experiment="remedy", mu=1.5),
    dict(experiment="remedy", mu=0.5, t_final=0.1),
    dict(experiment="remedy", mu=0.5, t_final_multiple=0.5),
    dict(experiment="ode_time", mu=0.1, t_final=1.0, t_final_multiple=1.0),
    dict(experiment="nonsense"),
    dict(experiment="steady", grid_kind="hex"),
    dict(experiment="steady", n_levels=1),
    dict(experiment="steady", a=-1.0),
])
def test_conflicting_configs_rejected(fields):
    with pytest.raises(ConfigError):
        CaseConfig(**fields)


def test_parse_config_text():
    text = """
    # remedy study
    experiment = remedy
    mu = 0.95   # CFL
    grid = irregular
    levels = 4
    tf_multiple = 5
    out = /tmp/x
    """
    cfg = CaseConfig(**driver.parse_config_text(text))
    assert (cfg.experiment, cfg.mu, cfg.grid_kind, cfg.n_levels) == ("remedy", 0.95,
                                                                     "irregular", 4)
    assert cfg.t_final_multiple == 5.0 and cfg.output_dir == "/tmp/x"


@pytest.mark.parametrize("text", ["experiment steady", "bogus = 1",
                                  "experiment = steady\nexperiment = steady",
                                  "levels = many", "grid = regular\ngrid_kind = both"])
def test_parse_config_errors(text):
    with pytest.raises(ConfigError):
        driver.parse_config_text(text)


def test_config_text_round_trip(tmp_path):
    cfg = driver.preset("fig2")
    path = tmp_path / "fig2.cfg"
    path.write_text(driver.config_text(cfg))
    assert driver.load_config(path) == cfg


def test_run_experiment_rejects_both_and_factors():
    with pytest.raises(ConfigError):
        driver.run_experiment(driver.preset("fig1b"))
    with pytest.raises(ConfigError):
        driver.run_experiment(driver.preset("exp_tables"))


def test_level_failure_names_level():
    cfg = CaseConfig(experiment="unsteady_fixed_dt", grid_kind="regular", dt_fixed=3e-3,
                     t_final=1e-2, n_levels=2)
    with pytest.raises(ValueError, match="level 0"):
        driver.run_experiment(cfg)


def test_emit_outputs(tmp_path):
    cfg = driver.preset("fig1b").for_kind("regular")
    cfg = CaseConfig(**{**cfg.__dict__, "output_dir": str(tmp_path)})
    table = driver.run_experiment(cfg)
    csv = (tmp_path / "fig1b_regular.csv").read_text().splitlines()
    assert csv[0] == "level,n_cells,h,l1_error,linf_error,l1_order,linf_order"
    assert len(csv) == 7
    assert csv[1].endswith(",,")
    fields = csv[-1].split(",")
    assert float(fields[3]) == table.rows[-1].l1_error
    assert float(fields[6]) == table.rows[-1].linf_order
    dat = (tmp_path / "fig1b_regular.dat").read_text().splitlines()
    assert dat[0].startswith("#") and len(dat) == 7
    assert [float(v) for v in dat[1].split()] == [0.125, table.rows[0].l1_error,
                                                  table.rows[0].linf_error]
    report = (tmp_path / "fig1b_regular_report.txt").read_text()
    assert "design band [1.9, 2.1]: PASS" in report


def test_pitfall_report_wording(tmp_path):
    cfg = CaseConfig(**{**driver.preset("fig1de").__dict__, "grid_kind": "irregular",
                        "output_dir": str(tmp_path)})
    driver.run_experiment(cfg)
    report = (tmp_path / "fig1de_irregular_report.txt").read_text()
    assert "observed Linf order 1.0" in report and "pitfall band [0.8, 1.2]: PASS" in report


def test_outputs_byte_deterministic(tmp_path):
    for sub in ("a", "b"):
        cfg = CaseConfig(**{**driver.preset("fig2").__dict__, "output_dir": str(tmp_path / sub)})
        driver.run_case(cfg)
    names = sorted(p.name for p in (tmp_path / "a").iterdir())
    assert len(names) == 6
    for name in names:
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()


def test_expected_bands():
    fixed = driver.preset("fig1de")
    assert driver.expected_bands(fixed.for_kind("regular")) == {
        "l1": driver.DESIGN_BAND, "linf": driver.PITFALL_BAND}
    assert driver.expected_bands(fixed.for_kind("irregular")) == {
        "l1": driver.PITFALL_BAND, "linf": driver.PITFALL_BAND}
    assert driver.expected_bands(driver.preset("fig2"))["l1"] == driver.REMEDY_BAND


@pytest.mark.parametrize("name", ["fig1b", "fig1c", "fig1de", "scaled_dt_pitfall", "fig2"])
def test_presets_run_quickly(name):
    start = time.perf_counter()
    driver.run_case(driver.preset(name), write=False)
    assert time.perf_counter() - start < 10.0


# CLI surface

def test_cli_list_presets(capsys):
    assert cli.main(["list-presets"]) == 0
    out = capsys.readouterr().out
    for name in driver.PRESETS:
        assert name in out


def test_cli_factors(capsys):
    assert cli.main(["factors"]) == 0
    out = capsys.readouterr().out
    assert "0.73" in out and "1.3e-14" in out


def test_cli_run_preset_writes_files(tmp_path, capsys):
    assert cli.main(["run", "--preset", "fig1b", "--levels", "3", "--out", str(tmp_path),
                     "--check"]) == 0
    assert (tmp_path / "fig1b_irregular.csv").exists()
    assert "PASS" in capsys.readouterr().out


def test_cli_flags_express_preset(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    assert cli.main(["run", "--preset", "fig2", "--out", str(a)]) == 0
    assert cli.main(["run", "--experiment", "remedy", "--mu", "0.95", "--tf-multiple", "1",
                     "--grid", "both", "--levels", "6", "--a", "1", "--seed", "0",
                     "--name", "fig2", "--out", str(b)]) == 0
    for p in sorted(a.iterdir()):
        assert p.read_bytes() == (b / p.name).read_bytes()


def test_cli_config_file(tmp_path, capsys):
    cfg = tmp_path / "case.cfg"
    cfg.write_text("experiment = steady\ngrid = regular\nlevels = 3\n")
    assert cli.main(["run", "--config", str(cfg)]) == 0
    assert "steady" in capsys.readouterr().out


def test_cli_exit_codes(tmp_path, monkeypatch, capsys):
    assert cli.main(["run", "--preset", "nope"]) == 1
    assert cli.main(["run", "--experiment", "steady", "--mu", "0.3"]) == 1
    assert cli.main(["run", "--experiment", "unsteady_fixed_dt", "--dt", "0.003",
                     "--tf", "0.01", "--levels", "2"]) == 1
    assert cli.main(["run", "--config", str(tmp_path / "missing.cfg")]) == 1
    # a remedy schedule with tiny mu shows the pitfall, so --check fails
    assert cli.main(["run", "--preset", "fig2", "--mu", "0.01", "--check"]) == 3
    assert cli.main(["run", "--preset", "fig2", "--mu", "0.01"]) == 0

    def boom(cfg, write=True):
        raise FloatingPointError("solution field contains non-finite values")

    monkeypatch.setattr(driver, "run_case", boom)
    assert cli.main(["run", "--preset", "fig2"]) == 2
    assert "runtime error" in capsys.readouterr().err


def test_cli_exp_tables_preset(tmp_path, capsys):
    assert cli.main(["run", "--preset", "exp_tables", "--out", str(tmp_path)]) == 0
    assert "0.99" in capsys.readouterr().out
    assert (tmp_path / "exp_tables.txt").exists()
