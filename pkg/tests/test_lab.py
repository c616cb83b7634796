import numpy as np
import pytest

from twofluid.lab import (
    ConfigError,
    Scenario,
    ScenarioConfig,
    StepError,
    build_briowu,
    build_manufactured,
    build_scenario,
    build_soliton1d,
    build_soliton2d,
    l1_error,
    load_config,
    parse_config,
    run,
)
from twofluid.lab.cli import main
from twofluid.lab.io import SERIES_HEADER, read_series, read_snapshot, snapshot_primitives, write_snapshot
from twofluid.lab.scenarios import (
    manufactured_density,
    manufactured_forcing,
    soliton1d_density,
    soliton2d_density,
)
from twofluid.mesh import Field, conserved_totals
from twofluid.state import PRIM_NAMES, cons_to_prim, prim_to_cons


def _prim(sc):
    return cons_to_prim(sc.field.interior, sc.params)


def test_manufactured_initial_data():
    sc = build_manufactured(100)
    q = _prim(sc)
    x = sc.field.grid.x
    np.testing.assert_allclose(q[:, 0], 2 + np.sin(2 * np.pi * x), rtol=1e-15)
    np.testing.assert_allclose(q[:, 5], q[:, 0], rtol=1e-15)
    np.testing.assert_allclose(q[:, [1, 6]], 1.0, rtol=1e-14)
    np.testing.assert_allclose(q[:, [4, 9]], 1.0, rtol=1e-13)
    np.testing.assert_array_equal(q[:, 15], -q[:, 11])
    assert sc.params.lambda_m == 2.0
    assert manufactured_density(0.25, 0.0) == 3.0
    k = manufactured_forcing(np.array(0.0), None, 0.0)
    assert k[13] == -2.0 and k[16] == 2.0
    assert np.count_nonzero(k) == 2
    assert manufactured_density(0.3 + 0.2, 0.2) == pytest.approx(manufactured_density(0.3, 0.0), rel=1e-15)
    with pytest.raises(ValueError):
        build_manufactured(4)


def test_soliton1d_initial_data():
    assert soliton1d_density(4.0) == 2.0
    assert soliton1d_density(4.0 + np.log(2) / 25) == pytest.approx(1.5, rel=1e-14)
    sc = build_soliton1d(120)
    q = _prim(sc)
    assert sc.field.grid.x1 == 12.0 and sc.params.lambda_m == 25.0 and sc.params.lambda_hat_d == 1.0
    np.testing.assert_allclose(q[:, 4] / q[:, 9], 0.01, rtol=1e-13)
    np.testing.assert_allclose(q[:, 9], 5 * q[:, 0], rtol=1e-13)
    np.testing.assert_allclose(q[:, 5], q[:, 0] / 25, rtol=1e-15)
    assert np.all(q[:, [1, 2, 3, 6, 7, 8]] == 0.0) and np.all(q[:, 10:] == 0.0)
    with pytest.raises(ValueError):
        build_soliton1d(50)


def test_briowu_initial_data():
    sc = build_briowu(100)
    q = _prim(sc)
    left, right = q[0], q[-1]
    assert left[11] == 1.0 and right[11] == -1.0
    assert left[10] == right[10] == 0.75
    assert left[4] == pytest.approx(0.5, rel=1e-14) and right[4] == pytest.approx(0.05, rel=1e-14)
    assert left[9] == pytest.approx(0.5, rel=1e-14)
    assert left[5] / left[0] == pytest.approx(1 / 1836, rel=1e-15)
    assert right[0] == 0.125
    assert sc.params.lambda_hat_d == 0.01
    assert sc.field.bc["x_lo"].value == "zero_gradient"


def test_soliton2d_initial_data():
    sc = build_soliton2d(50, 50)
    assert soliton2d_density(1.0, 1.0) == 6.0
    assert soliton2d_density(0.0, 0.0) == pytest.approx(1.0, abs=1e-300)
    assert soliton2d_density(1.13, 1.0) == soliton2d_density(1.0, 1.13)
    rho = _prim(sc)[..., 0]
    np.testing.assert_array_equal(rho, rho.T)
    # mirrored cell centres agree only to rounding
    np.testing.assert_allclose(rho, rho[::-1], rtol=1e-14)
    with pytest.raises(ValueError):
        build_soliton2d(50, 20)


def test_l1_error_examples():
    sc = build_manufactured(64)
    assert l1_error(sc.field, sc.exact_density, 0.0) < 1e-14
    u = sc.field.interior.copy()
    u[:, 0] += 1e-3
    f = sc.field.with_interior(u)
    assert l1_error(f, sc.exact_density, 0.0) == pytest.approx(1e-3, rel=1e-9)


def test_l1_error_riemann_sum_converges():
    # fixed smooth mismatch 0.01 sin^2: the Riemann sum tends to 0.005
    vals = []
    for n in (32, 64, 128):
        sc = build_manufactured(n)
        u = sc.field.interior.copy()
        u[:, 0] += 0.01 * np.sin(np.pi * sc.field.grid.x) ** 2
        vals.append(l1_error(sc.field.with_interior(u), sc.exact_density, 0.0))
    np.testing.assert_allclose(vals, 0.005, rtol=1e-12)


CFG = """
# manufactured smoke
scenario = manufactured
nx = 40
order = 2
rk_order = 2
stepper = explicit
t_end = 0.05
r_hat_g = 1e6
with_source = true
"""


def test_parse_config():
    cfg = parse_config(CFG)
    assert cfg.nx == 40 and cfg.t_end == 0.05 and cfg.params == {"r_hat_g": 1e6}
    assert cfg.with_source is True and cfg.output_dir is None
    cfg2 = cfg.with_overrides(["nx=80", "stepper = IMEX", "c_hat=20"])
    assert cfg2.nx == 80 and cfg2.stepper == "imex" and cfg2.params["c_hat"] == 20.0
    assert cfg.nx == 40


@pytest.mark.parametrize("text, needle", [
    ("nx = 10\nnx = 20", "line 2: duplicate"),
    ("colour = red", "line 1: unknown configuration key"),
    ("nx 10", "line 1"),
    ("nx = ten", "bad value"),
    ("with_source = yes", "true or false"),
    ("order = 3", "order"),
    ("scenario = tokamak", "unknown scenario"),
    ("t_end = -1", "t_end"),
    ("scenario = soliton2d\nnx = 50", "ny"),
])
def test_config_errors(text, needle):
    with pytest.raises(ConfigError, match=needle):
        parse_config(text)


def test_load_config(tmp_path):
    p = tmp_path / "run.cfg"
    p.write_text(CFG, encoding="utf-8")
    assert load_config(p) == parse_config(CFG)


@pytest.mark.parametrize("name", ["soliton1d", "soliton2d", "briowu"])
def test_snapshot_round_trip_bit_exact(tmp_path, name):
    cfg = ScenarioConfig(scenario=name, nx=100 if name != "soliton2d" else 50, ny=50 if name == "soliton2d" else 0)
    sc = build_scenario(cfg)
    u = sc.field.interior.copy()
    u[..., 1] += 1e-3 * np.sin(np.arange(u[..., 1].size)).reshape(u.shape[:-1])
    f = sc.field.with_interior(u)
    path = write_snapshot(tmp_path / "snap.csv", f, sc.params)
    header, data = read_snapshot(path)
    assert header[-18:] == list(PRIM_NAMES)
    q = snapshot_primitives(path, f.grid)
    np.testing.assert_array_equal(q, cons_to_prim(f.interior, sc.params))
    # re-ingest: conservative values agree to roundoff of one conversion
    g = Field.from_interior(f.grid, prim_to_cons(q, sc.params), f.bc)
    np.testing.assert_allclose(g.interior, f.interior, rtol=1e-15, atol=1e-300)


def test_run_writes_outputs(tmp_path):
    cfg = parse_config(CFG).with_overrides({"output_dir": str(tmp_path), "snapshot_interval": "0.02"})
    rep = run(cfg)
    assert rep.t_final == 0.05
    assert rep.final_l1_error is not None and rep.final_l1_error < 1e-2
    series = read_series(tmp_path / "series.csv")
    assert series.shape == (rep.steps_taken, len(SERIES_HEADER))
    assert np.all(np.diff(series[:, 0]) > 0) and np.all(series[:, 1] > 0)
    assert series[-1, 0] == 0.05
    # t = 0, 0.02, 0.04 and the final state
    snaps = sorted(p.name for p in tmp_path.glob("snap_*.csv"))
    assert snaps == ["snap_0.csv", "snap_1.csv", "snap_2.csv", "snap_3.csv"]
    assert np.any(np.isclose(series[:, 0], 0.02, rtol=0, atol=1e-15))
    np.testing.assert_array_equal(rep.series, series)


def test_manufactured_smoke_run():
    rep = run(ScenarioConfig(scenario="manufactured", nx=100, t_end=0.5))
    assert rep.t_final == 0.5
    assert rep.final_l1_error < 1e-2


def test_periodic_mass_constant():
    rep = run(ScenarioConfig(scenario="soliton1d", nx=120, t_end=0.05, rk_order=3))
    mass = rep.series[:, 5:7]
    sc = build_soliton1d(120)
    m0 = conserved_totals(sc.field)[[0, 5]]
    assert np.all(np.abs(mass - m0) <= 1e-11 * m0)


def test_imex_step_counts_invariant_in_r_hat_g():
    # light speed above every fluid speed makes the CFL step state independent
    counts = set()
    for r in (1e-2, 1e-4, 1e-6):
        rep = run(ScenarioConfig(scenario="soliton1d", nx=100, rk_order=3, stepper="imex", t_end=0.2,
                                 params=dict(r_hat_g=r, c_hat=20.0)))
        assert np.all(np.isfinite(rep.field.interior))
        counts.add(rep.steps_taken)
    assert len(counts) == 1


def test_step_failure_reports_partial(tmp_path):
    # near-vacuum pressure with colliding streams and cfl = 1 breaks admissibility
    sc = build_soliton1d(100)
    q = _prim(sc)
    q[:, 1] = np.where(np.arange(100) % 2, 4.0, -4.0)
    q[:, 4] = 1e-8
    sc = Scenario(sc.name, sc.field.with_interior(prim_to_cons(q, sc.params)), sc.params)
    cfg = ScenarioConfig(scenario="soliton1d", nx=100, cfl=1.0, t_end=0.1, with_source=False,
                         output_dir=str(tmp_path))
    with pytest.raises(StepError) as err:
        run(cfg, sc)
    assert "step failed at t=" in str(err.value) and "in cell" in str(err.value)
    assert err.value.report.t_final < 0.1
    assert (tmp_path / "series.csv").exists() and (tmp_path / "snap_0.csv").exists()


def test_cli_run_and_sweep(tmp_path, capsys):
    cfg = tmp_path / "m.cfg"
    cfg.write_text(CFG, encoding="utf-8")
    assert main(["run", "--config", str(cfg), "--override", f"output_dir={tmp_path / 'one'}"]) == 0
    assert "manufactured: steps=" in capsys.readouterr().out
    assert (tmp_path / "one" / "series.csv").exists()

    out = tmp_path / "sw"
    rc = main(["sweep", "--config", str(cfg), "--key", "r_hat_g", "--values", "1e6,1e4",
               "--override", f"output_dir={out}"])
    assert rc == 0
    lines = (out / "sweep.csv").read_text().splitlines()
    assert lines[0] == "r_hat_g,steps_taken,wall_seconds,t_final,final_l1_error"
    assert [ln.split(",")[0] for ln in lines[1:]] == ["1e6", "1e4"]
    assert (out / "r_hat_g_1e4" / "snap_0.csv").exists()


def test_cli_errors(tmp_path, capsys):
    assert main(["run", "--config", str(tmp_path / "missing.cfg")]) == 2
    bad = tmp_path / "bad.cfg"
    bad.write_text("nx = 10\nbogus = 1\n", encoding="utf-8")
    assert main(["run", "--config", str(bad)]) == 2
    assert "line 2" in capsys.readouterr().err
    ok = tmp_path / "ok.cfg"
    ok.write_text(CFG, encoding="utf-8")
    assert main(["run", "--config", str(ok), "--override", "nx=4"]) == 1
    assert capsys.readouterr().err.startswith("error: ")
