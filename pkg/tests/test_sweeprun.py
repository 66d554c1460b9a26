import csv
import io
import xml.etree.ElementTree as ET

import numpy as np
import pytest

from vqsl.exceptions import EmptyInput, IoError, ParseError, ValidationError
from vqsl.sweeprun import cli, config, output, runner

MINIMAL = """
state_family = werner-psi0
state_params = [0.5]
gamma_grid = [1.0]
lambda = 0.1
theta = 1
"""


def small_config(tmp_path, **extra):
    base = dict(
        state_family="werner-psi1",
        state_params=(0.3, 1.0),
        gamma_grid=(0.5, 1.0, 2.0),
        lam=0.1,
        theta=1.0,
        output_path=str(tmp_path / "out.csv"),
    )
    base.update(extra)
    return config.SweepConfig(**base)


def test_parse_minimal_defaults():
    cfg = config.parse_config(MINIMAL)
    assert cfg.state_family == "werner-psi0"
    assert cfg.state_params == (0.5,) and cfg.gamma_grid == (1.0,)
    assert cfg.lam == 0.1 and cfg.theta == 1.0
    assert cfg.tau == 1.0 and cfg.quadrature_steps == 256
    assert cfg.blp is None and cfg.emit_svg is False


def test_parse_full_document():
    text = """
    # reference sweep
    state_family = "horodecki"
    state_params = [0.0, 0.5, 1.5]   # alpha
    gamma_grid = geomspace(0.1, 10, 3)
    lambda = 1
    theta = -0.6
    tau = 2.0
    quadrature_steps = 64
    output_path = "out dir/h.csv"
    emit_svg = true
    blp_seed = 7
    blp_dt = 0.01
    """
    cfg = config.parse_config(text)
    assert cfg.state_family == "horodecki"
    np.testing.assert_allclose(cfg.gamma_grid, [0.1, 1.0, 10.0])
    assert cfg.theta == -0.6 and cfg.tau == 2.0 and cfg.quadrature_steps == 64
    assert cfg.output_path == "out dir/h.csv" and cfg.emit_svg
    assert cfg.blp == config.BlpConfig(None, 0.01, 7)


def test_linspace_range():
    cfg = config.parse_config(MINIMAL.replace("gamma_grid = [1.0]", "gamma_grid = linspace(1, 2, 5)"))
    assert cfg.gamma_grid == (1.0, 1.25, 1.5, 1.75, 2.0)


@pytest.mark.parametrize(
    "edit, field, message",
    [
        (("state_params = [0.5]", "state_params = [1.5]"), "state_params", "p out of [0,1]"),
        (("theta = 1", "theta = 1.2"), "theta", None),
        (("state_family = werner-psi0", "state_family = ghz"), "state_family", None),
        (("state_params = [0.5]", "state_params = [0.5, 0.2]"), "state_params", "ascending"),
        (("gamma_grid = [1.0]", "gamma_grid = [-1.0]"), "gamma_grid", None),
        (("lambda = 0.1", "lambda = 0"), "lambda", None),
        (("theta = 1", "theta = 1\nquadrature_steps = 33"), "quadrature_steps", None),
        (("theta = 1", "theta = 1\nquadrature_steps = 16"), "quadrature_steps", None),
        (("lambda = 0.1\n", ""), "lambda", "missing"),
        (("theta = 1", "theta = 1\nblp = false\nblp_dt = 0.01"), "blp", None),
        (("theta = 1", "theta = 1\nblp_dt = 0.1"), "blp_dt", None),
    ],
)
def test_validation_errors(edit, field, message):
    with pytest.raises(ValidationError) as err:
        config.parse_config(MINIMAL.replace(*edit))
    assert err.value.field == field
    if message:
        assert message in str(err.value)


def test_horodecki_domain():
    text = MINIMAL.replace("werner-psi0", "horodecki").replace("[0.5]", "[5.5]")
    with pytest.raises(ValidationError, match=r"alpha out of \[0,5\]"):
        config.parse_config(text)


@pytest.mark.parametrize(
    "text, line, key",
    [
        (MINIMAL + "colour = red\n", 7, "colour"),
        (MINIMAL + "theta = 0.5\n", 7, "theta"),
        ("state_family werner-psi0\n", 1, None),
        ("\n\nstate_params = [0.5\n", 3, None),
        ("gamma_grid = linspace(0, 1)\n", 1, None),
        ("tau = @@\n", 1, None),
    ],
)
def test_parse_errors_carry_line(text, line, key):
    with pytest.raises(ParseError) as err:
        config.parse_config(text)
    assert err.value.line == line
    assert err.value.key == key
    assert str(err.value).startswith(f"line {line}: ")


def test_load_config_missing_file(tmp_path):
    with pytest.raises(ValidationError, match="cannot read"):
        config.load_config(tmp_path / "missing.cfg")


def test_run_sweep_cardinality_and_order(tmp_path):
    rows = runner.run_sweep(small_config(tmp_path))
    assert len(rows) == 6
    assert [(r.state_param, r.gamma) for r in rows] == [
        (p, g) for p in (0.3, 1.0) for g in (0.5, 1.0, 2.0)
    ]
    for r in rows:
        assert r.tau_qsl <= r.tau + 1e-9 and r.negativity >= 0
        assert r.n_measure is None
        assert r.region == "FreeEntangled"


def test_run_sweep_matches_direct_metrics(tmp_path):
    from vqsl import metrics, states, vchannel

    rows = runner.run_sweep(small_config(tmp_path))
    r = rows[4]
    p = vchannel.ChannelParams.equal_rates(r.gamma, r.theta, r.lam)
    direct = metrics.qsl_time(states.werner(r.state_param, "psi1"), p)
    assert (r.fidelity, r.x_of_tau, r.tau_qsl) == (direct.fidelity, direct.x_of_tau, direct.tau_qsl)


def test_run_sweep_with_blp(tmp_path):
    cfg = runner.with_blp(small_config(tmp_path, gamma_grid=(1.0,), state_params=(0.5,)), t_max=5.0, dt=1e-2)
    (row,) = runner.run_sweep(cfg)
    assert row.n_measure is not None and row.n_measure >= 0


def test_workers_give_identical_rows(tmp_path):
    cfg = small_config(tmp_path)
    assert runner.run_sweep(cfg, workers=2) == runner.run_sweep(cfg, workers=1)


def test_sweep_row_check_rejects_bound_violation():
    row = runner.SweepRow("werner-psi0", 0.5, 1.0, 0.1, 1.0, 1.0, 0.9, 0.05, 2.0, 0.1, "FreeEntangled")
    with pytest.raises(runner.SweepPointError, match="QSL bound violated"):
        row.check()


def test_default_configs():
    cfgs = runner.default_configs("outdir")
    assert len(cfgs) == 12
    assert {c.lam for c in cfgs} == {0.1, 1.0, 10.0}
    assert all(c.theta == 1.0 and c.tau == 1.0 and len(c.gamma_grid) == 100 for c in cfgs)
    assert cfgs[0].gamma_grid[0] == pytest.approx(0.01) and cfgs[0].gamma_grid[-1] == pytest.approx(5.0)
    assert cfgs[0].output_path.endswith("werner-psi0_lambda0.1.csv")


def test_csv_header_only(tmp_path):
    path = tmp_path / "empty.csv"
    output.write_csv([], path)
    assert path.read_bytes() == (",".join(output.CSV_HEADER) + "\n").encode()


def test_csv_round_trip(tmp_path):
    rows = runner.run_sweep(small_config(tmp_path, state_params=(0.3,), gamma_grid=(1.0,)))
    text = output.csv_text(rows)
    assert "\r" not in text
    parsed = list(csv.reader(io.StringIO(text)))
    assert tuple(parsed[0]) == output.CSV_HEADER
    assert all(len(line) == 12 for line in parsed)
    rec = dict(zip(parsed[0], parsed[1]))
    r = rows[0]
    for key, value in (("gamma", r.gamma), ("fidelity", r.fidelity), ("x_of_tau", r.x_of_tau),
                       ("tau_qsl", r.tau_qsl), ("negativity", r.negativity), ("lambda", r.lam)):
        assert float(rec[key]) == float(f"{value:.12g}")
    assert rec["n_measure"] == "" and rec["region"] == r.region and rec["state_family"] == "werner-psi1"


def test_csv_unwritable(tmp_path):
    blocker = tmp_path / "file"
    blocker.write_text("x")
    with pytest.raises(IoError):
        output.write_csv([], blocker / "sub" / "out.csv")


def _row(param, gamma, tau_qsl):
    return runner.SweepRow("werner-psi0", param, gamma, 0.1, 1.0, 1.0, 0.9, 0.1, tau_qsl, 0.0, "Separable")


def test_svg_single_series():
    svg = output.svg_text([_row(0.5, 1.0, 0.1), _row(0.5, 2.0, 0.2)])
    root = ET.fromstring(svg.encode())
    ns = {"s": "http://www.w3.org/2000/svg"}
    assert root.get("viewBox") == "0 0 800 600"
    lines = root.findall("s:polyline", ns)
    assert len(lines) == 1
    points = lines[0].get("points").split()
    assert len(points) == 2
    texts = [t.text for t in root.findall("s:text", ns)]
    assert "gamma" in texts and "tau_QSL" in texts and "p = 0.5" in texts


def test_svg_monotone_x_and_series_count():
    gammas = np.geomspace(0.01, 5, 20)
    rows = [_row(p, g, 0.1 * g / 5) for p in (0.3, 0.7, 1.0) for g in gammas]
    root = ET.fromstring(output.svg_text(rows).encode())
    lines = root.findall("{http://www.w3.org/2000/svg}polyline")
    assert len(lines) == 3
    for line in lines:
        xs = [float(pt.split(",")[0]) for pt in line.get("points").split()]
        assert all(b > a for a, b in zip(xs, xs[1:]))
        assert min(xs) >= 0 and max(xs) <= 800


def test_svg_empty_and_deterministic(tmp_path):
    with pytest.raises(EmptyInput):
        output.render_svg([], tmp_path / "x.svg")
    rows = [_row(0.5, 1.0, 0.1), _row(0.5, 2.0, 0.2)]
    output.render_svg(rows, tmp_path / "a.svg")
    output.render_svg(rows, tmp_path / "b.svg")
    assert (tmp_path / "a.svg").read_bytes() == (tmp_path / "b.svg").read_bytes()


def run_cli(argv):
    buf = io.StringIO()
    code = cli.main(argv, out=buf)
    return code, buf.getvalue()


def test_cli_state_info():
    code, out = run_cli(["state-info", "--family", "horodecki", "--param", "2.5"])
    assert code == 0
    assert "region = Separable" in out and "negativity = 0" in out


def test_cli_state_info_out_of_domain(capsys):
    code, _ = run_cli(["state-info", "--family", "werner-psi0", "--param", "1.5"])
    assert code == 1
    assert "p out of" in capsys.readouterr().err


def test_cli_nonmarkov_markovian():
    code, out = run_cli(["nonmarkov", "--gamma", "0.5", "--lambda", "10", "--theta", "1"])
    assert code == 0
    value = float(out.splitlines()[0].split("=")[1])
    assert 0 <= value <= 1e-4
    assert "grid_step = 0.005" in out


def test_cli_missing_config(tmp_path, capsys):
    code, _ = run_cli(["sweep", str(tmp_path / "missing.cfg")])
    assert code == 1
    assert "missing.cfg" in capsys.readouterr().err


def test_cli_usage_errors(capsys):
    assert run_cli(["frobnicate"])[0] == 1
    assert run_cli(["state-info", "--family", "horodecki"])[0] == 1
    assert run_cli(["nonmarkov", "--gamma", "1", "--lambda", "1", "--theta", "1", "--bogus"])[0] == 1
    assert "usage" in capsys.readouterr().err


def test_cli_computational_failure(capsys):
    code, _ = run_cli(["nonmarkov", "--gamma", "1", "--lambda", "1", "--theta", "1", "--dt", "0.5"])
    assert code == 2


def test_cli_sweep_writes_csv_and_svg(tmp_path):
    cfg_path = tmp_path / "run.cfg"
    cfg_path.write_text(
        MINIMAL.replace("[1.0]", "[0.5, 1.0]") + f'output_path = "{tmp_path / "res" / "run.csv"}"\nemit_svg = true\n'
    )
    code, out = run_cli(["sweep", str(cfg_path)])
    assert code == 0, out
    lines = (tmp_path / "res" / "run.csv").read_text().splitlines()
    assert len(lines) == 3
    ET.parse(tmp_path / "res" / "run.svg")
    code2, _ = run_cli(["sweep", str(cfg_path), "--workers", "2"])
    assert code2 == 0
    assert (tmp_path / "res" / "run.csv").read_text().splitlines() == lines


@pytest.mark.parametrize("name", ["werner_nonmarkov.cfg", "horodecki_blp.cfg"])
def test_shipped_configs_parse(name):
    from pathlib import Path

    cfg = config.load_config(Path(__file__).resolve().parents[1] / "configs" / name)
    assert cfg.lam == 0.1 and cfg.theta == 1.0
