import csv
import io
import json

import pytest

from sqtransfer.cli import main
from sqtransfer.config import ScenarioConfig, parse_config
from sqtransfer.errors import ConfigError
from sqtransfer.scenarios import OUTPUT_COLUMNS, figure_scenarios, run_simulate, run_sweep

SHORT = ["--set", "N=0.125", "--set", "t_max=2"]


def _read_csv(text):
    lines = [l for l in text.splitlines() if not l.startswith("#")]
    return list(csv.DictReader(lines))


def _comments(text):
    return [l[2:] for l in text.splitlines() if l.startswith("# ")]


def test_parse_defaults():
    cfg = parse_config("N=0.125")
    assert cfg.m_value == pytest.approx(0.375)
    assert cfg.kappa12_value == 1.0
    assert cfg.dt_value == pytest.approx(1e-3)
    assert cfg.jump_mode == "full" and cfg.K == 2 and cfg.initial_state == "1"


def test_parse_text_json_and_overrides():
    text = "N=0.125  # reservoir\nkappa2=0.5 initial_state=4\njump_mode=paper-b26"
    cfg = parse_config(text, {"eta": "0.9"})
    assert (cfg.kappa2, cfg.initial_state, cfg.jump_mode, cfg.eta) == (0.5, "4", "paper-b26", 0.9)
    assert cfg.kappa12_value == pytest.approx(0.5**0.5)
    assert cfg.dt_value == pytest.approx(1e-3)
    cfg = parse_config(json.dumps({"N": 0.1, "M": "0.2j", "initial_state": [0.5, 0.5]}))
    assert cfg.m_value == 0.2j and cfg.initial_state == (0.5, 0.5)


def test_auto_step_follows_fastest_rate():
    cfg = parse_config("N=0.125 kappa2=2")
    assert cfg.dt_value == pytest.approx(5e-4)
    assert cfg.time_step_ratio == 20


@pytest.mark.parametrize(
    "text,key",
    [
        ("M=0.2", "N"),
        ("N=0.125 M=0.5", "M"),
        ("N=-1", "N"),
        ("N=0.1 eta=1.2", "eta"),
        ("N=0.1 kappa1=0", "kappa1"),
        ("N=0.1 K=2.5", "K"),
        ("N=0.1 jump_mode=sometimes", "jump_mode"),
        ("N=0.1 initial_state=7", "initial_state"),
        ("N=0.1 initial_state=0.5,0.6", "initial_state"),
        ("N=0.1 dt=0.003", "dt"),
        ("N=0.1 colour=blue", "colour"),
        ("N=abc", "N"),
    ],
)
def test_config_errors_name_the_key(text, key):
    with pytest.raises(ConfigError) as info:
        parse_config(text)
    assert info.value.key == key


def test_config_lines_round_trip():
    cfg = parse_config("N=0.125 kappa2=0.5 initial_state=5 eta=0.9")
    again = parse_config("\n".join(l for l in cfg.to_lines() if "=" in l and not l.startswith("resolved")))
    assert again == cfg


def test_simulate_is_byte_deterministic(capsys):
    assert main(["simulate", *SHORT, "--set", "initial_state=2"]) == 0
    first = capsys.readouterr().out
    assert main(["simulate", *SHORT, "--set", "initial_state=2"]) == 0
    assert capsys.readouterr().out == first
    rows = _read_csv(first)
    assert list(rows[0]) == list(OUTPUT_COLUMNS)
    assert len(rows) == 201
    assert rows[0]["rho22"] == "1" and rows[-1]["t"] == "2"
    assert any(c.startswith("onset_time[theta=0.02]=") for c in _comments(first))
    assert any("boundary-shell" in c for c in _comments(first))


def test_steady_command(capsys):
    assert main(["steady", "--set", "N=0.125"]) == 0
    out = capsys.readouterr().out
    row = _read_csv(out)[0]
    assert row["t"] == "inf"
    assert float(row["negativity"]) == pytest.approx(0.678072, abs=1e-6)
    assert float(row["rho_alpha_alpha"]) == pytest.approx(1.0, abs=1e-9)
    assert float(row["eta12"]) == pytest.approx(3.0, abs=1e-9)
    assert "purity=1" in _comments(out)


def test_exit_codes(capsys, tmp_path):
    assert main(["simulate", "--set", "N=0.125", "--set", "M=0.5"]) == 2
    assert "M" in capsys.readouterr().err
    assert main(["steady", "--set", "N=0.125", "--set", "jump_mode=paper-b26"]) == 2
    cfg = tmp_path / "c.txt"
    cfg.write_text("N=0.125\nt_max=0.1\ninitial_state=0.9,0.2,-0.1\n")
    assert main(["simulate", "--config", str(cfg)]) == 2
    assert main(["spectra", "--epsilon", "0.6"]) == 2
    capsys.readouterr()


def test_failed_diagnostics_exit_code(monkeypatch, capsys):
    from sqtransfer import scenarios

    real = scenarios.simulate

    def broken(config):
        res = real(config)
        res.messages.append("t=0: state validity violated (positivity)")
        return res

    monkeypatch.setattr(scenarios, "simulate", broken)
    assert main(["simulate", "--set", "N=0.125", "--set", "t_max=0.05"]) == 3
    capsys.readouterr()


def test_sweep_order_and_consistency(capsys):
    base = parse_config("N=0.125 initial_state=4 t_max=5")
    serial = run_sweep(base, "kappa2", [2.0, 0.5, 1.0])
    parallel = run_sweep(base, "kappa2", [2.0, 0.5, 1.0], workers=3)
    assert [r.value for r in serial] == [2.0, 0.5, 1.0]
    assert serial == parallel
    single = run_simulate(base.replace(kappa2=0.5))
    assert serial[1].onset_time == single.onset
    assert serial[1].steady_negativity == single.steady_negativity
    assert main(["sweep", "--set", "N=0.125", "--set", "t_max=1", "--key", "eta", "--values", "1,0.9"]) == 0
    rows = _read_csv(capsys.readouterr().out)
    assert [r["value"] for r in rows] == ["1", "0.9"]
    assert float(rows[0]["steady_negativity"]) > float(rows[1]["steady_negativity"])


def test_sweep_rejects_bad_key_or_value():
    base = parse_config("N=0.125")
    with pytest.raises(ConfigError):
        run_sweep(base, "K", [2])
    with pytest.raises(ConfigError):
        run_sweep(base, "eta", [1.0, 1.5])


def test_figure_presets():
    assert [l for l, _ in figure_scenarios("fig4")] == ["init1", "init2", "init4", "init5"]
    fig5 = figure_scenarios("fig5b")
    assert [l for l, _ in fig5] == ["k2_1", "k2_0.5", "k2_2"]
    assert all(c.initial_state == "4" for _, c in fig5)
    assert [c.eta for _, c in figure_scenarios("fig7a")] == [1.0, 0.9, 0.8]
    with pytest.raises(ConfigError):
        figure_scenarios("fig9")


def test_reproduce_writes_simulate_output(tmp_path, capsys):
    assert main(["reproduce", "fig4", "--out", str(tmp_path), "--workers", "2"]) == 0
    paths = capsys.readouterr().out.split()
    assert [p.rsplit("/", 1)[1] for p in paths] == [f"fig4_init{s}.csv" for s in (1, 2, 4, 5)]
    buf = io.StringIO()
    run_simulate(ScenarioConfig(N=0.125, initial_state="1"), buf)
    assert (tmp_path / "fig4_init1.csv").read_text() == buf.getvalue()


def test_spectra_command(tmp_path, capsys):
    out = tmp_path / "s.csv"
    assert main(["spectra", "--points", "5", "--out", str(out)]) == 0
    rows = _read_csv(out.read_text())
    center = rows[2]
    assert float(center["omega_bar"]) == 0
    assert float(center["N"]) == pytest.approx(0.125)
    assert float(center["M"]) == pytest.approx(0.375)
    assert main(["spectra", "--kind", "nondegenerate", "--alpha", "3", "--points", "3"]) == 0
    assert len(_read_csv(capsys.readouterr().out)) == 3
