import csv
import json
import subprocess
import sys

import pytest

from hpmsim.cli import EXIT_RUNTIME, EXIT_USAGE, EXIT_VALIDATION, main


def run(*args, cwd=None):
    return subprocess.run(
        [sys.executable, "-m", "hpmsim", *args], capture_output=True, text=True, cwd=cwd, timeout=120
    )


def body(text):
    return [row for row in csv.reader(line for line in text.splitlines() if not line.startswith("#"))]


def test_efield_defaults():
    proc = run("efield", "--no-timestamp")
    assert proc.returncode == 0, proc.stderr
    rows = body(proc.stdout)
    assert rows[0][0] == "range_m [m]"
    col = rows[0].index("efield_vpm [V/m]")
    values = {float(r[0]): float(r[col]) for r in rows[1:]}
    assert values[20.0] == pytest.approx(495, rel=0.01)
    assert values[40.0] == pytest.approx(247, rel=0.01)
    assert "# scenario_hash: " in proc.stdout


def test_byte_identical_without_timestamp():
    a = run("montecarlo", "--trials", "2000", "--no-timestamp", "--workers", "1")
    b = run("montecarlo", "--trials", "2000", "--no-timestamp", "--workers", "4")
    assert a.returncode == 0 and a.stdout == b.stdout
    assert "timestamp" not in a.stdout


def test_timestamp_line_present_by_default():
    assert "# timestamp: " in run("safety").stdout


def test_montecarlo_range_flags():
    proc = run("montecarlo", "--range", "20..40", "--step", "5", "--trials", "500", "--no-timestamp")
    rows = body(proc.stdout)
    assert [float(r[0]) for r in rows[1:]] == [20.0, 25.0, 30.0, 35.0, 40.0]


def test_json_to_file(tmp_path):
    out = tmp_path / "wg.json"
    proc = run("safety", "--format", "json", "--out", str(out))
    assert proc.returncode == 0 and proc.stdout == ""
    doc = json.loads(out.read_text())
    assert set(doc) == {"metadata", "columns", "rows"}


def test_multi_table_directory(tmp_path):
    proc = run("waveguide", "--out", str(tmp_path / "wg"))
    assert proc.returncode == 0, proc.stderr
    assert sorted(p.name for p in (tmp_path / "wg").iterdir()) == [
        "waveguide_attenuation.csv",
        "waveguide_modes.csv",
    ]


def test_trailing_slash_means_directory(tmp_path):
    assert main(["safety", "--out", f"{tmp_path}/tables/"]) == 0
    assert (tmp_path / "tables" / "safety.csv").is_file()


def test_config_file(tmp_path):
    cfg = tmp_path / "s.toml"
    cfg.write_text("[system]\ntransmit_power = 100000.0\n")
    proc = run("efield", "--config", str(cfg), "--range", "20..20", "--no-timestamp")
    header, row = body(proc.stdout)
    value = float(row[header.index("efield_vpm [V/m]")])
    assert value == pytest.approx(2 * 494.678, rel=1e-4)


class TestExitCodes:
    def test_unknown_command(self):
        proc = run("bogus")
        assert proc.returncode == EXIT_USAGE
        assert "usage:" in proc.stderr

    def test_missing_command(self):
        assert run().returncode == EXIT_USAGE

    def test_validation(self, tmp_path):
        cfg = tmp_path / "bad.toml"
        cfg.write_text("[system]\ntransmit_power = -1\n")
        proc = run("efield", "--config", str(cfg))
        assert proc.returncode == EXIT_VALIDATION
        assert "system.transmit_power" in proc.stderr and "line 2" in proc.stderr

    def test_bad_duty(self):
        assert run("efield", "--duty", "2").returncode == EXIT_VALIDATION

    def test_unwritable_output(self, tmp_path):
        blocker = tmp_path / "file"
        blocker.write_text("x")
        proc = run("safety", "--out", str(blocker / "out.csv"))
        assert proc.returncode == EXIT_RUNTIME
        assert str(blocker) in proc.stderr

    def test_missing_config_is_runtime(self, tmp_path):
        assert main(["efield", "--config", str(tmp_path / "nope.toml")]) == EXIT_RUNTIME


@pytest.mark.parametrize("command", ["killcurve", "tradespace", "coupling", "thermal", "dwell", "pulsed", "dish"])
def test_every_command_runs(command, capsys):
    assert main([command, "--no-timestamp", "--trials", "200"]) == 0
    assert "# scenario_hash:" in capsys.readouterr().out


def test_reproduce_paper(tmp_path):
    out = tmp_path / "repro"
    proc = run("--reproduce-paper", "--out", str(out), "--no-timestamp")
    assert proc.returncode == 0, proc.stderr
    names = {p.stem for p in out.iterdir()}
    assert {"efield", "montecarlo", "waveguide_modes", "comparison", "discrepancies"} <= names
    rows = body((out / "discrepancies.csv").read_text())
    claims = {r[0] for r in rows[1:]}
    for claim in (
        "deterministic_kill_30m_pct",
        "kill_range_90pct_25kW_0.60m_m",
        "kill_range_90pct_500kW_peak_m",
        "kill_range_90pct_5kW_cw_m",
        "kill_range_90pct_5kW_avg_1pct_duty_m",
        "coupled_voltage_6cm_300vpm_v",
        "magnetron_heat_25kW_w",
    ):
        assert claim in claims
    comparison = body((out / "comparison.csv").read_text())
    assert all(r[-1] == "1" for r in comparison[1:])
