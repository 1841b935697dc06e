import json

import pytest
from click.testing import CliRunner

from phasebounds.cli import CSV_HEADER, main


@pytest.fixture
def runner():
    return CliRunner()


def invoke(runner, args, **kw):
    return runner.invoke(main, args, **kw)


def test_jd_da_snr0(runner):
    res = invoke(runner, ["jd", "--scenario", "da", "--snr-db", "0"])
    assert res.exit_code == 0
    lines = res.stdout.splitlines()
    assert lines[0] == CSV_HEADER
    assert lines[1] == "0.0,2.0,qam4/da/jd,2.0,0.0,0"


def test_bound_with_oracle(runner):
    res = invoke(runner, [
        "bound", "--kind", "hcrb", "--mode", "offline", "--scenario", "da",
        "--snr-db", "2", "--sigma-w2", "0.005", "--length", "60",
        "--position", "30", "--oracle", "--format", "json"])
    assert res.exit_code == 0
    doc = json.loads(res.stdout)
    assert doc["meta"]["schema"] == 1
    assert doc["meta"]["oracle"]["relative_error"] <= 1e-8
    assert doc["series"][0]["y"][0] == pytest.approx(
        doc["meta"]["oracle"]["value"], rel=1e-8)


def test_sweep_snr_csv_deterministic(runner, tmp_path):
    args = ["sweep-snr", "--modulation", "qam16", "--scenario", "nda",
            "--samples", "2000", "--seed", "7", "--format", "csv",
            "--snr-start", "0", "--snr-stop", "8", "--snr-step", "4"]
    a = invoke(runner, args)
    b = invoke(runner, args)
    assert a.exit_code == 0
    assert a.stdout == b.stdout
    lines = a.stdout.splitlines()
    assert lines[0] == CSV_HEADER
    assert len(lines) == 4  # header + 3 grid points


def test_json_meta_captures_parameters(runner):
    res = invoke(runner, ["sweep-position", "--length", "10",
                          "--format", "json"])
    doc = json.loads(res.stdout)
    meta = doc["meta"]
    for key in ("schema", "command", "snr_db", "sigma_w2", "xi", "scenario",
                "modulations", "bounds", "length", "samples", "seed"):
        assert key in meta
    assert meta["schema"] == 1
    assert len(doc["series"][0]["x"]) == 10


def test_output_file_atomic_write(runner, tmp_path):
    out = tmp_path / "curve.csv"
    res = invoke(runner, ["sweep-position", "--length", "5",
                          "--output", str(out)])
    assert res.exit_code == 0
    text = out.read_text()
    assert text.startswith(CSV_HEADER + "\n")
    assert not list(tmp_path.glob("*.tmp"))


def test_figure_rendering(runner, tmp_path):
    fig = tmp_path / "curve.png"
    res = invoke(runner, ["sweep-position", "--length", "10",
                          "--figure", str(fig), "--output",
                          str(tmp_path / "c.csv")])
    assert res.exit_code == 0
    assert fig.stat().st_size > 0


def test_xi_note_on_stderr_not_stdout(runner):
    res = invoke(runner, ["bound", "--xi", "0.03", "--scenario", "da",
                          "--length", "10", "--position", "5"])
    assert res.exit_code == 0
    assert "xi" in res.stderr
    assert "note" not in res.stdout


def test_flag_validation_exit_2(runner):
    res = invoke(runner, ["bound", "--kind", "crlb"])
    assert res.exit_code == 2
    res = invoke(runner, ["bound", "--length", "1", "--position", "1",
                          "--scenario", "da"])
    assert res.exit_code == 2
    res = invoke(runner, ["sweep-snr", "--snr-step", "-1"])
    assert res.exit_code == 2


def test_numerical_failure_exit_3(runner):
    res = invoke(runner, ["bound", "--scenario", "da", "--sigma-w2", "1e-300",
                          "--length", "10", "--position", "5"])
    assert res.exit_code == 3


def test_env_var_seed(runner):
    res = invoke(runner, ["jd", "--scenario", "nda", "--samples", "2000"],
                 env={"PHASEBOUNDS_SEED": "123"})
    assert res.exit_code == 0
    assert res.stdout.splitlines()[1].endswith(",123")


def test_oracle_crosscheck_flag(runner):
    res = invoke(runner, ["sweep-position", "--length", "20", "--oracle",
                          "--format", "json"])
    assert res.exit_code == 0
    doc = json.loads(res.stdout)
    assert doc["meta"]["oracle_crosscheck_max_rel_error"] <= 1e-8


def test_check_command(runner):
    res = invoke(runner, ["check"])
    assert res.exit_code == 0
    doc = json.loads(res.stdout)
    assert doc["passed"] is True
    assert doc["max_relative_error"] <= 1e-8
