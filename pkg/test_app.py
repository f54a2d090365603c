"""
Testes do CLI em processo: app.main(argv)
"""
import io
import json

import pandas as pd
import pytest

import app
from data.models import CSV_COLUMNS
from utils.errors import TailDominated


@pytest.fixture(autouse=True)
def console_only_logs(monkeypatch):
    monkeypatch.setattr(app, "LOG_TO_FILE", False)


def _last_json_line(text: str) -> dict:
    return json.loads(text.strip().splitlines()[-1])

# =============================================================================
# lifetime
# =============================================================================

def test_lifetime_csv_for_free_particle(capsys):
    assert app.main(["lifetime", "--v0", "0"]) == 0
    out = capsys.readouterr().out
    assert out.splitlines()[0] == ",".join(CSV_COLUMNS)
    frame = pd.read_csv(io.StringIO(out))
    assert len(frame) == 1
    assert frame["deficit"][0] < 1e-3
    assert not frame["bound_state"][0]
    assert frame["status"][0] == "ok"


def test_lifetime_json_reports_sum_rules(tmp_path, capsys):
    manifest = tmp_path / "manifest.json"
    code = app.main(["lifetime", "--v0", "-4", "--format", "json", "--manifest", str(manifest)])
    assert code == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["result"]["bound_state"] is True
    assert set(payload["sum_rules"]) >= {"norm", "energy_integral", "energy_expected"}
    assert payload["manifest"]["command"] == "lifetime"
    assert json.loads(manifest.read_text(encoding="utf-8"))["spec_range"]["v0"] == -4.0

def test_lifetime_csv_with_bound_state(capsys):
    assert app.main(["lifetime", "--v0", "-4"]) == 0
    frame = pd.read_csv(io.StringIO(capsys.readouterr().out))
    assert bool(frame["bound_state"][0])


def test_energy_rule_failure_is_a_diagnostic(monkeypatch, capsys):
    def unavailable(spec, cfg):
        raise TailDominated("tail beyond k_max is 0.5 of the integral", tail=1.0, ratio=0.5)

    monkeypatch.setattr(app, "energy_sum_rule", unavailable)
    assert app.main(["lifetime", "--v0", "0", "--format", "json"]) == 0
    rules = json.loads(capsys.readouterr().out)["sum_rules"]
    assert rules["energy_integral"] is None
    assert rules["energy_error"]["error"] == "TailDominated"
    assert rules["norm"] > 0.999


def test_lifetime_csv_skips_energy_rule(monkeypatch):
    def unexpected(spec, cfg):
        raise AssertionError("energy rule computed for CSV output")

    monkeypatch.setattr(app, "energy_sum_rule", unexpected)
    assert app.main(["lifetime", "--v0", "0"]) == 0


def test_lifetime_ignores_flags_of_other_commands():
    # --alphas e --tmax só valem para validate e oracle
    assert app.main(["lifetime", "--v0", "0", "--alphas", "0.2,0.1", "--tmax", "-1"]) == 0

# =============================================================================
# Erros de uso e falhas numéricas
# =============================================================================

def test_missing_depth_is_usage_error():
    assert app.main(["lifetime"]) == 2


def test_positive_depth_is_rejected(capsys):
    assert app.main(["lifetime", "--v0", "1.5"]) == 2
    assert _last_json_line(capsys.readouterr().err)["error"] == "ValidationError"


def test_short_alpha_schedule_is_rejected():
    assert app.main(["validate", "--v0", "0", "--alphas", "0.2,0.1"]) == 2


def test_oracle_grid_beyond_cutoff_is_rejected(capsys):
    assert app.main(["oracle", "--v0", "0", "--kmax", "10"]) == 2
    assert _last_json_line(capsys.readouterr().err)["error"] == "ValueError"


def test_oracle_short_window_fails_with_tail_error(capsys):
    assert app.main(["oracle", "--v0", "0", "--tmax", "0.1"]) == 1
    assert _last_json_line(capsys.readouterr().err)["error"] == "TailDominated"

# =============================================================================
# sweep
# =============================================================================

def test_sweep_output_is_deterministic(tmp_path):
    first, second = tmp_path / "a.csv", tmp_path / "b.csv"
    base = ["sweep", "--v0a2-min", "-1", "--v0a2-max", "0", "--step", "0.5"]

    assert app.main(base + ["--threads", "2", "--out", str(first),
                            "--svg", str(tmp_path / "a.svg"),
                            "--manifest", str(tmp_path / "m.json")]) == 0
    assert app.main(base + ["--threads", "1", "--out", str(second)]) == 0

    assert first.read_bytes() == second.read_bytes()
    frame = pd.read_csv(first)
    assert frame["v0a2"].tolist() == [-1.0, -0.5, 0.0]
    assert (tmp_path / "a.svg").exists()
    assert json.loads((tmp_path / "m.json").read_text(encoding="utf-8"))["command"] == "sweep"


def test_sweep_rejects_positive_range(capsys):
    assert app.main(["sweep", "--v0a2-min", "-1", "--v0a2-max", "1"]) == 2

# =============================================================================
# oracle e validate, caminho de sucesso
# =============================================================================

def test_oracle_passes_for_free_particle(tmp_path, capsys):
    curve = tmp_path / "curve.csv"
    assert app.main(["oracle", "--v0", "0", "--format", "json", "--curve", str(curve)]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["status"] == "PASS"
    assert {row["quantity"] for row in payload["comparison"]} == {"num", "den", "tau_bar"}
    assert 0.999 <= payload["delta_p0"] <= 1.001
    assert curve.exists()


@pytest.mark.slow
def test_validate_passes_for_free_particle(capsys):
    assert app.main(["validate", "--v0", "0", "--format", "json"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["passed"] is True
    (report,) = payload["reports"]
    assert report["status"] == "PASS"
    assert report["d_rel_diff"] < 1e-3
