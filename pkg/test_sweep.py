"""
Testes da varredura, da análise do início do déficit e da exportação
"""
import io
import json
import math

import numpy as np
import pandas as pd
import pytest

import runner.sweep as sweep_module
from config import ACCEPTANCE
from data.exporter import render_csv, render_json, write_rows, write_svg, write_text_atomic
from data.models import CSV_COLUMNS, RunManifest, SweepRow
from runner.sweep import SweepEngine, find_deficit_onset, sweep_grid, upturn_at_onset
from utils.errors import NonConvergence

# =============================================================================
# Grade
# =============================================================================

def test_default_grid_has_49_rows():
    grid = sweep_grid()
    assert len(grid) == 49
    assert grid[0] == -12.0 and grid[-1] == 0.0


def test_half_step_grid():
    grid = sweep_grid(-12.0, 0.0, 0.5)
    assert len(grid) == 25
    assert grid[1] == -11.5


def test_grid_does_not_overshoot():
    assert sweep_grid(-1.0, 0.0, 0.3) == [-1.0, -0.7, -0.4, -0.1]


@pytest.mark.parametrize("lo, hi, step", [(-1.0, 0.0, 0.0), (0.0, -1.0, 0.1), (-1.0, 0.5, 0.5)])
def test_invalid_grids(lo, hi, step):
    with pytest.raises(ValueError):
        sweep_grid(lo, hi, step)

# =============================================================================
# Onset e curvatura (linhas sintéticas)
# =============================================================================

def _rows(curvature: float, bump: float = 0.0):
    rows = []
    for i, v in enumerate(np.arange(-3.0, 0.01, 0.5)):
        e = math.pi ** 2 / 2 + v
        deficit = 0.2 if v <= -2.5 else 0.0
        tau = 10.0 - e + curvature * e * e + (bump if i == 2 else 0.0)
        rows.append(SweepRow(v0a2=float(v), e_mean=e, tau_bar=tau, deficit=deficit,
                             bound_state=deficit > ACCEPTANCE["bound_state_deficit"]))
    return rows


def test_onset_is_last_row_with_deficit():
    rows = _rows(0.0)
    assert find_deficit_onset(rows) == 1
    assert find_deficit_onset(rows[2:]) is None
    assert upturn_at_onset(rows[2:]) is None


def test_bump_right_of_onset_is_an_upturn():
    report = upturn_at_onset(_rows(0.0, bump=0.5))
    assert report.upturn
    assert report.onset_v0a2 == -2.5
    assert report.checked_v0a2 == -2.0
    assert report.excess == pytest.approx(0.5, rel=1e-9)


@pytest.mark.parametrize("curvature, expected", [(0.5, True), (-0.5, False)])
def test_curvature_sign_decides_upturn(curvature, expected):
    assert upturn_at_onset(_rows(curvature)).upturn is expected


def test_failed_rows_are_skipped_by_onset():
    rows = _rows(0.0)
    rows[1] = SweepRow(v0a2=rows[1].v0a2, e_mean=rows[1].e_mean, status="NonConvergence")
    assert find_deficit_onset(rows) == 0

# =============================================================================
# SweepEngine
# =============================================================================

def test_numerical_failure_is_recorded_in_the_row(monkeypatch):
    def broken(spec, cfg, fd):
        raise NonConvergence("max_panels exhausted", n_panels=3)

    monkeypatch.setattr(sweep_module, "lifetime", broken)
    rows = SweepEngine(threads=2, progress=False).run([-1.0, -3.0])
    assert [r.v0a2 for r in rows] == [-3.0, -1.0]
    assert all(r.status == "NonConvergence" and not r.ok for r in rows)
    assert rows[0].e_mean == pytest.approx(math.pi ** 2 / 2 - 3.0)
    assert rows[0].to_record()["tau_bar"] is None


@pytest.mark.slow
def test_default_sweep_shape():
    rows = SweepEngine(progress=False).run(sweep_grid())
    assert all(r.ok for r in rows)

    for r in rows:
        assert r.e_mean == pytest.approx(math.pi ** 2 / 2 + r.v0a2, rel=1e-12, abs=1e-12)

    right = sorted((r for r in rows if r.deficit <= ACCEPTANCE["right_branch_deficit"]),
                   key=lambda r: r.e_mean)
    assert len(right) >= 5
    taus = np.array([r.tau_bar for r in right])
    assert np.all(np.diff(taus) < 0)

    report = upturn_at_onset(rows)
    assert report is not None and report.upturn
    assert report.checked_v0a2 - report.onset_v0a2 <= 3 * 0.25 + 1e-9

# =============================================================================
# Exportação
# =============================================================================

def test_csv_has_exact_header():
    text = render_csv(_rows(0.0))
    assert text.splitlines()[0] == ",".join(CSV_COLUMNS)
    frame = pd.read_csv(io.StringIO(text))
    assert len(frame) == 7
    assert list(frame["status"].unique()) == ["ok"]


def test_json_replaces_nan_with_null():
    row = SweepRow(v0a2=-1.0, e_mean=3.9, tau_bar=float("nan"))
    payload = json.loads(render_json([row], RunManifest(command="sweep")))
    assert payload["rows"][0]["tau_bar"] is None
    assert payload["manifest"]["command"] == "sweep"


def test_atomic_write_leaves_no_temp_file(tmp_path):
    target = write_rows(tmp_path / "out" / "rows.csv", _rows(0.0))
    assert target.read_text(encoding="utf-8").startswith("v0a2,")
    assert not list(tmp_path.rglob("*.tmp"))
    write_text_atomic(target, "replaced\n")
    assert target.read_text(encoding="utf-8") == "replaced\n"


def test_svg_chart(tmp_path):
    path = write_svg(tmp_path / "curve.svg", _rows(0.5), onset=math.pi ** 2 / 2 - 2.5)
    text = path.read_text(encoding="utf-8")
    assert "<svg" in text
    assert not list(tmp_path.glob("*.tmp"))
