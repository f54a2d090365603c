"""
Exportação dos resultados: CSV, JSON com manifesto e gráfico SVG
Todos os arquivos são escritos de forma atômica
"""
import json
import logging
import math
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import pandas as pd  # noqa: E402

from data.models import CSV_COLUMNS, RunManifest, SweepRow  # noqa: E402

logger = logging.getLogger(__name__)

# =============================================================================
# 🚨 ÂNCORA: ATOMIC_WRITE - Escrita via arquivo temporário + replace
# Contexto: Uma varredura longa interrompida não deixa CSV pela metade
# Cuidado: O .tmp fica no mesmo diretório (replace não cruza filesystems)
# Dependências: write_rows, write_manifest, write_curve
# =============================================================================

def write_text_atomic(path: Path, text: str) -> Path:
    """Salva texto atomicamente"""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    temp_path = path.with_suffix(path.suffix + ".tmp")
    with open(temp_path, "w", encoding="utf-8", newline="") as f:
        f.write(text)
    # Move atomicamente para evitar corrupção
    temp_path.replace(path)
    return path


def _clean(value: Any) -> Any:
    """NaN/inf viram null no JSON"""
    if isinstance(value, float) and not math.isfinite(value):
        return None
    if isinstance(value, dict):
        return {k: _clean(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_clean(v) for v in value]
    return value

# =============================================================================
# 🚨 ÂNCORA: TABULAR_OUTPUT - CSV e JSON da varredura
# Contexto: Header do CSV é contrato externo (CSV_COLUMNS)
# Cuidado: Mesmo manifesto => mesmos bytes (sem timestamp no CSV)
# Dependências: app.py (sweep, lifetime)
# =============================================================================

def rows_frame(rows: Sequence[SweepRow]) -> pd.DataFrame:
    return pd.DataFrame([row.to_record() for row in rows], columns=CSV_COLUMNS)


def render_csv(rows: Sequence[SweepRow]) -> str:
    return rows_frame(rows).to_csv(index=False, lineterminator="\n")


def render_json(rows: Sequence[SweepRow], manifest: Optional[RunManifest] = None) -> str:
    """{"rows": [...], "manifest": {...}}"""
    payload: Dict[str, Any] = {"rows": [row.to_record() for row in rows]}
    if manifest is not None:
        payload["manifest"] = manifest.model_dump(mode="json")
    return json.dumps(_clean(payload), indent=2) + "\n"


def render_rows(rows: Sequence[SweepRow], fmt: str,
                manifest: Optional[RunManifest] = None) -> str:
    if fmt == "csv":
        return render_csv(rows)
    if fmt == "json":
        return render_json(rows, manifest)
    raise ValueError(f"unknown format: {fmt}")


def write_rows(path: Path, rows: Sequence[SweepRow], fmt: str = "csv",
               manifest: Optional[RunManifest] = None) -> Path:
    out = write_text_atomic(path, render_rows(rows, fmt, manifest))
    logger.info(f"💾 {len(rows)} linhas salvas em {out}")
    return out


def write_manifest(path: Path, manifest: RunManifest) -> Path:
    return write_text_atomic(path, manifest.model_dump_json(indent=2) + "\n")


def write_json(path: Path, payload: Dict[str, Any]) -> Path:
    """Relatórios (validate, oracle) como JSON"""
    return write_text_atomic(path, json.dumps(_clean(payload), indent=2) + "\n")


def write_curve(path: Path, t: Sequence[float], t0: float, delta_p: Sequence[float]) -> Path:
    """Curva de sobrevivência: t, t/t0, dP(t)"""
    frame = pd.DataFrame({"t": list(t), "t_over_t0": [x / t0 for x in t], "delta_p": list(delta_p)})
    return write_text_atomic(path, frame.to_csv(index=False, lineterminator="\n"))

# =============================================================================
# 🚨 ÂNCORA: SVG_CHART - tau_bar x <e> com marcador do início do déficit
# Contexto: Só para inspeção visual, sem peso nos testes numéricos
# Cuidado: Backend Agg (sem display); metadado de data removido
# Dependências: app.py sweep --svg
# =============================================================================

def write_svg(path: Path, rows: Sequence[SweepRow], onset: Optional[float] = None) -> Path:
    """Linha tau_bar x e_mean das linhas ok"""
    good: List[SweepRow] = [r for r in rows if r.ok and r.tau_bar is not None]
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)

    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    ax.plot([r.e_mean for r in good], [r.tau_bar for r in good], "o-", color="tab:blue",
            markersize=3, linewidth=1.2, label=r"$\bar\tau$")
    bound = [r for r in good if r.bound_state]
    if bound:
        ax.plot([r.e_mean for r in bound], [r.tau_bar for r in bound], "o", color="tab:red",
                markersize=3, label="bound state present")
    if onset is not None:
        ax.axvline(onset, linestyle="--", color="gray", linewidth=1.0, label="deficit onset")
    ax.set_xlabel(r"$\langle e \rangle = \langle E \rangle / V_b$")
    ax.set_ylabel(r"$\bar\tau = \bar t / t_0$")
    ax.legend(loc="best", fontsize=8)
    fig.tight_layout()

    temp_path = path.with_suffix(path.suffix + ".tmp")
    fig.savefig(temp_path, format="svg", metadata={"Date": None})
    plt.close(fig)
    temp_path.replace(path)
    logger.info(f"📈 Gráfico salvo em {path}")
    return path
