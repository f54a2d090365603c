"""
Varredura em v0*a^2: uma linha independente por profundidade do poço
Execução em threads, resultado sempre ordenado por v0a2
"""
import logging
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import List, Optional, Sequence

import numpy as np
from tqdm import tqdm

from config import ACCEPTANCE, SWEEP_DEFAULTS, THREADS
from data.models import FDConfig, PotentialSpec, QuadratureConfig, SweepRow
from physics.moments import lifetime, mean_energy
from utils.errors import TunnelingError

logger = logging.getLogger(__name__)

# =============================================================================
# 🚨 ÂNCORA: SWEEP_GRID - Grade de profundidades
# Contexto: Inclui as duas pontas quando (max - min)/step é inteiro
# Cuidado: Valores arredondados a 12 casas para CSV reprodutível
# Dependências: SweepEngine.run, app.py sweep
# =============================================================================

def sweep_grid(v0a2_min: float = SWEEP_DEFAULTS["v0a2_min"],
               v0a2_max: float = SWEEP_DEFAULTS["v0a2_max"],
               step: float = SWEEP_DEFAULTS["step"]) -> List[float]:
    if not step > 0:
        raise ValueError(f"step must be positive, got {step}")
    if v0a2_min > v0a2_max:
        raise ValueError(f"empty range [{v0a2_min}, {v0a2_max}]")
    if v0a2_max > 0:
        raise ValueError(f"v0a2 must be <= 0, got max {v0a2_max}")
    n = int(np.floor((v0a2_max - v0a2_min) / step + 1e-9))
    values = np.round(v0a2_min + step * np.arange(n + 1), 12) + 0.0
    return values.tolist()

# =============================================================================
# 🚨 ÂNCORA: SWEEP_ENGINE - Linhas em paralelo, falhas registradas na linha
# Contexto: Cada linha é função pura de (v0a2, a, configs)
# Cuidado: Uma falha numérica NÃO interrompe a varredura (status = classe do erro)
# Dependências: app.py sweep, testes de forma da curva
# =============================================================================

class SweepEngine:
    """Executa lifetime() ao longo de uma grade de v0a2"""

    def __init__(self, cfg: Optional[QuadratureConfig] = None, fd: Optional[FDConfig] = None,
                 a: float = 1.0, threads: int = THREADS, progress: bool = True):
        self.cfg = cfg or QuadratureConfig()
        self.fd = fd or FDConfig()
        self.a = a
        self.threads = max(1, int(threads))
        self.progress = progress

    def compute_row(self, v0a2: float) -> SweepRow:
        spec = PotentialSpec.from_v0a2(v0a2, a=self.a)
        start = time.perf_counter()
        try:
            result = lifetime(spec, self.cfg, self.fd)
        except TunnelingError as e:
            logger.warning(f"⚠️  Linha v0a2={v0a2:g} falhou: {type(e).__name__}: {e}")
            return SweepRow(
                v0a2=v0a2,
                e_mean=mean_energy(spec)[1],
                status=type(e).__name__,
                message=str(e),
                wall_time=time.perf_counter() - start,
            )
        return SweepRow.from_result(v0a2, result)

    def run(self, v0a2_values: Sequence[float]) -> List[SweepRow]:
        values = sorted(float(v) for v in v0a2_values)
        logger.info(f"🚀 Varredura de {len(values)} pontos em {self.threads} thread(s)")
        start = time.perf_counter()

        with ThreadPoolExecutor(max_workers=self.threads) as pool:
            rows = list(tqdm(pool.map(self.compute_row, values), total=len(values),
                             desc="sweep", unit="row", disable=not self.progress))

        failed = [r for r in rows if not r.ok]
        logger.info(f"✅ Varredura concluída: {len(rows) - len(failed)} ok, "
                    f"{len(failed)} com falha ({time.perf_counter() - start:.1f}s)")
        upturn = upturn_at_onset(rows)
        if upturn is not None:
            logger.info(f"🔬 Início do déficit em v0a2={upturn.onset_v0a2:g} "
                        f"(<e>={upturn.onset_e:.4f}), curvatura para cima: {upturn.upturn}")
        return rows

# =============================================================================
# 🚨 ÂNCORA: ONSET_ANALYSIS - Início do estado ligado e curvatura de tau_bar
# Contexto: Onset = linha de maior v0a2 com deficit > bound_state_deficit
# Cuidado: Extrapolação linear pelos 3 vizinhos do ramo sem déficit
# Dependências: SweepEngine.run, write_svg, testes de forma
# =============================================================================

def find_deficit_onset(rows: Sequence[SweepRow]) -> Optional[int]:
    """Índice (linhas em ordem crescente de v0a2) do início do déficit"""
    threshold = ACCEPTANCE["bound_state_deficit"]
    for i in range(len(rows) - 1, -1, -1):
        row = rows[i]
        if row.ok and row.deficit is not None and row.deficit > threshold:
            return i
    return None


@dataclass
class UpturnReport:
    onset_index: int
    onset_v0a2: float
    onset_e: float
    checked_v0a2: Optional[float]
    excess: Optional[float]
    upturn: bool


def _linear_excess(rows: Sequence[SweepRow], j: int) -> Optional[float]:
    """tau_bar(j) menos a reta pelos três vizinhos à direita, avaliada em e(j)"""
    neighbors = rows[j + 1:j + 4]
    if len(neighbors) < 3 or not all(r.ok and r.tau_bar is not None for r in neighbors):
        return None
    if not (rows[j].ok and rows[j].tau_bar is not None):
        return None
    slope, intercept = np.polyfit([r.e_mean for r in neighbors], [r.tau_bar for r in neighbors], 1)
    return float(rows[j].tau_bar - (slope * rows[j].e_mean + intercept))


def upturn_at_onset(rows: Sequence[SweepRow], within: int = 3) -> Optional[UpturnReport]:
    """
    Procura, nas `within` linhas à direita do onset, um tau_bar acima da
    reta extrapolada dos três vizinhos seguintes
    """
    onset = find_deficit_onset(rows)
    if onset is None:
        return None
    checked, excess = None, None
    for j in range(onset + 1, min(onset + 1 + within, len(rows))):
        value = _linear_excess(rows, j)
        if value is None:
            continue
        if excess is None or value > excess:
            checked, excess = rows[j].v0a2, value
    return UpturnReport(
        onset_index=onset,
        onset_v0a2=rows[onset].v0a2,
        onset_e=rows[onset].e_mean,
        checked_v0a2=checked,
        excess=excess,
        upturn=excess is not None and excess > 0,
    )
