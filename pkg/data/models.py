"""
Modelos de dados do calculador de tempos de tunelamento
Estruturas principais: PotentialSpec, configs numéricas, MomentResult, SweepRow
"""
import math
import platform
from datetime import datetime, timezone
from typing import Any, Dict, List, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, computed_field, field_validator, model_validator

from config import (
    ACCEPTANCE,
    ALPHA_DEFAULTS,
    ARTIFACT_VERSION,
    FD_DEFAULTS,
    QUADRATURE_DEFAULTS,
    TIME_GRID_DEFAULTS,
)

# =============================================================================
# 🚨 ÂNCORA: POTENTIAL_MODEL - Poço quadrado + barreira centrífuga l=1
# Contexto: Unidades naturais hbar = m = 1, E = k^2/2, t0 = 2a^2
# Cuidado: Só l=1 é suportado (normalização f^2 é específica de l=1)
# Dependências: Toda a física recebe um PotentialSpec
# =============================================================================

class PotentialSpec(BaseModel):
    """
    Potencial: poço de largura a e profundidade v0 <= 0 dentro de [0, a],
    barreira l(l+1)/(2x^2) fora
    """
    model_config = ConfigDict(frozen=True)

    a: float = Field(1.0, gt=0, allow_inf_nan=False, description="Largura do poço")
    v0: float = Field(0.0, le=0, allow_inf_nan=False, description="Profundidade do poço (v0 <= 0)")
    ell: int = Field(1, description="Momento angular (fixo em 1)")

    @field_validator('ell')
    @classmethod
    def only_p_wave(cls, v: int) -> int:
        """Rejeita l != 1"""
        if v != 1:
            raise ValueError(f"only ell=1 is supported, got ell={v}")
        return v

    @computed_field
    @property
    def t0(self) -> float:
        """Unidade natural de tempo 2a^2"""
        return 2.0 * self.a ** 2

    @computed_field
    @property
    def barrier_height(self) -> float:
        """V_b = l(l+1)/(2a^2)"""
        return self.ell * (self.ell + 1) / (2.0 * self.a ** 2)

    @computed_field
    @property
    def v0a2(self) -> float:
        return self.v0 * self.a ** 2

    @classmethod
    def from_v0a2(cls, v0a2: float, a: float = 1.0) -> "PotentialSpec":
        """Cria o potencial a partir do parâmetro adimensional v0*a^2"""
        return cls(a=a, v0=v0a2 / a ** 2)

    def __str__(self) -> str:
        return f"PotentialSpec(a={self.a:g}, v0={self.v0:g}, v0a2={self.v0a2:g})"

# =============================================================================
# 🚨 ÂNCORA: NUMERIC_CONFIGS - Configs imutáveis das rotinas numéricas
# Contexto: frozen=True permite compartilhar entre threads da varredura
# Cuidado: Defaults vêm de config.py, não duplicar números aqui
# Dependências: numerics/quadcore.py, oracles/*
# =============================================================================

class QuadratureConfig(BaseModel):
    """Controle das integrais em k"""
    model_config = ConfigDict(frozen=True)

    k_max: float = Field(QUADRATURE_DEFAULTS["k_max"], gt=0, description="Corte adimensional em kappa = k*a")
    rel_tol: float = Field(QUADRATURE_DEFAULTS["rel_tol"], gt=0, description="Tolerância relativa")
    abs_tol: float = Field(QUADRATURE_DEFAULTS["abs_tol"], gt=0, description="Piso absoluto (por unidade de comprimento no modo local)")
    max_panels: int = Field(QUADRATURE_DEFAULTS["max_panels"], ge=1, description="Limite de subdivisões")
    panel_seed: float = Field(QUADRATURE_DEFAULTS["panel_seed"], gt=0, description="Largura inicial em meio-períodos pi/a")
    tail_tol: float = Field(QUADRATURE_DEFAULTS["tail_tol"], gt=0, description="Cauda relativa que liga a flag")
    tail_max: float = Field(QUADRATURE_DEFAULTS["tail_max"], gt=0, description="Cauda relativa que aborta")


class FDConfig(BaseModel):
    """Diferenças finitas para a derivada mista"""
    model_config = ConfigDict(frozen=True)

    h0: float = Field(FD_DEFAULTS["h0"], gt=0, description="Passo base relativo a max(kappa, 1)")
    richardson_levels: int = Field(FD_DEFAULTS["richardson_levels"], ge=2, description="Número de passos (meio a meio)")


class TimeGridConfig(BaseModel):
    """Grades do oráculo no domínio do tempo"""
    model_config = ConfigDict(frozen=True)

    t_max: float = Field(TIME_GRID_DEFAULTS["t_max"], gt=0, description="Corte em unidades de t0")
    n_t: int = Field(TIME_GRID_DEFAULTS["n_t"], ge=3, description="Amostras em [0, t_max]")
    n_x: int = Field(TIME_GRID_DEFAULTS["n_x"], ge=2, description="Nós de Gauss-Legendre em [0, a]")
    k_max: float = Field(TIME_GRID_DEFAULTS["k_max"], gt=0, description="Corte em kappa da rede de energia")
    period_factor: int = Field(TIME_GRID_DEFAULTS["period_factor"], ge=2, description="Período de recorrência / t_max")
    taper_fraction: float = Field(TIME_GRID_DEFAULTS["taper_fraction"], ge=0, lt=1,
                                  description="Fração final da faixa de energia com janela cosseno")

    def check_against(self, cfg: QuadratureConfig) -> None:
        """Garante rede em k dentro do corte da quadratura"""
        if self.k_max > cfg.k_max:
            raise ValueError(
                f"time grid k_max={self.k_max:g} exceeds quadrature k_max={cfg.k_max:g}"
            )


class AlphaSchedule(BaseModel):
    """Sequência de fatores de convergência para extrapolar alpha -> 0"""
    model_config = ConfigDict(frozen=True)

    alphas: Tuple[float, ...] = Field(ALPHA_DEFAULTS["alphas"], description="Decrescente, > 0")
    order: Optional[int] = Field(None, ge=1, description="Número de termos em alpha além da constante (padrão len-2)")
    power: int = Field(ALPHA_DEFAULTS["power"], ge=1, description="Variável de extrapolação alpha**power")
    scale_by_lifetime: bool = Field(ALPHA_DEFAULTS["scale_by_lifetime"],
                                    description="alphas em unidades de 1/t_bar em vez de 1/t0")

    @field_validator('alphas')
    @classmethod
    def strictly_decreasing(cls, v: Tuple[float, ...]) -> Tuple[float, ...]:
        if len(v) < 3:
            raise ValueError(f"alpha schedule needs at least 3 values, got {len(v)}")
        if any(not math.isfinite(x) or x <= 0 for x in v):
            raise ValueError("alphas must be finite and positive")
        if any(b >= a for a, b in zip(v, v[1:])):
            raise ValueError("alphas must be strictly decreasing")
        return tuple(float(x) for x in v)

    @model_validator(mode='after')
    def order_fits(self) -> "AlphaSchedule":
        if self.order is not None and self.order > len(self.alphas) - 1:
            raise ValueError(f"order {self.order} needs {self.order + 1} alphas")
        return self

    @computed_field
    @property
    def degree(self) -> int:
        """Um alpha fica de fora para a janela deslocada estimar o erro"""
        return self.order if self.order is not None else max(len(self.alphas) - 2, 1)

# =============================================================================
# 🚨 ÂNCORA: MOMENT_RESULT - Resultado completo de um tempo de vida
# Contexto: Momentos em unidades naturais, tau_bar adimensional
# Cuidado: t2_mean, t_bar e tau_bar são derivados, nunca armazenados
# Dependências: physics/moments.py, runner/sweep.py, app.py
# =============================================================================

class MomentResult(BaseModel):
    """
    Momentos de tempo do decaimento
    numerator = int t^2 dP, denominator = int dP (tempo natural)
    """
    spec: PotentialSpec
    numerator: float = Field(..., gt=0, description="int t^2 DeltaP dt")
    denominator: float = Field(..., gt=0, description="int DeltaP dt")
    numerator_error: float = Field(0.0, ge=0)
    denominator_error: float = Field(0.0, ge=0)
    numerator_tail: float = Field(0.0, ge=0, description="Cota da cauda além de k_max")
    denominator_tail: float = Field(0.0, ge=0, description="Cota da cauda além de k_max")
    tail_flag: bool = Field(False, description="Alguma cauda acima de tail_tol")
    energy: float = Field(..., description="<E> em unidades naturais")
    e_mean: float = Field(..., description="<E>/V_b")
    norm: float = Field(..., description="int |c|^2 dk")
    deficit: float = Field(..., ge=0, le=1, description="1 - norm, truncado em [0, 1]")
    deficit_raw: float = Field(..., description="1 - norm antes do truncamento")
    fd_order: float = Field(float("nan"), description="Ordem mediana estimada por Richardson")
    wall_time: float = Field(0.0, ge=0)

    @model_validator(mode='after')
    def deficit_matches_norm(self) -> "MomentResult":
        """deficit = clip(1 - norm) e deficit_raw = 1 - norm"""
        if not math.isclose(self.deficit_raw, 1.0 - self.norm, rel_tol=1e-12, abs_tol=1e-15):
            raise ValueError(f"deficit_raw={self.deficit_raw} inconsistent with norm={self.norm}")
        if self.deficit != min(max(self.deficit_raw, 0.0), 1.0):
            raise ValueError(f"deficit={self.deficit} is not the clipped deficit_raw={self.deficit_raw}")
        return self

    @computed_field
    @property
    def t2_mean(self) -> float:
        return self.numerator / self.denominator

    @computed_field
    @property
    def t_bar(self) -> float:
        """t_bar = <t^2>^{1/2} / sqrt(2)"""
        return math.sqrt(self.t2_mean / 2.0)

    @computed_field
    @property
    def tau_bar(self) -> float:
        return self.t_bar / self.spec.t0

    @computed_field
    @property
    def bound_state(self) -> bool:
        return self.deficit > ACCEPTANCE["bound_state_deficit"]

    @computed_field
    @property
    def t2_rel_error(self) -> float:
        """Erro relativo propagado de <t^2>"""
        return self.numerator_error / self.numerator + self.denominator_error / self.denominator

    def summary(self) -> Dict[str, Any]:
        """Dicionário plano para saída JSON / tabela"""
        return {
            "a": self.spec.a,
            "v0": self.spec.v0,
            "v0a2": self.spec.v0a2,
            "t0": self.spec.t0,
            "tau_bar": self.tau_bar,
            "t_bar": self.t_bar,
            "t2_mean": self.t2_mean,
            "t2_rel_error": self.t2_rel_error,
            "energy": self.energy,
            "e_mean": self.e_mean,
            "norm": self.norm,
            "deficit": self.deficit,
            "deficit_raw": self.deficit_raw,
            "bound_state": self.bound_state,
            "numerator": self.numerator,
            "numerator_error": self.numerator_error,
            "numerator_tail": self.numerator_tail,
            "denominator": self.denominator,
            "denominator_error": self.denominator_error,
            "denominator_tail": self.denominator_tail,
            "tail_flag": self.tail_flag,
            "fd_order": self.fd_order,
        }

    def __str__(self) -> str:
        return (f"tau_bar={self.tau_bar:.6g} t_bar={self.t_bar:.6g} "
                f"<e>={self.e_mean:.4f} deficit={self.deficit:.3g}")

# =============================================================================
# 🚨 ÂNCORA: SWEEP_ROW - Uma linha do CSV da varredura
# Contexto: Ordem das colunas é contrato externo (header exato)
# Cuidado: Linhas com falha mantêm v0a2/e_mean e status = nome do erro
# Dependências: runner/sweep.py, data/exporter.py
# =============================================================================

CSV_COLUMNS: List[str] = [
    "v0a2", "e_mean", "tau_bar", "t2_mean", "t_bar", "deficit",
    "bound_state", "num", "den", "tail_flag", "status",
]


class SweepRow(BaseModel):
    """Registro de uma profundidade da varredura"""
    v0a2: float
    e_mean: float
    tau_bar: Optional[float] = None
    t2_mean: Optional[float] = None
    t_bar: Optional[float] = None
    deficit: Optional[float] = None
    bound_state: Optional[bool] = None
    num: Optional[float] = None
    den: Optional[float] = None
    tail_flag: bool = False
    status: str = "ok"
    message: str = ""
    fd_order: Optional[float] = None
    wall_time: float = 0.0

    @classmethod
    def from_result(cls, v0a2: float, result: MomentResult) -> "SweepRow":
        return cls(
            v0a2=v0a2,
            e_mean=result.e_mean,
            tau_bar=result.tau_bar,
            t2_mean=result.t2_mean,
            t_bar=result.t_bar,
            deficit=result.deficit,
            bound_state=result.bound_state,
            num=result.numerator,
            den=result.denominator,
            tail_flag=result.tail_flag,
            fd_order=result.fd_order,
            wall_time=result.wall_time,
        )

    @computed_field
    @property
    def ok(self) -> bool:
        return self.status == "ok"

    def to_record(self) -> Dict[str, Any]:
        """Somente as colunas do CSV, na ordem do header"""
        return {name: getattr(self, name) for name in CSV_COLUMNS}


class RunManifest(BaseModel):
    """Eco completo da configuração de uma execução"""
    command: str
    spec_range: Dict[str, Any] = Field(default_factory=dict)
    quadrature: QuadratureConfig = Field(default_factory=QuadratureConfig)
    fd: FDConfig = Field(default_factory=FDConfig)
    time_grid: Optional[TimeGridConfig] = None
    alpha_schedule: Optional[AlphaSchedule] = None
    threads: int = 1
    version: str = ARTIFACT_VERSION
    created_at: str = Field(default_factory=lambda: datetime.now(timezone.utc).isoformat(timespec="seconds"))
    python: str = Field(default_factory=platform.python_version)
    numpy: str = Field(default_factory=lambda: np.__version__)
