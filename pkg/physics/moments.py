"""
Momentos de tempo do decaimento como quadraturas simples em k
Numerador, denominador, tempo de vida, energia média e déficit de completeza
"""
import logging
import math
import time
from dataclasses import dataclass
from typing import Callable, Optional, Tuple

import numpy as np

from config import ACCEPTANCE
from data.models import FDConfig, MomentResult, PotentialSpec, QuadratureConfig
from numerics.quadcore import (
    SemiInfiniteResult,
    exponential_tail_moments,
    integrate_adaptive,
    integrate_semi_infinite,
    mixed_partial,
)
from physics.spectral import big_phi, overlap_weight, psi_kernel
from utils.errors import InvalidMoment, TunnelingError

logger = logging.getLogger(__name__)

# =============================================================================
# 🚨 ÂNCORA: MOMENT_INTEGRALS - int dP dt e int t^2 dP dt
# Contexto: Tempo natural (hbar = m = 1); fatores t0/2a^2 se cancelam
# Cuidado: Integrandos valem 0 em k = 0 (envelope k^7 e k^5)
# Dependências: lifetime, regularized (comparação), app.py
# =============================================================================

def _safe_over_k(values: np.ndarray, k: np.ndarray) -> np.ndarray:
    with np.errstate(divide='ignore', invalid='ignore'):
        return np.where(k > 0, values / np.where(k > 0, k, 1.0), 0.0)


def denominator(spec: PotentialSpec, cfg: QuadratureConfig) -> SemiInfiniteResult:
    """int_0^inf dP dt = pi int_0^inf Phi(k,k)/k dk"""
    def integrand(k: np.ndarray) -> np.ndarray:
        return _safe_over_k(big_phi(k, k, spec), k)

    return integrate_semi_infinite(integrand, cfg, scale=spec.a).scaled(math.pi)


def numerator(spec: PotentialSpec, cfg: QuadratureConfig, fd: FDConfig) -> SemiInfiniteResult:
    """int_0^inf t^2 dP dt = pi int_0^inf (1/k) d2Psi/dk dk' |_{k'=k} dk"""
    def kernel(k1: np.ndarray, k2: np.ndarray) -> np.ndarray:
        return psi_kernel(k1, k2, spec)

    def integrand(k: np.ndarray) -> np.ndarray:
        return _safe_over_k(mixed_partial(kernel, k, fd, scale=spec.a).value, k)

    return integrate_semi_infinite(integrand, cfg, scale=spec.a).scaled(math.pi)


def fd_order_estimate(spec: PotentialSpec, fd: FDConfig, n: int = 16) -> float:
    """Ordem mediana de Richardson em kappa entre 0.5 e 10 (esperado ~2)"""
    k = np.linspace(0.5, 10.0, n) / spec.a
    result = mixed_partial(lambda k1, k2: psi_kernel(k1, k2, spec), k, fd, scale=spec.a)
    orders = np.asarray(result.order)
    orders = orders[np.isfinite(orders)]
    return float(np.median(orders)) if orders.size else float("nan")

# =============================================================================
# 🚨 ÂNCORA: SUM_RULES - Completeza e regra de soma da energia
# Contexto: Peso |c(k)|^2 = phi I; sem estado ligado int |c|^2 = 1 e int |c|^2 k^2/2 = <E>
# Cuidado: phi^2 NÃO é o peso espectral; com estado ligado 1 - int |c|^2 = |C_b|^2
# Dependências: completeness_deficit, lifetime, testes de aceitação
# =============================================================================

@dataclass
class DeficitResult:
    """1 - int |c|^2 dk, truncado em [0, 1]"""
    deficit: float
    raw: float
    norm: float
    error: float
    tail_flag: bool


def mean_energy(spec: PotentialSpec) -> Tuple[float, float]:
    """(<E>, <e> = <E>/V_b) do modo sin(pi x/a) no poço"""
    energy = math.pi ** 2 / (2.0 * spec.a ** 2) + spec.v0
    return energy, energy / spec.barrier_height


def completeness_norm(spec: PotentialSpec, cfg: QuadratureConfig) -> SemiInfiniteResult:
    """int_0^inf |c(k)|^2 dk"""
    return integrate_semi_infinite(lambda k: overlap_weight(k, spec), cfg, scale=spec.a)


def energy_sum_rule(spec: PotentialSpec, cfg: QuadratureConfig) -> SemiInfiniteResult:
    """int_0^inf |c(k)|^2 k^2/2 dk, igual a <E> quando não há estado ligado"""
    return integrate_semi_infinite(lambda k: 0.5 * k * k * overlap_weight(k, spec), cfg, scale=spec.a)


def completeness_deficit(spec: PotentialSpec, cfg: QuadratureConfig) -> DeficitResult:
    norm = completeness_norm(spec, cfg)
    raw = 1.0 - norm.value
    if raw < -100.0 * max(norm.error, cfg.rel_tol):
        logger.warning(f"⚠️  Norma espectral {norm.value:.12f} acima de 1 para {spec}")
    return DeficitResult(
        deficit=min(max(raw, 0.0), 1.0),
        raw=raw,
        norm=norm.value,
        error=norm.error,
        tail_flag=norm.tail_flag,
    )

# =============================================================================
# 🚨 ÂNCORA: LIFETIME - Montagem do MomentResult
# Contexto: <t^2> = N/D, t_bar = sqrt(<t^2>/2), tau_bar = t_bar/t0
# Cuidado: Qualquer falha aborta com o potencial no log
# Dependências: runner/sweep.py, app.py
# =============================================================================

def lifetime(spec: PotentialSpec, cfg: Optional[QuadratureConfig] = None,
             fd: Optional[FDConfig] = None) -> MomentResult:
    """Tempo de vida rms pelo caminho de quadratura simples"""
    cfg = cfg or QuadratureConfig()
    fd = fd or FDConfig()
    start = time.perf_counter()

    try:
        den = denominator(spec, cfg)
        num = numerator(spec, cfg, fd)
        deficit = completeness_deficit(spec, cfg)
        order = fd_order_estimate(spec, fd)
    except TunnelingError as e:
        logger.error(f"❌ Erro no tempo de vida para {spec}: {type(e).__name__}: {e}")
        raise

    if not num.value > 0 or not den.value > 0:
        raise InvalidMoment(f"non-positive moment for {spec}: num={num.value:g}, den={den.value:g}")

    energy, e_mean = mean_energy(spec)
    result = MomentResult(
        spec=spec,
        numerator=num.value,
        denominator=den.value,
        numerator_error=num.error,
        denominator_error=den.error,
        numerator_tail=num.tail_bound,
        denominator_tail=den.tail_bound,
        tail_flag=num.tail_flag or den.tail_flag,
        energy=energy,
        e_mean=e_mean,
        norm=deficit.norm,
        deficit=deficit.deficit,
        deficit_raw=deficit.raw,
        fd_order=order,
        wall_time=time.perf_counter() - start,
    )
    logger.info(f"✅ {spec}: {result} ({result.wall_time:.2f}s)")
    return result

# =============================================================================
# 🚨 ÂNCORA: DECAY_MOMENTS - Avaliador genérico para um dP(t) qualquer
# Contexto: Quadratura direta no tempo + cauda exponencial além de t_max
# Cuidado: t_max deve cobrir várias vidas médias do componente mais lento
# Dependências: testes sintéticos, comparação com o oráculo
# =============================================================================

@dataclass
class DecayMoments:
    """Momentos 0, 1 e 2 de um dP(t)"""
    m0: float
    m1: float
    m2: float
    tail: np.ndarray
    rate: float

    @property
    def t2_mean(self) -> float:
        return self.m2 / self.m0

    @property
    def t_bar(self) -> float:
        return math.sqrt(self.t2_mean / 2.0)

    @property
    def t_mean(self) -> float:
        return self.m1 / self.m0

    @property
    def exp_likeness(self) -> float:
        """t_bar/<t>, igual a 1 para decaimento exponencial puro"""
        return self.t_bar / self.t_mean


def decay_moments(delta_p: Callable[[np.ndarray], np.ndarray], t_max: float,
                  cfg: Optional[QuadratureConfig] = None, n_panels: int = 64) -> DecayMoments:
    """Momentos de um dP(t) fornecido pelo chamador"""
    cfg = cfg or QuadratureConfig()

    def integrand(t: np.ndarray) -> np.ndarray:
        dp = np.asarray(delta_p(t), dtype=float)
        return np.vstack([dp, t * dp, t * t * dp])

    quad = integrate_adaptive(integrand, 0.0, t_max, cfg,
                              breakpoints=np.linspace(0.0, t_max, n_panels + 1))
    t_tail = np.linspace(0.9 * t_max, t_max, 64)
    tail, rate = exponential_tail_moments(t_tail, delta_p(t_tail))
    m0, m1, m2 = np.real(quad.value) + tail
    return DecayMoments(m0=float(m0), m1=float(m1), m2=float(m2), tail=tail, rate=rate)
