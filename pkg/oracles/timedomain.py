"""
Oráculo no domínio do tempo: reconstrói dP(t) a partir do pacote não ligado
e integra os momentos com corte explícito em t_max
"""
import logging
import math
from dataclasses import dataclass
from typing import Optional, Tuple, Union

import numpy as np
from scipy.integrate import simpson

from config import ACCEPTANCE
from data.models import PotentialSpec, TimeGridConfig
from numerics.quadcore import exponential_tail_moments
from physics.spectral import big_phi, phase_f, phi, q_of_k
from utils.errors import InvalidMoment, TailDominated

logger = logging.getLogger(__name__)

ArrayLike = Union[float, np.ndarray]

# =============================================================================
# 🚨 ÂNCORA: ENERGY_LATTICE - Rede uniforme em energia E_j = j dE
# Contexto: dE = 2pi/(period_factor * t_max) torna a soma em k periódica no
#           tempo com período period_factor * t_max, e todas as amostras de
#           tempo saem de uma única FFT
# Cuidado: Pesos em k = dE/k_j (trapézio em E) com janela cosseno no topo
# Dependências: psi_u, delta_p_in, decay_curve, delta_p_double_integral
# =============================================================================

@dataclass(frozen=True)
class KGrid:
    """Nós e pesos da integral em k"""
    k: np.ndarray
    weights: np.ndarray
    d_energy: float
    dt: float
    n_fft: int


@dataclass(frozen=True)
class XGrid:
    """Gauss-Legendre em [0, a]"""
    x: np.ndarray
    weights: np.ndarray


def time_axis(spec: PotentialSpec, grid: TimeGridConfig) -> np.ndarray:
    """Amostras de tempo natural em [0, t_max * t0]"""
    return np.linspace(0.0, grid.t_max * spec.t0, grid.n_t)


def build_k_grid(spec: PotentialSpec, grid: TimeGridConfig) -> KGrid:
    t_max = grid.t_max * spec.t0
    dt = t_max / (grid.n_t - 1)
    n_fft = grid.period_factor * (grid.n_t - 1)
    d_energy = 2.0 * math.pi / (n_fft * dt)

    e_max = 0.5 * (grid.k_max / spec.a) ** 2
    n_e = int(math.floor(e_max / d_energy))
    energy = d_energy * np.arange(1, n_e + 1)
    k = np.sqrt(2.0 * energy)

    weights = np.full(n_e, d_energy)
    weights[-1] *= 0.5
    # janela cosseno na fração final da faixa de energia
    if grid.taper_fraction > 0:
        start = (1.0 - grid.taper_fraction) * e_max
        ramp = np.clip((energy - start) / (e_max - start), 0.0, 1.0)
        weights *= np.cos(0.5 * math.pi * ramp) ** 2
    return KGrid(k=k, weights=weights / k, d_energy=d_energy, dt=dt, n_fft=n_fft)


def build_x_grid(spec: PotentialSpec, grid: TimeGridConfig) -> XGrid:
    nodes, weights = np.polynomial.legendre.leggauss(grid.n_x)
    return XGrid(x=0.5 * spec.a * (nodes + 1.0), weights=0.5 * spec.a * weights)

# =============================================================================
# 🚨 ÂNCORA: WAVEPACKET - Psi_u(x,t) e dP(t) por soma direta
# Contexto: Soma direta na rede de energia, sem FFT (referência)
# Cuidado: Custo O(n_x * n_k) por instante
# Dependências: testes, delta_p_in
# =============================================================================

def _amplitudes(spec: PotentialSpec, kgrid: KGrid, x: np.ndarray) -> np.ndarray:
    """c_j(x) = w_j phi(k_j) sin(q_j x), shape (n_x, n_k)"""
    q = q_of_k(kgrid.k, spec)
    return (kgrid.weights * phi(kgrid.k, spec))[None, :] * np.sin(np.outer(x, q))


def psi_u(x: ArrayLike, t: float, spec: PotentialSpec,
          grid: Optional[TimeGridConfig] = None, kgrid: Optional[KGrid] = None) -> np.ndarray:
    """Psi_u(x,t) = int dk phi(k) sin(qx) exp(-i k^2 t/2)"""
    grid = grid or TimeGridConfig()
    kgrid = kgrid or build_k_grid(spec, grid)
    x_arr = np.atleast_1d(np.asarray(x, dtype=float))
    phase = np.exp(-0.5j * kgrid.k ** 2 * t)
    value = _amplitudes(spec, kgrid, x_arr) @ phase
    return value[0] if np.ndim(x) == 0 else value


def delta_p_in(t: float, spec: PotentialSpec, grid: Optional[TimeGridConfig] = None,
               kgrid: Optional[KGrid] = None, xgrid: Optional[XGrid] = None) -> float:
    """dP(t) = int_0^a |Psi_u(x,t)|^2 dx"""
    grid = grid or TimeGridConfig()
    kgrid = kgrid or build_k_grid(spec, grid)
    xgrid = xgrid or build_x_grid(spec, grid)
    amplitude = psi_u(xgrid.x, t, spec, grid, kgrid)
    return float(xgrid.weights @ np.abs(amplitude) ** 2)


def delta_p_double_integral(t: float, spec: PotentialSpec,
                            grid: Optional[TimeGridConfig] = None,
                            kgrid: Optional[KGrid] = None) -> float:
    """
    Re sum_ij w_i w_j Phi(k_i,k_j) cos(f(k_i,k_j) t) na mesma rede em k;
    forma já integrada em x. Memória O(n_k^2), só para redes pequenas.
    """
    grid = grid or TimeGridConfig()
    kgrid = kgrid or build_k_grid(spec, grid)
    k1, k2 = np.meshgrid(kgrid.k, kgrid.k, indexing='ij')
    kernel = big_phi(k1, k2, spec) * np.cos(phase_f(k1, k2, spec) * t)
    return float(kgrid.weights @ kernel @ kgrid.weights)

# =============================================================================
# 🚨 ÂNCORA: FFT_CURVE - Todas as amostras de dP(t) de uma vez
# Contexto: E_j t_m = 2pi j m / n_fft, então Psi(x, t_m) é uma DFT em j
# Cuidado: Coeficientes além de n_fft são dobrados (aliasing exato da soma)
# Dependências: moments_time_domain, CLI oracle --curve
# =============================================================================

def _fold(coefficients: np.ndarray, n_fft: int) -> np.ndarray:
    n = coefficients.shape[-1]
    blocks = -(-n // n_fft)
    padded = np.zeros(coefficients.shape[:-1] + (blocks * n_fft,), dtype=complex)
    padded[..., :n] = coefficients
    return padded.reshape(coefficients.shape[:-1] + (blocks, n_fft)).sum(axis=-2)


def decay_curve(spec: PotentialSpec, grid: Optional[TimeGridConfig] = None
                ) -> Tuple[np.ndarray, np.ndarray]:
    """(t, dP(t)) nas n_t amostras de [0, t_max * t0]"""
    grid = grid or TimeGridConfig()
    kgrid = build_k_grid(spec, grid)
    xgrid = build_x_grid(spec, grid)

    coefficients = _amplitudes(spec, kgrid, xgrid.x)
    # índice de energia j = 1..n_e ocupa a posição j da DFT
    shifted = np.zeros((coefficients.shape[0], coefficients.shape[1] + 1), dtype=complex)
    shifted[:, 1:] = coefficients
    spectrum = np.fft.fft(_fold(shifted, kgrid.n_fft), axis=-1)[:, :grid.n_t]

    dp = xgrid.weights @ np.abs(spectrum) ** 2
    return time_axis(spec, grid), dp

# =============================================================================
# 🚨 ÂNCORA: TIME_MOMENTS - Momentos por Simpson + cauda exponencial
# Contexto: Cauda ajustada nos últimos 10% da janela
# Cuidado: TailDominated se a cauda passa de 5% de algum momento
# Dependências: CLI oracle, testes de equivalência
# =============================================================================

@dataclass
class TimeDomainMoments:
    """Momentos truncados em t_max com cotas de cauda"""
    num: float
    den: float
    first: float
    tail_num: float
    tail_den: float
    tail_bound: float
    rate: float
    delta_p0: float
    t0: float

    @property
    def t2_mean(self) -> float:
        return self.num / self.den

    @property
    def t_bar(self) -> float:
        return math.sqrt(self.t2_mean / 2.0)

    @property
    def tau_bar(self) -> float:
        return self.t_bar / self.t0

    @property
    def t_mean(self) -> float:
        return self.first / self.den

    @property
    def exp_likeness(self) -> float:
        return self.t_bar / self.t_mean


def moments_time_domain(spec: PotentialSpec, grid: Optional[TimeGridConfig] = None,
                        curve: Optional[Tuple[np.ndarray, np.ndarray]] = None) -> TimeDomainMoments:
    """int t^2 dP dt e int dP dt em [0, t_max] com cota de cauda"""
    grid = grid or TimeGridConfig()
    t, dp = curve if curve is not None else decay_curve(spec, grid)

    if np.any(dp < 0):
        raise InvalidMoment(f"negative survival probability at t={t[np.argmax(dp < 0)]:g}")

    den = float(simpson(dp, x=t))
    first = float(simpson(t * dp, x=t))
    num = float(simpson(t * t * dp, x=t))

    window = t >= 0.9 * t[-1]
    tails, rate = exponential_tail_moments(t[window], dp[window])
    tail_den, _, tail_num = tails
    tail_bound = max(tail_num / num, tail_den / den)

    result = TimeDomainMoments(
        num=num, den=den, first=first,
        tail_num=float(tail_num), tail_den=float(tail_den), tail_bound=float(tail_bound),
        rate=rate, delta_p0=float(dp[0]), t0=spec.t0,
    )
    if tail_bound > ACCEPTANCE["oracle_tail_max"]:
        raise TailDominated(
            f"time-domain tail is {tail_bound:.3g} of the moments at t_max={grid.t_max:g} t0",
            tail=max(tail_num, tail_den), ratio=tail_bound,
        )
    logger.info(f"🔬 Oráculo {spec}: tau_bar={result.tau_bar:.6g} cauda={tail_bound:.2e}")
    return result
