"""
Física em forma fechada do problema de barreira centrífuga l=1
q(k), f^2(k), phi(k), |c(k)|^2, chi(q,q'), Phi(k,k'), Psi(k,k'), f(k,k')
"""
import math
from dataclasses import dataclass
from typing import Union

import numpy as np

from data.models import PotentialSpec

ArrayLike = Union[float, np.ndarray]

# =============================================================================
# 🚨 ÂNCORA: REMOVABLE_POINTS - Janelas de série para pontos removíveis
# Contexto: sin(alpha)/(pi^2 - alpha^2) em alpha = pi, sin(x)/x em x = 0
# Cuidado: Limiares 1e-4, séries com erro de truncamento ~1e-20
# Dependências: phi, chi
# =============================================================================

PHI_WINDOW = 1e-4
CHI_WINDOW = 1e-4


def _sinc(x: np.ndarray) -> np.ndarray:
    """sin(x)/x com série de 4 termos perto de zero (função par)"""
    x = np.abs(np.asarray(x, dtype=float))
    small = x < CHI_WINDOW
    x2 = x * x
    series = 1.0 - x2 / 6.0 + x2 * x2 / 120.0 - x2 * x2 * x2 / 5040.0
    with np.errstate(divide='ignore', invalid='ignore'):
        direct = np.sin(x) / x
    return np.where(small, series, direct)


def _well_ratio(alpha: np.ndarray) -> np.ndarray:
    """sin(alpha)/(pi^2 - alpha^2), contínua em alpha = pi"""
    d = alpha - math.pi
    near = np.abs(d) < PHI_WINDOW
    # sin(alpha) = -sin(d) e pi^2 - alpha^2 = -d(2pi + d)
    series = (1.0 - d * d / 6.0 + d ** 4 / 120.0) / (2.0 * math.pi + d)
    with np.errstate(divide='ignore', invalid='ignore'):
        direct = np.sin(alpha) / (math.pi ** 2 - alpha * alpha)
    return np.where(near, series, direct)


def _as_output(value: np.ndarray, like: ArrayLike) -> ArrayLike:
    return float(value) if np.ndim(like) == 0 else value

# =============================================================================
# 🚨 ÂNCORA: SPECTRAL_FUNCTIONS - Funções públicas (vetorizadas em k)
# Contexto: Todas aceitam escalar ou array; escalar entra, float sai
# Cuidado: phi e Psi valem 0 em k = 0 por extensão contínua
# Dependências: moments, timedomain, regularized
# =============================================================================

def q_of_k(k: ArrayLike, spec: PotentialSpec) -> ArrayLike:
    """Número de onda dentro do poço: sqrt(k^2 - 2 v0)"""
    k_arr = np.asarray(k, dtype=float)
    return _as_output(np.sqrt(k_arr * k_arr - 2.0 * spec.v0), k)


def _bracket(kappa: np.ndarray, alpha: np.ndarray) -> np.ndarray:
    """
    (1+k^2) a^2 cos^2 a + (1-k^2+k^4) sin^2 a + a sin 2a, com k = kappa, a = alpha,
    somado como (a cos a + sin a - k^2 sin a)^2 + k^2 (a cos a + sin a)^2
    """
    k2 = kappa * kappa
    s, c = np.sin(alpha), np.cos(alpha)
    # a cos a + sin a quase zera perto do limiar do estado ligado
    edge = alpha * c + s
    return (edge - k2 * s) ** 2 + k2 * edge * edge


def f_squared(k: ArrayLike, spec: PotentialSpec) -> ArrayLike:
    """
    Função de normalização dos estados do contínuo (l=1)
    f^2 = bracket / (kappa^2 a^2), estritamente positiva para k > 0
    """
    k_arr = np.asarray(k, dtype=float)
    kappa = k_arr * spec.a
    alpha = np.sqrt(k_arr * k_arr - 2.0 * spec.v0) * spec.a
    with np.errstate(divide='ignore', invalid='ignore'):
        value = _bracket(kappa, alpha) / (kappa * kappa * spec.a * spec.a)
    return _as_output(value, k)


def _envelope(k: ArrayLike, spec: PotentialSpec):
    """(qa, kappa^4/bracket) = (qa, k^2/f^2 em unidades de a)"""
    k_arr = np.asarray(k, dtype=float)
    kappa = k_arr * spec.a
    alpha = np.sqrt(k_arr * k_arr - 2.0 * spec.v0) * spec.a
    bracket = _bracket(kappa, alpha)
    k4 = kappa ** 4
    with np.errstate(divide='ignore', invalid='ignore'):
        envelope = np.where(k4 == 0.0, 0.0, k4 / np.where(bracket == 0.0, 1.0, bracket))
    return alpha, envelope


def phi(k: ArrayLike, spec: PotentialSpec) -> ArrayLike:
    """
    Amplitude espectral do estado inicial sqrt(2/a) sin(pi x/a):
    phi(k) = 2 sqrt(2a) sin(qa)/(pi^2 - (qa)^2) * k^2/f^2(k)

    Escrita como kappa^4/bracket para não dividir por kappa^2 perto de k = 0.
    Par em k.
    """
    alpha, envelope = _envelope(k, spec)
    value = 2.0 * math.sqrt(2.0 * spec.a) * _well_ratio(alpha) * envelope
    return _as_output(value, k)


def overlap_weight(k: ArrayLike, spec: PotentialSpec) -> ArrayLike:
    """
    Peso |c(k)|^2 do estado inicial no contínuo, c(k) = A(k) I(k) com
    A^2 = 2k^2/(pi f^2) e I = sqrt(2a) pi sin(qa)/(pi^2 - (qa)^2).

    phi = A^2 I, então |c|^2 = phi I = (pi/2) phi^2 f^2/k^2 = 4 pi a ratio^2 kappa^4/bracket.
    É este peso que soma 1 - |C_b|^2, não phi^2.
    """
    alpha, envelope = _envelope(k, spec)
    ratio = _well_ratio(alpha)
    value = 4.0 * math.pi * spec.a * ratio * ratio * envelope
    return _as_output(value, k)


def chi(q: ArrayLike, q_prime: ArrayLike, a: float) -> ArrayLike:
    """
    Sobreposição int_0^a sin(qx) sin(q'x) dx.

    Forma fechada [q' cos(q'a) sin(qa) - q cos(qa) sin(q'a)]/(q^2 - q'^2),
    reescrita como (a/2)[sinc((q-q')a) - sinc((q+q')a)], estável perto da diagonal.
    Na diagonal: a/2 - sin(2qa)/(4q).
    """
    q_arr = np.asarray(q, dtype=float)
    qp_arr = np.asarray(q_prime, dtype=float)
    value = _chi_from_parts(q_arr - qp_arr, q_arr + qp_arr, a)
    return float(value) if np.ndim(q) == 0 and np.ndim(q_prime) == 0 else value


def _chi_from_parts(diff: np.ndarray, total: np.ndarray, a: float) -> np.ndarray:
    return 0.5 * a * (_sinc(diff * a) - _sinc(total * a))


def big_phi(k: ArrayLike, k_prime: ArrayLike, spec: PotentialSpec) -> ArrayLike:
    """Phi(k,k') = phi(k) phi(k') chi(q,q'), simétrica bit a bit"""
    k_arr = np.asarray(k, dtype=float)
    kp_arr = np.asarray(k_prime, dtype=float)
    q = np.sqrt(k_arr * k_arr - 2.0 * spec.v0)
    qp = np.sqrt(kp_arr * kp_arr - 2.0 * spec.v0)
    total = q + qp
    # q - q' = (k^2 - k'^2)/(q + q') sem cancelamento
    with np.errstate(divide='ignore', invalid='ignore'):
        diff = np.where(total > 0, (k_arr - kp_arr) * (k_arr + kp_arr) / np.where(total > 0, total, 1.0), 0.0)
    overlap = _chi_from_parts(diff, total, spec.a)
    value = phi(k_arr, spec) * phi(kp_arr, spec) * overlap
    return float(value) if np.ndim(k) == 0 and np.ndim(k_prime) == 0 else value


def psi_kernel(k: ArrayLike, k_prime: ArrayLike, spec: PotentialSpec) -> ArrayLike:
    """Psi(k,k') = Phi(k,k')/(k k'), zero se k ou k' = 0"""
    k_arr = np.asarray(k, dtype=float)
    kp_arr = np.asarray(k_prime, dtype=float)
    prod = k_arr * kp_arr
    with np.errstate(divide='ignore', invalid='ignore'):
        value = np.where(prod == 0.0, 0.0, big_phi(k_arr, kp_arr, spec) / np.where(prod == 0.0, 1.0, prod))
    return float(value) if np.ndim(k) == 0 and np.ndim(k_prime) == 0 else value


def phase_f(k: ArrayLike, k_prime: ArrayLike, spec: PotentialSpec) -> ArrayLike:
    """f(k,k') = ((k'a)^2 - (ka)^2)/t0 = (k'^2 - k^2)/2, fatorada como (k'-k)(k'+k)"""
    k_arr = np.asarray(k, dtype=float)
    kp_arr = np.asarray(k_prime, dtype=float)
    value = (kp_arr - k_arr) * (kp_arr + k_arr) * (spec.a * spec.a / spec.t0)
    return float(value) if np.ndim(k) == 0 and np.ndim(k_prime) == 0 else value


def phase_offset(k: float, offset: ArrayLike, spec: PotentialSpec) -> ArrayLike:
    """
    f(k, k + s) = s (2k + s)/2 a partir do deslocamento s = k' - k.
    Sem o arredondamento de k' = k + s: o pico alpha/(alpha^2 + f^2) tem largura alpha/k
    """
    s = np.asarray(offset, dtype=float)
    value = s * (2.0 * k + s) * (spec.a * spec.a / spec.t0)
    return _as_output(value, offset)

# =============================================================================
# 🚨 ÂNCORA: SPECTRAL_KERNEL - Avaliadores ligados a um PotentialSpec
# Contexto: Conveniência para quem integra várias funções do mesmo potencial
# Cuidado: Imutável, pode ser compartilhado entre threads
# Dependências: moments, oracles
# =============================================================================

@dataclass(frozen=True)
class SpectralKernel:
    """Agrupa q, f^2, phi, chi, Phi, Psi e f(k,k') de um potencial"""
    spec: PotentialSpec

    def q(self, k: ArrayLike) -> ArrayLike:
        return q_of_k(k, self.spec)

    def f2(self, k: ArrayLike) -> ArrayLike:
        return f_squared(k, self.spec)

    def weight(self, k: ArrayLike) -> ArrayLike:
        return overlap_weight(k, self.spec)

    def phi(self, k: ArrayLike) -> ArrayLike:
        return phi(k, self.spec)

    def chi(self, q: ArrayLike, q_prime: ArrayLike) -> ArrayLike:
        return chi(q, q_prime, self.spec.a)

    def big_phi(self, k: ArrayLike, k_prime: ArrayLike) -> ArrayLike:
        return big_phi(k, k_prime, self.spec)

    def psi(self, k: ArrayLike, k_prime: ArrayLike) -> ArrayLike:
        return psi_kernel(k, k_prime, self.spec)

    def phase(self, k: ArrayLike, k_prime: ArrayLike) -> ArrayLike:
        return phase_f(k, k_prime, self.spec)

    def diagonal(self, k: ArrayLike) -> ArrayLike:
        """Phi(k,k) = phi^2 chi(q,q)"""
        return big_phi(k, k, self.spec)
