"""
Hierarquia de exceções do calculador de tempos de tunelamento
Falhas numéricas carregam o resultado parcial para diagnóstico
"""
from typing import Optional, Sequence

import numpy as np

# =============================================================================
# 🚨 ÂNCORA: ERROR_TREE - Exceções numéricas do projeto
# Contexto: O CLI converte TunnelingError em exit 1 e ValidationError em exit 2
# Cuidado: Erros de configuração NÃO entram aqui (pydantic já os levanta)
# Dependências: quadcore, moments, oracles, app.py
# =============================================================================


class TunnelingError(Exception):
    """Base de todas as falhas numéricas"""


class QuadratureError(TunnelingError):
    """Falha em uma integral"""


class NonConvergence(QuadratureError):
    """Limite de painéis atingido com erro estimado acima da tolerância"""

    def __init__(self, message: str, value: Optional[complex] = None,
                 error: Optional[float] = None, n_panels: int = 0):
        super().__init__(message)
        self.value = value
        self.error = error
        self.n_panels = n_panels


class PeakUnresolved(NonConvergence):
    """Pico diagonal do caminho regularizado não resolvido com max_panels"""


class TailDominated(QuadratureError):
    """Cauda estimada além do corte grande demais para o resultado"""

    def __init__(self, message: str, tail: float = float("nan"), ratio: float = float("nan")):
        super().__init__(message)
        self.tail = tail
        self.ratio = ratio


class IntegrandNotFinite(QuadratureError):
    """Integrando devolveu NaN ou infinito"""


class DerivativeUnstable(TunnelingError):
    """Sequência de Richardson não contrai"""

    def __init__(self, message: str, k: Sequence[float] = ()):
        super().__init__(message)
        self.k = np.asarray(k, dtype=float)


class NonContracting(TunnelingError):
    """Correções da extrapolação em alpha não diminuem"""

    def __init__(self, message: str, corrections: Sequence[float] = ()):
        super().__init__(message)
        self.corrections = list(corrections)


class InvalidMoment(TunnelingError):
    """Numerador ou denominador não positivo"""
