"""
Caminho regularizado: fator de convergência e^{-alpha t}, tempo integrado
analiticamente, integral dupla em k numérica e extrapolação alpha -> 0
"""
import logging
import math
import time
from dataclasses import asdict, dataclass, field
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from config import ACCEPTANCE, ALPHA_DEFAULTS
from data.models import AlphaSchedule, FDConfig, PotentialSpec, QuadratureConfig
from numerics.quadcore import fit_to_zero, integrate_adaptive, integrate_semi_infinite, neville_to_zero
from physics.moments import lifetime
from physics.spectral import big_phi, phase_offset
from utils.errors import NonContracting, NonConvergence, PeakUnresolved

logger = logging.getLogger(__name__)

KernelFn = Callable[[np.ndarray, float], np.ndarray]

IMAGINARY_TOL = 1e-6

# =============================================================================
# 🚨 ÂNCORA: KERNELS - Transformadas de Laplace analíticas no tempo
# Contexto: int_0^inf e^{-(alpha - i f) t} dt = 1/(alpha - i f)
#           int_0^inf t^2 e^{-(alpha - i f) t} dt = 2/(alpha - i f)^3
# Cuidado: Só as partes reais entram nos momentos; a imaginária é diagnóstico
# Dependências: regularized_moments, imaginary_residual
# =============================================================================

def denominator_kernel(f: np.ndarray, alpha: float) -> np.ndarray:
    """Re 1/(alpha - i f)"""
    return alpha / (alpha * alpha + f * f)


def numerator_kernel(f: np.ndarray, alpha: float) -> np.ndarray:
    """Re 2/(alpha - i f)^3"""
    s = alpha * alpha + f * f
    return 2.0 * alpha * (alpha * alpha - 3.0 * f * f) / (s * s * s)


def imaginary_kernel(f: np.ndarray, alpha: float) -> np.ndarray:
    """Im 1/(alpha - i f)"""
    return f / (alpha * alpha + f * f)

# =============================================================================
# 🚨 ÂNCORA: DIAGONAL_PANELS - Painéis graduados em torno de k' = k
# Contexto: Integral interna no deslocamento s = k' - k; pico de largura
#           w = alpha/max(k, sqrt(alpha)) em s
# Cuidado: Pontos +- w 2^j/4 até meio período pi/a, mais painéis pi/a.
#          Em k' o arredondamento de k + s já borra o pico quando w ~ k eps
# Dependências: _double_integral
# =============================================================================

def _inner_breakpoints(k: float, alphas: Sequence[float], spec: PotentialSpec,
                       upper: float) -> np.ndarray:
    """Bordas em s = k' - k para k' em [0, upper]"""
    half_period = math.pi / spec.a
    points = [np.arange(0.0, upper, half_period) - k, [0.0]]
    for alpha in alphas:
        width = alpha / max(k, math.sqrt(alpha))
        level = 0.25 * width
        while level < half_period:
            points.append([-level, level])
            level *= 2.0
    return np.concatenate(points)


def _tolerances(cfg: QuadratureConfig):
    outer = cfg.model_copy(update={"rel_tol": max(cfg.rel_tol, ALPHA_DEFAULTS["outer_rel_tol"])})
    # piso absoluto por unidade de s: painéis longe do pico somam ~0
    inner = cfg.model_copy(update={"rel_tol": ALPHA_DEFAULTS["inner_rel_tol"]})
    return outer, inner


def _double_integral(spec: PotentialSpec, alphas: Sequence[float],
                     kernels: Sequence[KernelFn], cfg: QuadratureConfig,
                     control: str = "global"):
    """
    int dk int dk' Phi(k,k') K(f(k,k'), alpha) para cada (kernel, alpha),
    componentes ordenados kernel-major
    """
    outer_cfg, inner_cfg = _tolerances(cfg)
    upper = cfg.k_max / spec.a
    alphas = [float(a) for a in alphas]

    def outer(ks: np.ndarray) -> np.ndarray:
        out = np.empty((len(kernels) * len(alphas), ks.size))
        for i, k in enumerate(ks):
            def inner(s: np.ndarray, k=k) -> np.ndarray:
                weight = big_phi(k, k + s, spec)
                f = phase_offset(k, s, spec)
                return np.vstack([weight * kernel(f, alpha) for kernel in kernels for alpha in alphas])

            try:
                res = integrate_adaptive(inner, -k, upper - k, inner_cfg,
                                         breakpoints=_inner_breakpoints(k, alphas, spec, upper))
            except NonConvergence as e:
                raise PeakUnresolved(
                    f"diagonal peak at k={k:.6g} unresolved for alphas={alphas}: {e}",
                    value=e.value, error=e.error, n_panels=e.n_panels,
                ) from e
            out[:, i] = np.real(res.value)
        return out

    return integrate_semi_infinite(outer, outer_cfg, scale=spec.a, control=control)


@dataclass
class RegularizedMoments:
    """D(alpha) e N(alpha) numa sequência de alphas (tempo natural)"""
    alphas: List[float]
    denominator: List[float]
    numerator: List[float]
    denominator_error: List[float]
    numerator_error: List[float]

    def extended(self, other: "RegularizedMoments") -> "RegularizedMoments":
        """Acrescenta alphas menores calculados à parte"""
        if other.alphas and self.alphas and other.alphas[0] >= self.alphas[-1]:
            raise ValueError("extension alphas must be smaller than the current ones")
        return RegularizedMoments(
            alphas=self.alphas + other.alphas,
            denominator=self.denominator + other.denominator,
            numerator=self.numerator + other.numerator,
            denominator_error=self.denominator_error + other.denominator_error,
            numerator_error=self.numerator_error + other.numerator_error,
        )


def regularized_moments(spec: PotentialSpec, alphas: Sequence[float],
                        cfg: Optional[QuadratureConfig] = None) -> RegularizedMoments:
    """Todos os alphas e os dois kernels numa só passada"""
    cfg = cfg or QuadratureConfig()
    if any(a <= 0 for a in alphas):
        raise ValueError("alpha must be positive")
    n = len(alphas)
    result = _double_integral(spec, alphas, (denominator_kernel, numerator_kernel), cfg)
    value = np.atleast_1d(result.value)
    error = np.atleast_1d(result.error)
    return RegularizedMoments(
        alphas=[float(a) for a in alphas],
        denominator=value[:n].tolist(),
        numerator=value[n:].tolist(),
        denominator_error=error[:n].tolist(),
        numerator_error=error[n:].tolist(),
    )


def regularized_denominator(spec: PotentialSpec, alpha: float,
                            cfg: Optional[QuadratureConfig] = None) -> float:
    """D(alpha) = Re int int Phi/(alpha - i f) = int dP e^{-alpha t} dt"""
    if alpha <= 0:
        raise ValueError("alpha must be positive")
    result = _double_integral(spec, [alpha], (denominator_kernel,), cfg or QuadratureConfig())
    return float(np.atleast_1d(result.value)[0])


def regularized_numerator(spec: PotentialSpec, alpha: float,
                          cfg: Optional[QuadratureConfig] = None) -> float:
    """N(alpha) = Re int int Phi 2/(alpha - i f)^3 = int t^2 dP e^{-alpha t} dt"""
    if alpha <= 0:
        raise ValueError("alpha must be positive")
    result = _double_integral(spec, [alpha], (numerator_kernel,), cfg or QuadratureConfig())
    return float(np.atleast_1d(result.value)[0])


def imaginary_residual(spec: PotentialSpec, alpha: float,
                       cfg: Optional[QuadratureConfig] = None) -> float:
    """Im D(alpha), nula pela antissimetria de f sob k <-> k'"""
    if alpha <= 0:
        raise ValueError("alpha must be positive")
    # valor ~0: cauda relativa não faz sentido aqui
    cfg = (cfg or QuadratureConfig()).model_copy(update={"tail_tol": math.inf, "tail_max": math.inf})
    result = _double_integral(spec, [alpha], (imaginary_kernel,), cfg, control="local")
    return float(np.atleast_1d(result.value)[0])

# =============================================================================
# 🚨 ÂNCORA: EXTRAPOLATION - Modelo em alpha até alpha = 0
# Contexto: dP ~ t^-5 na cauda, então int t^n dP e^{-alpha t} tem
#           termos alpha^j e alpha^p ln alpha para p >= 4 - n
# Cuidado: Erro = max(última correção, distância à janela deslocada);
#          correções que mais que dobram => NonContracting
# Dependências: validate_potential, CLI validate
# =============================================================================

@dataclass
class Extrapolation:
    value: float
    error: float
    estimates: List[float]
    corrections: List[float]
    window: Optional[float] = None


def alpha_terms(count: int, power: int = 1, log_from: Optional[int] = None) -> List[Tuple[int, bool]]:
    """(expoente, com ln) dos termos do modelo, o puro antes do logarítmico"""
    terms: List[Tuple[int, bool]] = []
    p = power
    while len(terms) < count:
        terms.append((p, False))
        if log_from is not None and p >= log_from:
            terms.append((p, True))
        p += power
    return terms[:count]


def _diagonal(alphas: Sequence[float], values: Sequence[float], power: int,
              log_from: Optional[int]) -> np.ndarray:
    if log_from is None:
        return neville_to_zero(np.asarray(alphas, dtype=float) ** power, values)
    return fit_to_zero(alphas, values, alpha_terms(len(alphas) - 1, power, log_from))


def extrapolate_alpha(values: Sequence[float], schedule: AlphaSchedule,
                      alphas: Optional[Sequence[float]] = None,
                      log_from: Optional[int] = None) -> Extrapolation:
    """
    Extrapolação para alpha -> 0 com os degree+1 menores alphas.

    log_from=None usa um polinômio em alpha**power; senão o modelo ganha
    alpha^p ln alpha para p >= log_from. Sobrando um alpha maior, o mesmo
    modelo ajustado na janela deslocada entra no erro: o termo omitido
    alpha^p cresce 2^p vezes nela, então a diferença cobre o erro.
    """
    alphas = list(alphas if alphas is not None else schedule.alphas)
    if len(values) != len(alphas):
        raise ValueError(f"{len(values)} values for {len(alphas)} alphas")
    n = schedule.degree + 1
    if n > len(alphas):
        raise ValueError(f"degree {schedule.degree} needs {n} alphas, got {len(alphas)}")

    estimates = _diagonal(alphas[-n:], values[-n:], schedule.power, log_from)
    corrections = np.abs(np.diff(estimates))
    value = float(estimates[-1])
    error = float(corrections[-1]) if corrections.size else float("inf")

    floor = 1e-12 * max(abs(value), float(np.max(np.abs(values))))
    if corrections.size >= 2 and corrections[-1] > 2.0 * corrections[-2] and corrections[-1] > floor:
        raise NonContracting(
            f"alpha extrapolation corrections do not shrink: {corrections.tolist()}",
            corrections=corrections.tolist(),
        )

    window = None
    if len(alphas) > n:
        shifted = _diagonal(alphas[-n - 1:-1], values[-n - 1:-1], schedule.power, log_from)
        window = abs(float(shifted[-1]) - value)
        error = max(error, window)
    return Extrapolation(value=value, error=error, estimates=estimates.tolist(),
                         corrections=corrections.tolist(), window=window)

# =============================================================================
# 🚨 ÂNCORA: VALIDATION - Equivalência entre os dois caminhos
# Contexto: Compara o alpha -> 0 com as quadraturas simples em k
# Cuidado: Limiares 1e-3 (denominador) e 1e-2 (numerador) em config.py;
#          erro de extrapolação alto => mais um alpha, metade do menor
# Dependências: CLI validate, testes de aceitação
# =============================================================================

def physical_alphas(spec: PotentialSpec, schedule: AlphaSchedule, t_bar: float) -> List[float]:
    """alphas em 1/tempo natural"""
    unit = t_bar if schedule.scale_by_lifetime else spec.t0
    return [a / unit for a in schedule.alphas]


@dataclass
class ValidationReport:
    """Relatório de um potencial; serializável em JSON"""
    v0a2: float
    a: float
    alphas: List[float]
    d_alpha: List[float]
    n_alpha: List[float]
    d_single: float
    n_single: float
    d_extrapolated: float
    n_extrapolated: float
    d_error: float
    n_error: float
    d_rel_diff: float
    n_rel_diff: float
    d_monotone: bool
    n_monotone: bool
    imaginary_ratio: Optional[float]
    d_pass: bool
    n_pass: bool
    wall_time: float
    extensions: int = 0
    messages: List[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.d_pass and self.n_pass

    def to_dict(self) -> Dict:
        out = asdict(self)
        out["status"] = "PASS" if self.passed else "FAIL"
        return out


def _extrapolate(moments: RegularizedMoments, schedule: AlphaSchedule) -> Tuple[Extrapolation, Extrapolation]:
    d_ext = extrapolate_alpha(moments.denominator, schedule, moments.alphas,
                              log_from=ALPHA_DEFAULTS["denominator_log_from"])
    n_ext = extrapolate_alpha(moments.numerator, schedule, moments.alphas,
                              log_from=ALPHA_DEFAULTS["numerator_log_from"])
    return d_ext, n_ext


def _needs_extension(ext: Extrapolation, reference: float, tol: float) -> bool:
    return ext.error > ALPHA_DEFAULTS["extension_fraction"] * tol * abs(reference)


def validate_potential(spec: PotentialSpec, schedule: Optional[AlphaSchedule] = None,
                       cfg: Optional[QuadratureConfig] = None, fd: Optional[FDConfig] = None,
                       check_imaginary: bool = False) -> ValidationReport:
    """Roda os dois caminhos para um potencial e compara"""
    schedule = schedule or AlphaSchedule()
    cfg = cfg or QuadratureConfig()
    start = time.perf_counter()

    single = lifetime(spec, cfg, fd)
    alphas = physical_alphas(spec, schedule, single.t_bar)
    logger.info(f"🔬 Validação {spec}: alphas={['%.4g' % a for a in alphas]}")
    moments = regularized_moments(spec, alphas, cfg)
    d_ext, n_ext = _extrapolate(moments, schedule)

    extensions = 0
    while extensions < ALPHA_DEFAULTS["max_extensions"] and (
            _needs_extension(d_ext, single.denominator, ACCEPTANCE["denominator_rel"])
            or _needs_extension(n_ext, single.numerator, ACCEPTANCE["numerator_rel"])):
        extra = moments.alphas[-1] / 2.0
        logger.debug(f"🔬 Erro de extrapolação alto (D {d_ext.error:.2e}, N {n_ext.error:.2e}), alpha={extra:.4g}")
        moments = moments.extended(regularized_moments(spec, [extra], cfg))
        d_ext, n_ext = _extrapolate(moments, schedule)
        extensions += 1

    d_rel = abs(d_ext.value / single.denominator - 1.0)
    n_rel = abs(n_ext.value / single.numerator - 1.0)

    messages = []
    d_monotone = bool(np.all(np.diff(moments.denominator) > 0)
                      and moments.denominator[-1] < single.denominator * (1.0 + ACCEPTANCE["denominator_rel"]))
    n_monotone = bool(np.all(np.diff(moments.numerator) > 0))
    if not d_monotone:
        messages.append("D(alpha) not increasing toward the undamped value")
    if not n_monotone:
        messages.append("N(alpha) not increasing as alpha decreases")

    imaginary_ratio = None
    if check_imaginary:
        imag = imaginary_residual(spec, moments.alphas[0], cfg)
        imaginary_ratio = abs(imag) / moments.denominator[0]
        if imaginary_ratio > IMAGINARY_TOL:
            logger.warning(f"⚠️  Parte imaginária relativa {imaginary_ratio:.2e} em {spec}")
            messages.append(f"imaginary residual {imaginary_ratio:.2e}")

    report = ValidationReport(
        v0a2=spec.v0a2,
        a=spec.a,
        alphas=moments.alphas,
        d_alpha=moments.denominator,
        n_alpha=moments.numerator,
        d_single=single.denominator,
        n_single=single.numerator,
        d_extrapolated=d_ext.value,
        n_extrapolated=n_ext.value,
        d_error=d_ext.error,
        n_error=n_ext.error,
        d_rel_diff=d_rel,
        n_rel_diff=n_rel,
        d_monotone=d_monotone,
        n_monotone=n_monotone,
        imaginary_ratio=imaginary_ratio,
        d_pass=d_rel < ACCEPTANCE["denominator_rel"],
        n_pass=n_rel < ACCEPTANCE["numerator_rel"],
        wall_time=time.perf_counter() - start,
        extensions=extensions,
        messages=messages,
    )
    status = "✅ PASS" if report.passed else "❌ FAIL"
    logger.info(f"{status} {spec}: dD={d_rel:.2e} dN={n_rel:.2e} ({report.wall_time:.1f}s)")
    return report
