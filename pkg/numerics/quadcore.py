"""
Núcleo numérico: quadratura adaptativa Gauss-Kronrod, cauda semi-infinita,
derivada mista por diferenças finitas com extrapolação de Richardson
"""
import logging
import math
from dataclasses import dataclass, replace
from typing import Callable, Optional, Sequence, Tuple, Union

import numpy as np

from data.models import FDConfig, QuadratureConfig
from utils.errors import DerivativeUnstable, IntegrandNotFinite, NonConvergence, TailDominated

logger = logging.getLogger(__name__)

ArrayLike = Union[float, np.ndarray]
Integrand = Callable[[np.ndarray], np.ndarray]

EPS = np.finfo(float).eps

# =============================================================================
# 🚨 ÂNCORA: KRONROD_RULE - Regra de Kronrod 21 pontos com Gauss 10 embutido
# Contexto: Abscissas e pesos da QUADPACK (qk21), simétricos em [-1, 1]
# Cuidado: Exata para polinômios de grau 31; Gauss usa os nós de índice ímpar
# Dependências: integrate_adaptive, testes de exatidão
# =============================================================================

_XGK = np.array([
    0.995657163025808080735527280689003,
    0.973906528517171720077964012084452,
    0.930157491355708226001207180059508,
    0.865063366688984510732096688423493,
    0.780817726586416897063717578345042,
    0.679409568299024406234327365114874,
    0.562757134668604683339000099272694,
    0.433395394129247190799265943165784,
    0.294392862701460198131126603103866,
    0.148874338981631210884826001129720,
    0.000000000000000000000000000000000,
])

_WGK = np.array([
    0.011694638867371874278064396062192,
    0.032558162307964727478818972459390,
    0.054755896574351996031381300244580,
    0.075039674810919952767043140916190,
    0.093125454583697605535065465083366,
    0.109387158802297641899210590325805,
    0.123491976262065851077600525276215,
    0.134709217311473325928054001771707,
    0.142775938577060080797094273138717,
    0.147739104901338491374841515972068,
    0.149445554002916905664936468389821,
])

_WG = np.array([
    0.066671344308688137593568809893332,
    0.149451349150580593145776339657697,
    0.219086362515982043995534934228163,
    0.269266719309996355091226921569469,
    0.295524224714752870173892994651338,
])


def _build_rule() -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    nodes = np.concatenate([-_XGK[:-1], [0.0], _XGK[:-1][::-1]])
    kronrod = np.concatenate([_WGK[:-1], [_WGK[-1]], _WGK[:-1][::-1]])
    gauss = np.zeros(21)
    for i in range(1, 10, 2):
        gauss[i] = gauss[20 - i] = _WG[(i - 1) // 2]
    return nodes, kronrod, gauss


KRONROD_NODES, KRONROD_WEIGHTS, GAUSS_WEIGHTS = _build_rule()

# =============================================================================
# 🚨 ÂNCORA: QUAD_RESULTS - Estruturas de resultado
# Contexto: Guardam painéis aceitos para o ajuste de cauda e diagnóstico
# Cuidado: value/error são escalares para integrando escalar, vetores (m,) se vetorial
# Dependências: moments.py, regularized.py
# =============================================================================

@dataclass
class QuadResult:
    """Resultado de integrate_adaptive"""
    value: ArrayLike
    error: ArrayLike
    l1: ArrayLike
    n_panels: int
    n_evals: int
    edges: np.ndarray          # bordas dos painéis iniciais
    panel_lo: np.ndarray
    panel_hi: np.ndarray
    panel_values: np.ndarray   # (m, n)
    panel_l1: np.ndarray       # (m, n)
    origin: np.ndarray         # painel inicial de cada painel aceito


@dataclass
class SemiInfiniteResult:
    """Integral em [0, inf) = parte truncada + estimativa da cauda"""
    value: ArrayLike
    error: ArrayLike
    truncated: ArrayLike
    tail_estimate: ArrayLike
    tail_bound: ArrayLike
    tail_exponent: ArrayLike
    tail_ratio: ArrayLike
    tail_flag: bool
    upper: float
    quad: QuadResult

    def scaled(self, factor: float) -> "SemiInfiniteResult":
        """Multiplica valores e erros por uma constante"""
        return replace(
            self,
            value=self.value * factor,
            error=self.error * abs(factor),
            truncated=self.truncated * factor,
            tail_estimate=self.tail_estimate * factor,
            tail_bound=self.tail_bound * abs(factor),
        )


@dataclass
class DerivativeResult:
    """Derivada mista na diagonal com diagnóstico de Richardson"""
    value: ArrayLike
    error: ArrayLike
    order: ArrayLike   # log2 da razão entre correções sucessivas
    ratio: ArrayLike   # razão entre correções sucessivas (~4 para estêncil de 2a ordem)


def _squeeze(arr: np.ndarray, vector: bool) -> ArrayLike:
    if vector:
        return arr
    out = arr[0]
    return out.item() if np.ndim(out) == 0 else out

# =============================================================================
# 🚨 ÂNCORA: PANEL_EVAL - Avaliação vetorizada da regra em muitos painéis
# Contexto: Uma única chamada de f por passada, com todos os nós concatenados
# Cuidado: Estimativa de erro com a escala da QUADPACK (200*|K-G|/resasc)^1.5
# Dependências: integrate_adaptive (modos local e global)
# =============================================================================

def _evaluate_panels(f: Integrand, lo: np.ndarray, hi: np.ndarray
                     ) -> Tuple[np.ndarray, np.ndarray, np.ndarray, bool]:
    center = 0.5 * (lo + hi)
    half = 0.5 * (hi - lo)
    x = center[:, None] + half[:, None] * KRONROD_NODES[None, :]

    fx = np.asarray(f(x.ravel()))
    vector = fx.ndim == 2
    if not vector:
        fx = fx[None, :]
    fx = fx.reshape(fx.shape[0], lo.size, 21)

    if not np.all(np.isfinite(fx)):
        bad = x[np.any(~np.isfinite(fx), axis=(0, 2))]
        raise IntegrandNotFinite(f"non-finite integrand near x={bad.ravel()[:3]}")

    resk = fx @ KRONROD_WEIGHTS
    resg = fx @ GAUSS_WEIGHTS
    resabs = np.abs(fx) @ KRONROD_WEIGHTS
    resasc = np.abs(fx - 0.5 * resk[..., None]) @ KRONROD_WEIGHTS

    value = resk * half
    resabs = resabs * half
    resasc = resasc * half
    err = np.abs(resk - resg) * half

    with np.errstate(divide='ignore', invalid='ignore'):
        scaled = resasc * np.minimum(1.0, (200.0 * err / resasc) ** 1.5)
    err = np.where((resasc > 0) & (err > 0), scaled, err)
    err = np.maximum(err, 50.0 * EPS * resabs)
    return value, err, resabs, vector


def _initial_edges(lo: float, hi: float, cfg: QuadratureConfig,
                   breakpoints: Optional[Sequence[float]],
                   half_period: Optional[float]) -> np.ndarray:
    if breakpoints is not None:
        pts = np.asarray(breakpoints, dtype=float)
        pts = pts[(pts > lo) & (pts < hi)]
        edges = np.unique(np.concatenate([[lo], pts, [hi]]))
        # descarta painéis degenerados
        keep = np.concatenate([[True], np.diff(edges) > 1e-13 * max(1.0, abs(hi))])
        edges = edges[keep]
        edges[-1] = hi
        return edges
    if half_period is not None:
        width = cfg.panel_seed * half_period
        n = max(1, int(math.ceil((hi - lo) / width - 1e-9)))
        edges = lo + width * np.arange(n + 1)
        edges[-1] = hi
        return edges
    return np.array([lo, hi], dtype=float)

# =============================================================================
# 🚨 ÂNCORA: ADAPTIVE - Quadratura adaptativa em intervalo finito
# Contexto: Modo local é determinístico (cada painel decide sozinho)
# Cuidado: Modo local garante sum(err) <= rel_tol * int|f|
# Dependências: semi-infinito, moments, regularized, decay moments
# =============================================================================

def integrate_adaptive(f: Integrand, lo: float, hi: float, cfg: QuadratureConfig,
                       breakpoints: Optional[Sequence[float]] = None,
                       half_period: Optional[float] = None,
                       control: str = "local") -> QuadResult:
    """
    Integra f em [lo, hi] com Gauss-Kronrod 21 adaptativo.

    f recebe um array 1D de abscissas e devolve valores reais ou complexos
    com shape (n,) ou (m, n) para integrandos vetoriais. Os painéis iniciais
    vêm de breakpoints, ou de half_period * panel_seed, ou de um único painel.

    control="local": aceita cada painel com err <= max(rel_tol*int|f|, abs_tol*largura).
    control="global": para quando o erro total <= max(rel_tol*|I|, abs_tol).
    """
    if not (math.isfinite(lo) and math.isfinite(hi)) or not lo < hi:
        raise ValueError(f"invalid interval [{lo}, {hi}]")
    if control not in ("local", "global"):
        raise ValueError(f"unknown error control: {control}")

    edges = _initial_edges(lo, hi, cfg, breakpoints, half_period)
    a = edges[:-1].copy()
    b = edges[1:].copy()
    origin = np.arange(a.size)

    if control == "local":
        parts = _run_local(f, a, b, origin, cfg)
    else:
        parts = _run_global(f, a, b, origin, cfg)
    a, b, origin, values, errors, l1, n_evals, vector = parts

    order = np.argsort(a, kind="stable")
    a, b, origin = a[order], b[order], origin[order]
    values, errors, l1 = values[:, order], errors[:, order], l1[:, order]

    return QuadResult(
        value=_squeeze(values.sum(axis=-1), vector),
        error=_squeeze(errors.sum(axis=-1), vector),
        l1=_squeeze(l1.sum(axis=-1), vector),
        n_panels=int(a.size),
        n_evals=n_evals,
        edges=edges,
        panel_lo=a,
        panel_hi=b,
        panel_values=values,
        panel_l1=l1,
        origin=origin,
    )


def _split(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    mid = 0.5 * (a + b)
    if np.any((mid <= a) | (mid >= b)):
        raise NonConvergence(f"panel near x={a[(mid <= a) | (mid >= b)][0]:g} cannot be bisected further")
    return mid


def _run_local(f, a, b, origin, cfg):
    kept = {"a": [], "b": [], "origin": [], "values": [], "errors": [], "l1": []}
    n_total = a.size
    n_evals = 0

    while a.size:
        values, errors, l1, vector = _evaluate_panels(f, a, b)
        n_evals += 21 * a.size
        limit = np.maximum(cfg.rel_tol * l1, cfg.abs_tol * (b - a))
        done = np.all(errors <= limit, axis=0)

        for key, arr in (("a", a), ("b", b), ("origin", origin)):
            kept[key].append(arr[done])
        for key, arr in (("values", values), ("errors", errors), ("l1", l1)):
            kept[key].append(arr[:, done])

        if done.all():
            break

        todo = ~done
        n_total += int(todo.sum())
        if n_total > cfg.max_panels:
            partial = sum(v.sum(axis=-1) for v in kept["values"]) + values[:, todo].sum(axis=-1)
            err = sum(e.sum(axis=-1) for e in kept["errors"]) + errors[:, todo].sum(axis=-1)
            raise NonConvergence(
                f"max_panels={cfg.max_panels} exhausted with {int(todo.sum())} panels above tolerance",
                value=partial, error=err, n_panels=n_total,
            )
        a_r, b_r, o_r = a[todo], b[todo], origin[todo]
        mid = _split(a_r, b_r)
        a = np.concatenate([a_r, mid])
        b = np.concatenate([mid, b_r])
        origin = np.concatenate([o_r, o_r])

    return (
        np.concatenate(kept["a"]),
        np.concatenate(kept["b"]),
        np.concatenate(kept["origin"]),
        np.concatenate(kept["values"], axis=-1),
        np.concatenate(kept["errors"], axis=-1),
        np.concatenate(kept["l1"], axis=-1),
        n_evals,
        vector,
    )


def _run_global(f, a, b, origin, cfg):
    values, errors, l1, vector = _evaluate_panels(f, a, b)
    n_evals = 21 * a.size

    while True:
        total = values.sum(axis=-1)
        target = np.maximum(cfg.rel_tol * np.abs(total), cfg.abs_tol)
        if np.all(errors.sum(axis=-1) <= target):
            break

        # divide os painéis que estouram a cota equidistribuída
        select = np.any(errors > (target / a.size)[:, None], axis=0)
        if not select.any():
            select = np.zeros(a.size, dtype=bool)
            select[np.argmax(np.max(errors / target[:, None], axis=0))] = True
        if a.size + int(select.sum()) > cfg.max_panels:
            raise NonConvergence(
                f"max_panels={cfg.max_panels} exhausted (global error {errors.sum(axis=-1)} > {target})",
                value=total, error=errors.sum(axis=-1), n_panels=a.size,
            )

        a_s, b_s, o_s = a[select], b[select], origin[select]
        mid = _split(a_s, b_s)
        new_a = np.concatenate([a_s, mid])
        new_b = np.concatenate([mid, b_s])
        new_v, new_e, new_l, _ = _evaluate_panels(f, new_a, new_b)
        n_evals += 21 * new_a.size

        keep = ~select
        a = np.concatenate([a[keep], new_a])
        b = np.concatenate([b[keep], new_b])
        origin = np.concatenate([origin[keep], o_s, o_s])
        values = np.concatenate([values[:, keep], new_v], axis=-1)
        errors = np.concatenate([errors[:, keep], new_e], axis=-1)
        l1 = np.concatenate([l1[:, keep], new_l], axis=-1)

    return a, b, origin, values, errors, l1, n_evals, vector

# =============================================================================
# 🚨 ÂNCORA: SEMI_INFINITE - Integral em [0, inf) com modelo de cauda 1/k^p
# Contexto: Ajuste log-log nas médias dos painéis iniciais da última década
# Cuidado: Estimativa com sinal só é somada se a década não troca de sinal
# Dependências: moments.denominator/numerator/sum rules, regularized (externa)
# =============================================================================

def integrate_semi_infinite(f: Integrand, cfg: QuadratureConfig, scale: float = 1.0,
                            control: str = "local") -> SemiInfiniteResult:
    """
    Integra f em [0, k_max/scale] com painéis iniciais de largura
    panel_seed*pi/scale e estima a cauda além do corte.
    """
    upper = cfg.k_max / scale
    quad = integrate_adaptive(f, 0.0, upper, cfg, half_period=math.pi / scale, control=control)

    truncated = np.atleast_1d(np.real(quad.value)).astype(float)
    m = truncated.size
    estimate = np.zeros(m)
    bound = np.zeros(m)
    exponent = np.full(m, np.nan)
    for c in range(m):
        estimate[c], bound[c], exponent[c] = _power_law_tail(quad, c, upper)

    value = truncated + estimate
    error = np.atleast_1d(quad.error) + np.abs(bound - np.abs(estimate))
    with np.errstate(divide='ignore', invalid='ignore'):
        ratio = np.where(value != 0, bound / np.abs(value), np.where(bound > 0, np.inf, 0.0))

    if np.any(ratio > cfg.tail_max):
        worst = int(np.argmax(ratio))
        raise TailDominated(
            f"tail beyond k_max={cfg.k_max:g} is {ratio[worst]:.3g} of the integral "
            f"(limit {cfg.tail_max:g})",
            tail=float(bound[worst]), ratio=float(ratio[worst]),
        )
    flag = bool(np.any(ratio > cfg.tail_tol))
    if flag:
        logger.debug(f"🔬 Cauda relativa {ratio.max():.2e} acima de tail_tol={cfg.tail_tol:g}")

    vector = np.ndim(quad.value) == 1

    def out(arr: np.ndarray) -> ArrayLike:
        return arr if vector else float(arr[0])

    return SemiInfiniteResult(
        value=out(value),
        error=out(error),
        truncated=out(truncated),
        tail_estimate=out(estimate),
        tail_bound=out(bound),
        tail_exponent=out(exponent),
        tail_ratio=out(ratio),
        tail_flag=flag,
        upper=upper,
        quad=quad,
    )


def _fit_power_law(mid: np.ndarray, mean: np.ndarray, upper: float) -> Tuple[float, float]:
    """Ajusta mean ~ C k^-p e devolve (int_upper^inf C k^-p dk, p)"""
    slope, intercept = np.polyfit(np.log(mid), np.log(mean), 1)
    p = -slope
    if p <= 1.0:
        raise TailDominated(f"tail envelope k^-{p:.3g} is not integrable", tail=np.inf, ratio=np.inf)
    log_tail = intercept + (1.0 - p) * math.log(upper) - math.log(p - 1.0)
    return math.exp(min(log_tail, 700.0)), p


def _power_law_tail(quad: QuadResult, component: int, upper: float) -> Tuple[float, float, float]:
    n_init = quad.edges.size - 1
    values = np.bincount(quad.origin, weights=np.real(quad.panel_values[component]), minlength=n_init)
    l1 = np.bincount(quad.origin, weights=quad.panel_l1[component], minlength=n_init)
    width = np.diff(quad.edges)
    mid = 0.5 * (quad.edges[:-1] + quad.edges[1:])

    decade = mid >= upper / 10.0
    envelope = l1[decade] / width[decade]
    positive = envelope > 0
    if positive.sum() < 3:
        return 0.0, 0.0, float("nan")

    bound, p = _fit_power_law(mid[decade][positive], envelope[positive], upper)

    signed = values[decade] / width[decade]
    estimate = 0.0
    if np.all(signed > 0) or np.all(signed < 0):
        try:
            tail, _ = _fit_power_law(mid[decade], np.abs(signed), upper)
            estimate = math.copysign(tail, signed[0])
        except TailDominated:
            estimate = 0.0
    return estimate, bound, p

# =============================================================================
# 🚨 ÂNCORA: EXP_TAIL - Cauda exponencial de amostras no tempo
# Contexto: Ajuste y ~ A e^{-lambda t} e momentos analíticos além de T
# Cuidado: lambda <= 0 significa que a janela não capturou o decaimento
# Dependências: timedomain.moments_time_domain, moments.decay_moments
# =============================================================================

def exponential_tail_moments(t: np.ndarray, y: np.ndarray,
                             orders: Sequence[int] = (0, 1, 2)) -> Tuple[np.ndarray, float]:
    """
    Ajusta y ~ A exp(-lam t) nas amostras dadas e devolve
    (int_T^inf t^n A e^{-lam t} dt para n em orders, lam), T = t[-1].
    """
    t = np.asarray(t, dtype=float)
    y = np.asarray(y, dtype=float)
    if not np.any(y):
        return np.zeros(len(orders)), float("inf")
    positive = y > 0
    if positive.sum() < 3:
        # sinal trocado ou ruído: não há envelope para ajustar
        raise TailDominated(f"only {int(positive.sum())} positive samples in the tail window ending at t={t[-1]:g}",
                            tail=float(np.max(np.abs(y))), ratio=np.inf)

    slope, intercept = np.polyfit(t[positive], np.log(y[positive]), 1)
    lam = -slope
    if lam <= 0:
        raise TailDominated(f"decay envelope not decreasing at t={t[-1]:g} (rate {lam:.3g})",
                            tail=np.inf, ratio=np.inf)

    T = t[-1]
    y_T = math.exp(intercept + slope * T)
    moments = []
    for n in orders:
        # int_T^inf t^n e^{-lam t} dt = e^{-lam T} sum_j n!/j! T^j / lam^{n-j+1}
        total = sum(math.factorial(n) / math.factorial(j) * T ** j / lam ** (n - j + 1)
                    for j in range(n + 1))
        moments.append(y_T * total)
    return np.array(moments), lam

# =============================================================================
# 🚨 ÂNCORA: MIXED_PARTIAL - d2g/dk dk' na diagonal por diferenças finitas
# Contexto: Estêncil cruzado central, ou tensorial para frente perto de k=0
# Cuidado: Passo h = h0*max(kappa,1)/a; correções que crescem => instável
# Dependências: moments.numerator (kernel Psi)
# =============================================================================

_CENTRAL_POWERS = (2, 4, 6, 8, 10)
_FORWARD_POWERS = (2, 3, 4, 5, 6)
_FORWARD_WEIGHTS = np.array([-3.0, 4.0, -1.0]) / 2.0
_SAFE = 2.0


def _central_stencil(g, k: np.ndarray, h: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    kp, km = k + h, k - h
    n = k.size
    vals = np.asarray(g(np.concatenate([kp, kp, km, km]), np.concatenate([kp, km, kp, km])), dtype=float)
    vals = vals.reshape(4, n)
    d = (vals[0] - vals[1] - vals[2] + vals[3]) / (4.0 * h * h)
    return d, np.max(np.abs(vals), axis=0)


def _forward_stencil(g, k: np.ndarray, h: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    n = k.size
    shifts = np.arange(3)
    k1 = (k[None, None, :] + shifts[:, None, None] * h[None, None, :]) * np.ones((3, 3, 1))
    k2 = (k[None, None, :] + shifts[None, :, None] * h[None, None, :]) * np.ones((3, 3, 1))
    vals = np.asarray(g(k1.ravel(), k2.ravel()), dtype=float).reshape(3, 3, n)
    w = np.outer(_FORWARD_WEIGHTS, _FORWARD_WEIGHTS)
    d = np.einsum('ij,ijn->n', w, vals) / (h * h)
    return d, np.max(np.abs(vals), axis=(0, 1))


def _richardson(levels: np.ndarray, powers: Sequence[int]) -> Tuple[np.ndarray, np.ndarray]:
    """Tabela de Richardson com razão de passo 2; levels tem shape (L, n)"""
    n_levels = levels.shape[0]
    table = [levels[j].copy() for j in range(n_levels)]
    previous_diag = table[-1]
    best, err = table[-1], np.abs(table[-1] - table[-2])
    for m in range(1, n_levels):
        factor = 2.0 ** powers[m - 1] - 1.0
        table = [table[j] + (table[j] - table[j - 1]) / factor for j in range(1, len(table))]
        err = np.abs(table[-1] - previous_diag)
        previous_diag = table[-1]
        best = table[-1]
    return best, err


def mixed_partial(g: Callable[[np.ndarray, np.ndarray], np.ndarray], k: ArrayLike,
                  fd: FDConfig, scale: float = 1.0) -> DerivativeResult:
    """Derivada mista d2g/dk dk' em k' = k, vetorizada em k"""
    scalar = np.ndim(k) == 0
    k = np.atleast_1d(np.asarray(k, dtype=float))
    h = fd.h0 * np.maximum(np.abs(k) * scale, 1.0) / scale
    central = k >= 2.0 * h

    value = np.empty_like(k)
    error = np.empty_like(k)
    ratio = np.full_like(k, np.nan)
    unstable = np.zeros(k.size, dtype=bool)

    for mask, stencil, powers in ((central, _central_stencil, _CENTRAL_POWERS),
                                  (~central, _forward_stencil, _FORWARD_POWERS)):
        if not mask.any():
            continue
        km, hm = k[mask], h[mask]
        levels, gmax = [], np.zeros(km.size)
        for j in range(fd.richardson_levels):
            d, gm = stencil(g, km, hm / 2.0 ** j)
            levels.append(d)
            gmax = np.maximum(gmax, gm)
        levels = np.array(levels)
        best, err = _richardson(levels, powers)

        corrections = np.abs(np.diff(levels, axis=0))
        if corrections.shape[0] >= 2:
            h_min = hm / 2.0 ** (fd.richardson_levels - 1)
            noise = 64.0 * EPS * gmax / h_min ** 2
            floor = 1e-8 * np.maximum(np.abs(best), np.max(np.abs(levels), axis=0)) + noise
            growing = (corrections[1:] > _SAFE * corrections[:-1]) & (corrections[1:] > floor)
            unstable[mask] = np.any(growing, axis=0)
            with np.errstate(divide='ignore', invalid='ignore'):
                ratio[mask] = corrections[-2] / corrections[-1]

        value[mask] = best
        error[mask] = err

    if unstable.any():
        raise DerivativeUnstable(
            f"Richardson corrections grow at {int(unstable.sum())} point(s), first k={k[unstable][0]:.6g}",
            k=k[unstable],
        )

    with np.errstate(divide='ignore', invalid='ignore'):
        order = np.log2(ratio)
    if scalar:
        return DerivativeResult(value=value.item(), error=error.item(),
                                order=order.item(), ratio=ratio.item())
    return DerivativeResult(value=value, error=error, order=order, ratio=ratio)

# =============================================================================
# 🚨 ÂNCORA: NEVILLE - Extrapolação polinomial para x -> 0
# Contexto: Tabela de Neville com nós arbitrários (sequência de alphas)
# Cuidado: Diagonal da tabela = extrapolações de grau crescente;
#          fit_to_zero aceita termos x^p ln x, que Neville não representa
# Dependências: regularized.extrapolate_alpha
# =============================================================================

def neville_to_zero(x: Sequence[float], y: Sequence[float]) -> np.ndarray:
    """
    Devolve as extrapolações P_d(0) de grau d = 0..n-1 usando os
    d+1 últimos pontos (os mais próximos de zero)
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    n = x.size
    diagonal = [y[-1]]
    # column[i] = polinômio pelos pontos i..i+m em x = 0
    column = y.copy()
    for m in range(1, n):
        column = np.array([
            (x[i + m] * column[i] - x[i] * column[i + 1]) / (x[i + m] - x[i])
            for i in range(n - m)
        ])
        diagonal.append(column[-1])
    return np.array(diagonal)


def fit_to_zero(x: Sequence[float], y: Sequence[float],
                terms: Sequence[Tuple[float, bool]]) -> np.ndarray:
    """
    Extrapolação para x -> 0 com o modelo y = c0 + sum_j c_j x^p_j (ln x se log_j).

    terms = [(p_j, log_j), ...] em ordem de importância. A estimativa m usa
    c0 e os m primeiros termos, interpolados nos m+1 menores x; devolve
    c0 para m = 0..n-1 como neville_to_zero.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    n = x.size
    if len(terms) < n - 1:
        raise ValueError(f"{n} points need {n - 1} model terms, got {len(terms)}")
    if np.any(x <= 0):
        raise ValueError("extrapolation abscissas must be positive")
    # x/max(x) só troca c_j x^p ln x por combinações com x^p, que já está no modelo
    u = x / x.max()
    log_u = np.log(u)

    diagonal = [y[-1]]
    for m in range(1, n):
        us, ls = u[-(m + 1):], log_u[-(m + 1):]
        columns = [np.ones(m + 1)]
        for p, log in terms[:m]:
            columns.append(us ** p * ls if log else us ** p)
        coeffs = np.linalg.solve(np.column_stack(columns), y[-(m + 1):])
        diagonal.append(coeffs[0])
    return np.array(diagonal)
