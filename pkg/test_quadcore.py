"""
Testes do núcleo numérico: Gauss-Kronrod, semi-infinito, derivada mista, Neville
"""
import math

import hypothesis as hyp
import hypothesis.strategies as st
import numpy as np
import pytest
from scipy.integrate import simpson

from data.models import FDConfig, PotentialSpec, QuadratureConfig
from numerics.quadcore import (
    GAUSS_WEIGHTS,
    KRONROD_NODES,
    KRONROD_WEIGHTS,
    exponential_tail_moments,
    fit_to_zero,
    integrate_adaptive,
    integrate_semi_infinite,
    mixed_partial,
    neville_to_zero,
)
from physics.spectral import big_phi, psi_kernel
from utils.errors import DerivativeUnstable, IntegrandNotFinite, NonConvergence, TailDominated

TIGHT = QuadratureConfig(rel_tol=1e-12)

# =============================================================================
# Regra de Kronrod
# =============================================================================

@pytest.mark.parametrize("degree", [0, 2, 10, 20, 30])
def test_kronrod_rule_is_exact_up_to_degree_30(degree):
    np.testing.assert_allclose(KRONROD_WEIGHTS @ KRONROD_NODES ** degree, 2.0 / (degree + 1), rtol=1e-13)


@pytest.mark.parametrize("degree", [0, 6, 18])
def test_embedded_gauss_rule_is_exact_up_to_degree_19(degree):
    np.testing.assert_allclose(GAUSS_WEIGHTS @ KRONROD_NODES ** degree, 2.0 / (degree + 1), rtol=1e-13)


def test_odd_moments_vanish():
    assert abs(KRONROD_WEIGHTS @ KRONROD_NODES ** 7) < 1e-16

# =============================================================================
# integrate_adaptive
# =============================================================================

def test_constant_integrand():
    res = integrate_adaptive(lambda x: np.ones_like(x), 0.0, 1.0, TIGHT)
    np.testing.assert_allclose(res.value, 1.0, rtol=1e-14)
    assert res.n_panels == 1


def test_sine_over_half_period():
    res = integrate_adaptive(np.sin, 0.0, math.pi, TIGHT)
    np.testing.assert_allclose(res.value, 2.0, rtol=1e-12)
    assert res.error <= 1e-12 * res.l1


def test_oscillatory_integrand_against_composite_simpson():
    def f(x):
        return np.sin(x) ** 2 / (1.0 + x * x)

    upper = 40.0 * math.pi
    res = integrate_adaptive(f, 0.0, upper, TIGHT, half_period=math.pi / 2)
    x = np.linspace(0.0, upper, 2_000_001)
    reference = simpson(f(x), x=x)
    assert abs(res.value - reference) < 1e-10


@pytest.mark.parametrize("control", ["local", "global"])
def test_vector_and_complex_integrands(control):
    res = integrate_adaptive(lambda x: np.vstack([x, x * x]), 0.0, 1.0, TIGHT, control=control)
    np.testing.assert_allclose(res.value, [0.5, 1.0 / 3.0], rtol=1e-13)

    res = integrate_adaptive(lambda x: np.exp(1j * x), 0.0, math.pi, TIGHT, control=control)
    np.testing.assert_allclose(res.value, 2j, atol=1e-12)


def test_global_control_meets_relative_target():
    cfg = QuadratureConfig(rel_tol=1e-10)
    res = integrate_adaptive(lambda x: 1.0 / (1e-2 + x * x), -1.0, 1.0, cfg, control="global")
    exact = 2.0 / 0.1 * math.atan(10.0)
    np.testing.assert_allclose(res.value, exact, rtol=1e-9)
    assert res.error <= 1e-10 * abs(res.value)


def test_max_panels_exhausted_raises_with_partial_value():
    cfg = QuadratureConfig(rel_tol=1e-12, max_panels=1)
    with pytest.raises(NonConvergence) as info:
        integrate_adaptive(lambda x: np.sqrt(np.abs(x - 0.3)), 0.0, 1.0, cfg)
    assert info.value.value is not None
    assert info.value.n_panels > 1


def test_non_finite_integrand_is_rejected():
    with pytest.raises(IntegrandNotFinite):
        integrate_adaptive(lambda x: np.full_like(x, np.nan), 0.0, 1.0, TIGHT)


def test_invalid_interval():
    with pytest.raises(ValueError):
        integrate_adaptive(np.sin, 1.0, 0.0, TIGHT)


@hyp.settings(max_examples=25, deadline=None)
@hyp.given(
    c1=st.floats(0.1, 20.0),
    c2=st.floats(-3.0, 3.0),
    alpha=st.floats(-2.0, 2.0),
    beta=st.floats(-2.0, 2.0),
)
def test_integration_is_linear(c1, c2, alpha, beta):
    cfg = QuadratureConfig(rel_tol=1e-11)

    def f(x):
        return np.sin(c1 * x)

    def g(x):
        return np.exp(c2 * x)

    rf = integrate_adaptive(f, 0.0, 2.0, cfg)
    rg = integrate_adaptive(g, 0.0, 2.0, cfg)
    combined = integrate_adaptive(lambda x: alpha * f(x) + beta * g(x), 0.0, 2.0, cfg)
    tolerance = 1e-9 * (abs(alpha) * rf.l1 + abs(beta) * rg.l1) + 1e-13
    assert abs(combined.value - (alpha * rf.value + beta * rg.value)) <= tolerance


def test_error_estimate_does_not_grow_when_tolerance_is_halved():
    def runge(x):
        return 1.0 / (1.0 + 25.0 * x * x)

    errors = [integrate_adaptive(runge, -1.0, 1.0, QuadratureConfig(rel_tol=1e-6 / 2 ** j)).error
              for j in range(8)]
    assert all(b <= a for a, b in zip(errors, errors[1:]))

# =============================================================================
# integrate_semi_infinite
# =============================================================================

def test_exponential_on_half_line():
    res = integrate_semi_infinite(lambda x: np.exp(-x), QuadratureConfig())
    np.testing.assert_allclose(res.value, 1.0, rtol=1e-9)
    assert not res.tail_flag


def test_lorentzian_tail_is_estimated():
    res = integrate_semi_infinite(lambda x: 1.0 / (1.0 + x * x), QuadratureConfig())
    np.testing.assert_allclose(res.value, math.pi / 2, rtol=1e-4)
    # sem a cauda o erro seria ~1/k_max
    assert abs(res.truncated - math.pi / 2) > 5e-3
    assert res.tail_flag
    np.testing.assert_allclose(res.tail_exponent, 2.0, atol=0.05)


def test_heavy_tail_is_dominated():
    with pytest.raises(TailDominated):
        integrate_semi_infinite(lambda x: 1.0 / np.sqrt(1.0 + x), QuadratureConfig())


def test_doubling_cutoff_keeps_denominator_integrand_stable(free_spec):
    def integrand(k):
        return big_phi(k, k, free_spec) / k

    base = integrate_semi_infinite(integrand, QuadratureConfig())
    doubled = integrate_semi_infinite(integrand, QuadratureConfig(k_max=80 * math.pi))
    assert abs(doubled.value / base.value - 1.0) < 1e-9

# =============================================================================
# Cauda exponencial
# =============================================================================

def test_exponential_tail_moments_closed_form():
    t = np.linspace(5.0, 6.0, 50)
    lam, amp = 1.5, 2.0
    moments, rate = exponential_tail_moments(t, amp * np.exp(-lam * t))
    y_t = amp * math.exp(-lam * 6.0)
    expected = [
        y_t / lam,
        y_t * (6.0 / lam + 1.0 / lam ** 2),
        y_t * (36.0 / lam + 12.0 / lam ** 2 + 2.0 / lam ** 3),
    ]
    np.testing.assert_allclose(rate, lam, rtol=1e-10)
    np.testing.assert_allclose(moments, expected, rtol=1e-9)


def test_growing_samples_raise_tail_dominated():
    t = np.linspace(0.0, 1.0, 20)
    with pytest.raises(TailDominated):
        exponential_tail_moments(t, np.exp(0.5 * t))


def test_tail_without_positive_samples_raises():
    t = np.linspace(0.0, 1.0, 20)
    y = -np.exp(-t)
    y[:2] = 1e-3
    with pytest.raises(TailDominated, match="2 positive samples"):
        exponential_tail_moments(t, y)


def test_identically_zero_tail_is_zero():
    moments, rate = exponential_tail_moments(np.linspace(0.0, 1.0, 8), np.zeros(8))
    np.testing.assert_array_equal(moments, [0.0, 0.0, 0.0])
    assert rate == math.inf

# =============================================================================
# mixed_partial
# =============================================================================

@pytest.mark.parametrize("k", [0.0, 0.7, 2.0, 15.0])
def test_bilinear_cross_derivative_is_one(k):
    res = mixed_partial(lambda k1, k2: k1 * k2, k, FDConfig())
    np.testing.assert_allclose(res.value, 1.0, rtol=1e-6)


def test_sine_product_cross_derivative():
    fd = FDConfig(h0=1e-2)
    res = mixed_partial(lambda k1, k2: np.sin(k1) * np.sin(k2), 0.7, fd)
    assert abs(res.value - math.cos(0.7) ** 2) < 1e-10


def test_forward_stencil_near_origin():
    res = mixed_partial(lambda k1, k2: np.sin(k1) * np.sin(k2), np.array([0.0, 1e-3]), FDConfig(h0=1e-2))
    np.testing.assert_allclose(res.value, np.cos([0.0, 1e-3]) ** 2, rtol=1e-6)


def test_richardson_ratio_matches_second_order_stencil():
    res = mixed_partial(lambda k1, k2: np.sin(k1) * np.sin(k2), 0.7, FDConfig(h0=1e-2))
    assert 2.0 < res.ratio < 8.0
    assert abs(res.order - 2.0) < 0.5


def test_psi_kernel_derivative_is_step_robust():
    spec = PotentialSpec.from_v0a2(-4.0)

    def kernel(k1, k2):
        return psi_kernel(k1, k2, spec)

    coarse = mixed_partial(kernel, 2.0, FDConfig(h0=1e-2), scale=spec.a)
    fine = mixed_partial(kernel, 2.0, FDConfig(h0=1e-3), scale=spec.a)
    assert abs(coarse.value / fine.value - 1.0) < 1e-7


def test_cusp_makes_richardson_unstable():
    with pytest.raises(DerivativeUnstable) as info:
        mixed_partial(lambda k1, k2: np.sqrt(np.abs(k1 - k2)), 1.0, FDConfig())
    np.testing.assert_allclose(info.value.k, [1.0])

# =============================================================================
# Neville
# =============================================================================

def test_neville_recovers_polynomial_at_zero():
    x = np.array([0.2, 0.1, 0.05])
    y = 3.0 + 2.0 * x + x * x
    diagonal = neville_to_zero(x, y)
    assert diagonal[0] == y[-1]
    np.testing.assert_allclose(diagonal[-1], 3.0, rtol=1e-13)


def test_fit_to_zero_without_logs_matches_neville():
    x = np.array([0.2, 0.1, 0.05, 0.025])
    y = 1.0 - 0.7 * x + 3.0 * x ** 3
    terms = [(1, False), (2, False), (3, False)]
    np.testing.assert_allclose(fit_to_zero(x, y, terms), neville_to_zero(x, y), rtol=1e-10, atol=1e-13)


def test_fit_to_zero_resolves_log_term():
    x = np.array([0.2, 0.1, 0.05, 0.025, 0.0125])
    y = 2.0 + 0.5 * x - x ** 2 + 4.0 * x ** 2 * np.log(x) + x ** 3
    terms = [(1, False), (2, False), (2, True), (3, False)]
    diagonal = fit_to_zero(x, y, terms)
    assert diagonal.size == 5
    assert diagonal[-1] == pytest.approx(2.0, rel=1e-10)
    # polinômio puro no mesmo número de pontos erra pelo termo ln x
    assert abs(neville_to_zero(x, y)[-1] - 2.0) > 1e-5


def test_fit_to_zero_needs_enough_terms():
    with pytest.raises(ValueError, match="model terms"):
        fit_to_zero([0.2, 0.1, 0.05], [1.0, 1.0, 1.0], [(1, False)])
