"""
Testes do caminho regularizado e da extrapolação alpha -> 0
"""
import math

import numpy as np
import pytest
from pydantic import ValidationError
from scipy.integrate import quad

from config import ACCEPTANCE, VALIDATION_GRID
from data.models import AlphaSchedule, PotentialSpec
from oracles.regularized import (
    RegularizedMoments,
    alpha_terms,
    denominator_kernel,
    extrapolate_alpha,
    imaginary_kernel,
    imaginary_residual,
    numerator_kernel,
    physical_alphas,
    regularized_denominator,
    regularized_moments,
    regularized_numerator,
    validate_potential,
)
from utils.errors import NonContracting

# =============================================================================
# Kernels analíticos no tempo
# =============================================================================

def test_kernels_are_laplace_transforms():
    alpha = 0.3
    f = np.linspace(-5.0, 5.0, 101)
    z = alpha - 1j * f
    np.testing.assert_allclose(denominator_kernel(f, alpha), np.real(1.0 / z), rtol=1e-13)
    np.testing.assert_allclose(imaginary_kernel(f, alpha), np.imag(1.0 / z), rtol=1e-13, atol=1e-15)
    np.testing.assert_allclose(numerator_kernel(f, alpha), np.real(2.0 / z ** 3), rtol=1e-12, atol=1e-12)


@pytest.mark.parametrize("alpha", [1.0, 0.1])
def test_denominator_kernel_is_nascent_delta(alpha):
    half, _ = quad(lambda f: denominator_kernel(f, alpha), 0.0, np.inf, epsabs=1e-12, epsrel=1e-10)
    np.testing.assert_allclose(2.0 * half, math.pi, rtol=1e-8)

# =============================================================================
# Extrapolação
# =============================================================================

def test_constant_sequence_extrapolates_to_itself():
    schedule = AlphaSchedule()
    ext = extrapolate_alpha([5.0] * len(schedule.alphas), schedule)
    assert ext.value == pytest.approx(5.0, rel=1e-14)
    assert ext.error == pytest.approx(0.0, abs=1e-13)


def test_polynomial_in_alpha_is_exact():
    schedule = AlphaSchedule()
    alphas = np.array(schedule.alphas)
    ext = extrapolate_alpha(list(2.0 - 3.0 * alphas + 0.5 * alphas ** 2), schedule)
    np.testing.assert_allclose(ext.value, 2.0, rtol=1e-12)


def test_power_two_extrapolation():
    schedule = AlphaSchedule(power=2, order=1)
    alphas = np.array(schedule.alphas)
    ext = extrapolate_alpha(list(1.5 + 4.0 * alphas ** 2), schedule)
    np.testing.assert_allclose(ext.value, 1.5, rtol=1e-12)
    assert len(ext.estimates) == 2


def test_growing_corrections_raise():
    schedule = AlphaSchedule(alphas=(0.2, 0.1, 0.05, 0.025))
    with pytest.raises(NonContracting) as info:
        extrapolate_alpha([0.0, 1.0, 0.0, 0.0], schedule)
    assert len(info.value.corrections) == 2


def test_default_degree_leaves_one_alpha_for_the_window():
    assert AlphaSchedule().degree == len(AlphaSchedule().alphas) - 2
    assert AlphaSchedule(alphas=(0.2, 0.1, 0.05)).degree == 1
    assert AlphaSchedule(order=2).degree == 2


def test_alpha_terms_put_logs_after_plain_powers():
    assert alpha_terms(4, log_from=2) == [(1, False), (2, False), (2, True), (3, False)]
    assert alpha_terms(5, log_from=4) == [(1, False), (2, False), (3, False), (4, False), (4, True)]
    assert alpha_terms(3, power=2) == [(2, False), (4, False), (6, False)]


def test_log_model_is_exact_for_its_own_terms():
    schedule = AlphaSchedule()
    alphas = np.array(schedule.alphas)
    values = 1.0 + 0.3 * alphas + 2.0 * alphas ** 2 * np.log(alphas) - alphas ** 2
    ext = extrapolate_alpha(list(values), schedule, log_from=2)
    assert ext.value == pytest.approx(1.0, rel=1e-10)
    assert ext.error < 1e-9
    # o polinômio puro não enxerga alpha^2 ln alpha
    assert abs(extrapolate_alpha(list(values), schedule).value - 1.0) > 1e-6


def test_shifted_window_error_covers_omitted_term():
    schedule = AlphaSchedule()
    alphas = np.array(schedule.alphas)
    values = 1.0 + 0.3 * alphas + 2.0 * alphas ** 2 * np.log(alphas) + 5.0 * alphas ** 3 * np.log(alphas)
    ext = extrapolate_alpha(list(values), schedule, log_from=2)
    assert ext.window is not None
    assert abs(ext.value - 1.0) > 0.0
    assert abs(ext.value - 1.0) <= ext.error


def test_value_count_must_match_alphas():
    with pytest.raises(ValueError):
        extrapolate_alpha([1.0, 2.0], AlphaSchedule())


@pytest.mark.parametrize("kwargs", [
    {"alphas": (0.1, 0.2, 0.05)},
    {"alphas": (0.2, 0.1)},
    {"alphas": (0.2, 0.1, -0.05)},
    {"alphas": (0.2, 0.1, 0.05), "order": 3},
    {"power": 0},
])
def test_invalid_schedules(kwargs):
    with pytest.raises(ValidationError):
        AlphaSchedule(**kwargs)


def test_extended_moments_append_smaller_alphas():
    base = RegularizedMoments([0.2, 0.1], [1.0, 2.0], [3.0, 4.0], [0.0, 0.0], [0.0, 0.0])
    extra = RegularizedMoments([0.05], [2.5], [4.5], [1e-9], [1e-8])
    joined = base.extended(extra)
    assert joined.alphas == [0.2, 0.1, 0.05]
    assert joined.numerator == [3.0, 4.0, 4.5]
    assert joined.numerator_error[-1] == 1e-8
    with pytest.raises(ValueError):
        extra.extended(base)


def test_physical_alphas_units(well_spec):
    schedule = AlphaSchedule()
    np.testing.assert_allclose(physical_alphas(well_spec, schedule, 4.0), np.array(schedule.alphas) / 4.0)
    fixed = AlphaSchedule(scale_by_lifetime=False)
    np.testing.assert_allclose(physical_alphas(well_spec, fixed, 4.0), np.array(schedule.alphas) / well_spec.t0)


@pytest.mark.parametrize("fn", [regularized_denominator, imaginary_residual])
def test_alpha_must_be_positive(fn, free_spec):
    with pytest.raises(ValueError):
        fn(free_spec, 0.0)

# =============================================================================
# Equivalência com as quadraturas simples
# =============================================================================

@pytest.fixture(scope="module")
def free_report(free_spec):
    return validate_potential(free_spec, check_imaginary=True)


@pytest.mark.slow
def test_free_particle_regularized_path(free_report, free_lifetime):
    report = free_report
    assert report.d_monotone and report.n_monotone
    assert report.imaginary_ratio < 1e-5
    # D(alpha) = int dP e^{-alpha t} <= norma / alpha
    for alpha, d in zip(report.alphas, report.d_alpha):
        assert d <= free_lifetime.norm / alpha
    assert report.to_dict()["status"] == ("PASS" if report.passed else "FAIL")


@pytest.mark.slow
@pytest.mark.parametrize("v0a2", VALIDATION_GRID)
def test_regularized_path_matches_single_quadratures(v0a2, request):
    if v0a2 == 0.0:
        report = request.getfixturevalue("free_report")
    else:
        report = validate_potential(PotentialSpec.from_v0a2(v0a2))
    assert report.d_rel_diff < ACCEPTANCE["denominator_rel"], report.messages
    assert report.n_rel_diff < ACCEPTANCE["numerator_rel"], report.messages
    assert report.passed


@pytest.mark.slow
def test_fixed_time_unit_schedule_runs(free_spec):
    report = validate_potential(free_spec, AlphaSchedule(scale_by_lifetime=False))
    assert report.alphas[0] == pytest.approx(0.2 / free_spec.t0)
    assert math.isfinite(report.d_error) and math.isfinite(report.n_error)
    assert report.d_rel_diff < ACCEPTANCE["numerator_rel"]

# =============================================================================
# D(alpha) e N(alpha) diretos, com estado ligado
# =============================================================================

@pytest.fixture(scope="module")
def well_alphas(well_spec):
    return [0.1 / well_spec.t0, 0.05 / well_spec.t0]


@pytest.fixture(scope="module")
def well_moments(well_spec, well_alphas):
    return regularized_moments(well_spec, well_alphas)


@pytest.mark.slow
def test_numerator_is_positive_and_grows_as_alpha_shrinks(well_spec, well_alphas, well_moments):
    values = [regularized_numerator(well_spec, alpha) for alpha in well_alphas]
    assert values[0] > 0
    assert values[1] > values[0]
    np.testing.assert_allclose(values, well_moments.numerator, rtol=1e-5)


@pytest.mark.slow
def test_denominator_bounded_by_norm_over_alpha(well_spec, well_alphas, well_moments, well_lifetime):
    # |dP(t)| <= int |c|^2 dk para todo t
    for alpha, d in zip(well_alphas, well_moments.denominator):
        assert 0.0 < d <= well_lifetime.norm / alpha
    assert regularized_denominator(well_spec, well_alphas[0]) == pytest.approx(well_moments.denominator[0], rel=1e-5)
