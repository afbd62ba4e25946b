import numpy as np
import pytest
from numpy.polynomial import Polynomial

from harmap.analytic_fn import (
    IDENTITY,
    Composition,
    KAlpha,
    LinearCombination,
    PowerProduct,
    PowerSum,
    Primitive,
    TaylorSeries,
    eval_jet,
    taylor_from_coeffs,
)
from harmap.catalog import catalog
from harmap.utils.error_handlers import DomainError, RepresentationError

from conftest import random_disk_points


def koebe():
    # k(z) = z/(1-z)² = (1-z)^-2 - (1-z)^-1
    return PowerSum(((2.0, 1.0), (1.0, -1.0)), name="k")


def half_plane():
    return PowerSum(((1.0, 1.0),), constant=-1.0, name="l")


def series_of(numerator, order):
    """numerator(z)/(1-z)³ 의 테일러 계수 (다항식 곱으로 계산)"""
    inverse_cube = [(n + 1) * (n + 2) / 2 for n in range(order + 1)]
    return np.convolve(numerator, inverse_cube)[: order + 1]


def test_koebe_jet_at_origin():
    """Koebe 함수의 0 에서의 jet"""
    jet = eval_jet(koebe(), 0j)
    assert jet.as_tuple() == pytest.approx((0, 1, 4, 18), abs=1e-12)


def test_half_plane_jet_at_origin():
    jet = eval_jet(half_plane(), 0j)
    assert jet.as_tuple() == pytest.approx((0, 1, 2, 6), abs=1e-12)


def test_taylor_second_derivative_matches_koebe_harmonic_h():
    """(0, 1, 5/2, c₃) 의 h''(0) = 5"""
    fn = taylor_from_coeffs([0, 1, 2.5, 7])
    assert eval_jet(fn, 0j).f2 == pytest.approx(5.0)


def test_taylor_jet_at_origin_is_scaled_coefficients():
    fn = taylor_from_coeffs([0.5, 1 - 1j, 2j, 3])
    jet = eval_jet(fn, 0j)
    assert jet.as_tuple() == pytest.approx((0.5, 1 - 1j, 4j, 18))


def test_taylor_identity_and_constant():
    assert eval_jet(taylor_from_coeffs([0, 1, 0, 0]), 0j).as_tuple() == pytest.approx((0, 1, 0, 0))
    jet = eval_jet(taylor_from_coeffs([1, 0, 0, 0]), 0.3 + 0.2j)
    assert jet.as_tuple() == pytest.approx((1, 0, 0, 0))


def test_taylor_polynomial_evaluation():
    """(0, 1, 2, 3) 의 z = 0.5 에서의 jet"""
    jet = eval_jet(taylor_from_coeffs([0, 1, 2, 3]), 0.5)
    assert jet.as_tuple() == pytest.approx((1.375, 5.25, 13, 18))


def test_short_taylor_rejected():
    """계수 4 개 미만은 거부"""
    with pytest.raises(RepresentationError):
        taylor_from_coeffs([0, 1, 2])


@pytest.mark.parametrize("z", [1.0, 1.5j, -1.0 + 0.1j])
def test_jet_outside_disk_rejected(z):
    with pytest.raises(DomainError) as exc:
        IDENTITY.jet(z)
    assert exc.value.exit_code == 2
    assert exc.value.code == "domain_error"


def test_array_input_keeps_shape():
    z = np.array([[0.1, 0.2j], [-0.3, 0.4 + 0.1j]])
    jet = koebe().jet(z)
    assert jet.f0.shape == z.shape
    assert jet.f0[0, 0] == pytest.approx(0.1 / 0.81)


def test_taylor_derivatives_match_finite_differences(rng):
    """중심 차분과 해석 도함수 비교"""
    fn = taylor_from_coeffs(rng.normal(size=8) + 1j * rng.normal(size=8))
    step = 1e-5
    for z in random_disk_points(rng, 20, 0.9):
        jet = fn.jet(z)
        fd1 = (fn(z + step) - fn(z - step)) / (2 * step)
        fd2 = (fn.jet(z + step).f1 - fn.jet(z - step).f1) / (2 * step)
        fd3 = (fn.jet(z + step).f2 - fn.jet(z - step).f2) / (2 * step)
        assert abs(fd1 - jet.f1) <= 1e-6 * max(1.0, abs(jet.f1))
        assert abs(fd2 - jet.f2) <= 1e-4 * max(1.0, abs(jet.f2))
        assert abs(fd3 - jet.f3) <= 1e-4 * max(1.0, abs(jet.f3))


def test_harmonic_koebe_closed_form_matches_series(rng):
    """K 의 해석 부분 닫힌 형태와 고차 테일러 근사 비교 (|z| <= 0.5)"""
    order = 80
    h_series = taylor_from_coeffs(series_of([0, 1, -0.5, 1 / 6], order))
    g_series = taylor_from_coeffs(series_of([0, 0, 0.5, 1 / 6], order))
    K = catalog("harmonic_koebe_K")
    z = random_disk_points(rng, 50, 0.5)
    for closed, approx in ((K.h, h_series), (K.g, g_series)):
        a, b = closed.jet(z), approx.jet(z)
        for x, y in zip(a.as_tuple(), b.as_tuple()):
            np.testing.assert_allclose(x, y, rtol=1e-8, atol=1e-12)


def test_harmonic_koebe_difference_is_koebe():
    """h - g = z/(1-z)² (계수 10 차까지)"""
    h = series_of([0, 1, -0.5, 1 / 6], 10)
    g = series_of([0, 0, 0.5, 1 / 6], 10)
    np.testing.assert_allclose(h - g, [0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10], atol=1e-12)


def test_k_alpha_one_is_half_plane(rng):
    """α = 1 이면 k_α = z/(1-z)"""
    z = random_disk_points(rng, 30, 0.9)
    a, b = KAlpha(1.0).jet(z), half_plane().jet(z)
    for x, y in zip(a.as_tuple(), b.as_tuple()):
        np.testing.assert_allclose(x, y, rtol=1e-12, atol=1e-12)


def test_k_alpha_derivative_closed_form():
    z = 0.5
    jet = KAlpha(1.5).jet(z)
    assert jet.f1 == pytest.approx(1.5**0.5 / 0.5**2.5)
    # h''/h' = (α-1)/(1+z) + (α+1)/(1-z)
    assert jet.f2 / jet.f1 == pytest.approx(0.5 / 1.5 + 2.5 / 0.5)


def test_power_product_log_derivative_jets(rng):
    """(1+z)^2 (1-z)^-1 를 테일러 전개와 비교"""
    fn = PowerProduct(((1.0, 2.0), (-1.0, -1.0)), scale=2.0)
    coeffs = 2.0 * np.convolve([1, 2, 1], np.ones(60))[:60]
    approx = taylor_from_coeffs(coeffs)
    z = random_disk_points(rng, 20, 0.5)
    for x, y in zip(fn.jet(z).as_tuple(), approx.jet(z).as_tuple()):
        np.testing.assert_allclose(x, y, rtol=1e-9, atol=1e-12)


def test_primitive_reproduces_k_alpha(rng):
    """구적 원시함수와 k_α 닫힌 형태 비교"""
    alpha = 1.5
    prim = Primitive(PowerProduct(((1.0, alpha - 1.0), (-1.0, -alpha - 1.0))))
    z = random_disk_points(rng, 20, 0.8)
    np.testing.assert_allclose(prim(z), KAlpha(alpha)(z), rtol=1e-10, atol=1e-12)
    np.testing.assert_allclose(prim.jet(z).f3, KAlpha(alpha).jet(z).f3, rtol=1e-12)


def test_linear_combination():
    fn = LinearCombination(((2.0, IDENTITY), (1j, half_plane())), constant=1.0)
    jet = fn.jet(0j)
    assert jet.as_tuple() == pytest.approx((1.0, 2 + 1j, 2j, 6j))


def test_composition_matches_polynomial_composition(rng):
    """Faà di Bruno jet 과 다항식 합성의 도함수 비교"""
    outer_c = [0.1, 1.0, 0.5, -0.25, 0.125]
    inner_c = [0.0, 0.5, 0.1j, 0.2, 0.0]
    composed = Polynomial(outer_c)(Polynomial(inner_c))
    fn = Composition(TaylorSeries(tuple(complex(c) for c in outer_c)), TaylorSeries(tuple(complex(c) for c in inner_c)))
    z = random_disk_points(rng, 20, 0.9)
    jet = fn.jet(z)
    np.testing.assert_allclose(jet.f0, composed(z), rtol=1e-10, atol=1e-12)
    np.testing.assert_allclose(jet.f1, composed.deriv(1)(z), rtol=1e-10, atol=1e-12)
    np.testing.assert_allclose(jet.f2, composed.deriv(2)(z), rtol=1e-10, atol=1e-12)
    np.testing.assert_allclose(jet.f3, composed.deriv(3)(z), rtol=1e-10, atol=1e-12)
