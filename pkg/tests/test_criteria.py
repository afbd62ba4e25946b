import numpy as np
import pytest

from harmap.catalog import catalog
from harmap.criteria import (
    concave_family_check,
    lambda_points,
    mu_sqrt_bound_check,
    nh_lambda_check,
    no_shc_probe,
    shc_check,
    shc_order_bound_check,
    slice_identity_residual,
    stable_concave_mu_bound,
)
from harmap.order import upper_order
from harmap.utils.error_handlers import DomainError, InvalidParameterError

from conftest import random_disk_points


def test_shc_affine_identity_passes(small_grid):
    """φ_λ = (1 + λε)z 는 모두 볼록, 여유는 정확히 1"""
    report = shc_check(catalog("affine_identity", {"epsilon": 0.5}), small_grid)
    assert report.passed
    assert report.worst_margin == pytest.approx(1.0)
    assert report.grid["lambdas"] == 64


def test_shc_half_plane_fails(half_plane, small_grid):
    """λ = -1 에서 φ_λ 는 Koebe 함수"""
    report = shc_check(half_plane, small_grid)
    assert not report.passed
    assert report.worst_margin < 0
    assert abs(report.witness_z) < 1


def test_shc_power_map_fails(small_grid):
    report = shc_check(catalog("power_map", {"n": 2}), small_grid)
    assert not report.passed
    # 1 + zφ''/φ' = (1 + 2λz)/(1 + λz) 는 λz ≈ -1 근처에서 음수
    assert report.witness_z * report.witness_lambda == pytest.approx(-abs(report.witness_z), abs=0.2)


def test_shc_explicit_points_and_lambdas(identity):
    z = np.array([0.1, -0.5j, 0.3 + 0.3j])
    report = shc_check(identity, z, lambda_grid=np.array([1.0, -1.0]))
    assert report.passed
    assert report.grid == {"points": 3, "lambdas": 2}


def test_shc_rejects_points_outside_disk(identity):
    with pytest.raises(DomainError):
        shc_check(identity, np.array([0.2, 1.5]))


def test_lambda_points():
    np.testing.assert_allclose(lambda_points(4), [1, 1j, -1, -1j], atol=1e-15)
    with pytest.raises(InvalidParameterError):
        lambda_points(0)


def test_shc_order_bound_identity(identity, small_grid):
    """SHC 사상은 |A_f| + |(1-|z|²)ω'/(2(1-|ω|²))| <= 1"""
    report = shc_order_bound_check(identity, small_grid)
    assert report.applicable
    assert report.passed
    assert report.extra["shc_margin"] == pytest.approx(1.0)


def test_shc_order_bound_not_applicable_without_shc(half_plane, small_grid):
    report = shc_order_bound_check(half_plane, small_grid)
    assert not report.applicable
    # |A_L| = 3/2 > 1
    assert not report.passed
    assert report.notes


def test_concave_example_margin(small_grid):
    """여유 하한 β - |ρ|/(1+|ρ|)"""
    good = catalog("concave_example", {"beta": 0.25, "rho": 0.1})
    report = concave_family_check(good, 1.5, small_grid)
    assert report.passed
    assert report.worst_margin >= 0.25 - 0.1 / 1.1 - 1e-9

    bad = catalog("concave_example", {"beta": 0.25, "rho": 0.9})
    report = concave_family_check(bad, 1.5, small_grid)
    assert not report.passed
    assert report.worst_margin >= 0.25 - 0.9 / 1.9 - 1e-9
    assert report.extra["alpha"] == 1.5


def test_concave_family_half_plane_is_borderline(half_plane, small_grid):
    """L 의 α = 2 여유는 1/2 + Re(λz/(1-λz)) >= 0"""
    report = concave_family_check(half_plane, 2.0, small_grid)
    assert report.passed
    assert report.worst_margin < 1e-2


def test_concave_family_alpha_range(half_plane, small_grid):
    with pytest.raises(InvalidParameterError):
        concave_family_check(half_plane, 2.5, small_grid)


def test_stable_concave_not_applicable_for_identity(identity, small_grid):
    report = stable_concave_mu_bound(identity, small_grid, None)
    assert not report.applicable
    assert not report.passed
    assert "not a member" in report.notes[-1]


def test_stable_concave_half_plane(half_plane, small_grid):
    report = stable_concave_mu_bound(half_plane, small_grid, 2.0)
    assert report.applicable
    assert report.passed
    assert report.extra["mu_estimate"] == pytest.approx(1.5, abs=1e-9)


def test_nh_identity_passes(identity, small_grid):
    report = nh_lambda_check(identity, 0.5, small_grid)
    assert report.passed
    assert report.worst_margin == pytest.approx(1.0)
    assert report.extra["max_abs_omega"] == 0
    assert report.extra["quasiconformality_K"] == pytest.approx(1.0)


def test_nh_mobius_above_threshold(small_grid):
    """z/(1-z): S = 0 이지만 |P(0)| = 2 >= 2√(1-λ)"""
    f = catalog("k_alpha", {"alpha": 1})
    report = nh_lambda_check(f, 0.5, small_grid)
    assert report.passed
    assert report.extra["abs_P0"] == pytest.approx(2.0)
    assert report.extra["threshold"] == pytest.approx(1.414, abs=1e-3)
    assert report.extra["below_threshold"] is False
    assert report.notes


@pytest.mark.parametrize("lam", [0.0, 1.5, -0.2])
def test_nh_lambda_range(identity, small_grid, lam):
    with pytest.raises(InvalidParameterError):
        nh_lambda_check(identity, lam, small_grid)


def test_mu_sqrt_bound_mobius(small_grid):
    """무계 뫼비우스 사상: μ = 1 >= √(1-λ)"""
    f = catalog("k_alpha", {"alpha": 1})
    report = mu_sqrt_bound_check(f, 0.5, small_grid, unbounded=True)
    assert report.applicable
    assert report.passed
    assert report.extra["bound"] == pytest.approx(np.sqrt(0.5))
    assert report.extra["mu_estimate"] == pytest.approx(1.0, abs=1e-9)


def test_mu_sqrt_bound_requires_unbounded(identity, small_grid):
    report = mu_sqrt_bound_check(identity, 0.5, small_grid, unbounded=False)
    assert not report.applicable
    assert any("unbounded" in note for note in report.notes)


def test_no_shc_probe_harmonic_koebe(harmonic_koebe, small_grid):
    """ω = z 이면 (1-|z|²)|ω'|/(1-|ω|²) ≡ 1"""
    report = no_shc_probe(harmonic_koebe, small_grid)
    assert report.applicable
    assert report.worst_margin == pytest.approx(1.0)
    assert report.passed
    assert report.extra["shc_pass"] is False


def test_no_shc_probe_not_applicable_for_analytic(identity, small_grid):
    report = no_shc_probe(identity, small_grid)
    assert not report.applicable
    assert report.passed


def test_slice_identity_residual(catalog_map, rng):
    """A_f = A_{φ_λ} - ((λ + conj ω)/(1 + λω))(1-|z|²)ω'/(2(1-|ω|²))"""
    for z in random_disk_points(rng, 10, 0.8):
        lam = np.exp(2j * np.pi * rng.random())
        assert slice_identity_residual(catalog_map, z, lam) <= 1e-10 * max(1.0, abs(1 / (1 - abs(z))))


def test_report_serialization(half_plane, small_grid):
    data = shc_check(half_plane, small_grid).to_dict()
    assert data["name"] == "shc"
    assert data["pass"] is False
    assert len(data["witness"]["z"]) == 2
    assert len(data["witness"]["lambda"]) == 2


def test_shc_pass_implies_upper_order_at_most_one(small_grid):
    f = catalog("affine_identity", {"epsilon": 0.5})
    assert shc_check(f, small_grid).passed
    assert upper_order(f, small_grid).value <= 1 + 1e-2


def test_stable_concave_construction_lower_order(medium_grid):
    """β = 1/4, ρ = 0.1 (|ρ| < β/(1+β)): 1 - 10⁻² <= μ 추정 <= 3/2"""
    f = catalog("concave_example", {"beta": 0.25, "rho": 0.1})
    report = stable_concave_mu_bound(f, medium_grid, 1.5)
    assert report.applicable
    assert report.passed
    assert 1 - 1e-2 <= report.extra["mu_estimate"] <= 1.5 + 1e-9
    assert report.extra["concave_margin"] >= 0.25 - 0.1 / 1.1 - 1e-9
