"""
표본 격자 위에서의 함수 부등식 가설 검사.

모든 검사는 격자 위 최악 여유(worst margin)와 그 위치(witness)를 보고한다.
통과는 증거일 뿐이며 실패는 반례 위치를 준다.
"""
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Tuple, Union

import numpy as np

from .analytic_fn import as_disk_points
from .config import DEFAULT_TOLERANCES, Tolerances
from .harmonic_map import HarmonicMap, one_minus_abs2, slice_map
from .logger import get_logger
from .operators import a_operator_analytic, operator_fields
from .order import evaluate_parallel, lower_order
from .schemas import GridSpec
from .utils.error_handlers import InvalidParameterError

logger = get_logger("criteria")

ZGrid = Union[GridSpec, np.ndarray]
LambdaGrid = Union[int, np.ndarray]

DEFAULT_LAMBDA_COUNT = 64


@dataclass(frozen=True)
class CriterionReport:
    name: str
    map_label: str
    grid: Dict[str, Any]
    passed: bool
    worst_margin: float
    witness_z: Optional[complex] = None
    witness_lambda: Optional[complex] = None
    applicable: bool = True
    notes: List[str] = field(default_factory=list)
    extra: Dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> Dict[str, Any]:
        def pair(w):
            return None if w is None else [w.real, w.imag]

        return {
            "name": self.name,
            "map": self.map_label,
            "grid": self.grid,
            "pass": self.passed,
            "applicable": self.applicable,
            "worst_margin": self.worst_margin,
            "witness": {"z": pair(self.witness_z), "lambda": pair(self.witness_lambda)},
            "notes": self.notes,
            "extra": self.extra,
        }


def z_points(z_grid: ZGrid) -> Tuple[np.ndarray, Dict[str, Any]]:
    if isinstance(z_grid, GridSpec):
        return z_grid.points()[2], z_grid.model_dump()
    z = as_disk_points(np.ravel(np.asarray(z_grid, dtype=complex)))
    return z, {"points": int(z.size)}


def lambda_points(lambda_grid: LambdaGrid) -> np.ndarray:
    """단위원 위 λ 표본. 정수 m 이면 m 차 단위근."""
    if isinstance(lambda_grid, (int, np.integer)):
        if lambda_grid < 1:
            raise InvalidParameterError(f"lambda grid needs at least 1 point, got {lambda_grid}")
        return np.exp(2j * np.pi * np.arange(lambda_grid) / lambda_grid)
    return np.ravel(np.asarray(lambda_grid, dtype=complex))


def _slice_sweep(
    f: HarmonicMap,
    z: np.ndarray,
    lambdas: np.ndarray,
    margin_fn,
    workers: Optional[int],
    tol: Tolerances,
) -> Tuple[float, complex, complex, bool]:
    """
    φ_λ = h + λg 의 곱 격자 스윕. margin_fn(z, φ''/φ') -> 실수 여유.
    φ_λ' 이 사라지는 점은 -inf 여유로 기록.
    """
    def evaluate(zc: np.ndarray) -> np.ndarray:
        hj = f.h._jet(zc)
        gj = f.g._jet(zc)
        d1 = hj.f1[:, None] + lambdas[None, :] * gj.f1[:, None]
        d2 = hj.f2[:, None] + lambdas[None, :] * gj.f2[:, None]
        degenerate = np.abs(d1) < tol.h_prime_floor
        with np.errstate(divide='ignore', invalid='ignore'):
            margins = margin_fn(zc[:, None], d2 / d1)
        margins = np.where(degenerate, -np.inf, margins)
        k = np.argmin(margins, axis=1)
        return np.stack([margins[np.arange(zc.size), k], k.astype(float)], axis=1)

    table = evaluate_parallel(evaluate, z, workers)
    i = int(np.argmin(table[:, 0]))
    worst = float(table[i, 0])
    return worst, complex(z[i]), complex(lambdas[int(table[i, 1])]), bool(np.isneginf(worst))


def shc_check(
    f: HarmonicMap,
    z_grid: ZGrid,
    lambda_grid: LambdaGrid = DEFAULT_LAMBDA_COUNT,
    workers: Optional[int] = None,
    tol: Tolerances = DEFAULT_TOLERANCES,
) -> CriterionReport:
    """모든 |λ|=1 에 대해 φ_λ 볼록: Re{1 + zφ_λ''/φ_λ'} > 0"""
    z, grid = z_points(z_grid)
    lambdas = lambda_points(lambda_grid)
    worst, wz, wl, degenerate = _slice_sweep(
        f, z, lambdas, lambda zz, ratio: np.real(1.0 + zz * ratio), workers, tol
    )
    notes = ["phi_lambda' vanishes at the witness"] if degenerate else []
    return CriterionReport(
        name="shc",
        map_label=f.label,
        grid={**grid, "lambdas": int(lambdas.size)},
        passed=worst >= -tol.report_tolerance,
        worst_margin=worst,
        witness_z=wz,
        witness_lambda=wl,
        notes=notes,
    )


def shc_order_bound_check(
    f: HarmonicMap,
    z_grid: ZGrid,
    lambda_grid: LambdaGrid = DEFAULT_LAMBDA_COUNT,
    workers: Optional[int] = None,
    tol: Tolerances = DEFAULT_TOLERANCES,
) -> CriterionReport:
    """|A_f| + |(1-|z|²)ω'/(2(1-|ω|²))| <= 1"""
    shc = shc_check(f, z_grid, lambda_grid, workers, tol)
    z, grid = z_points(z_grid)

    def evaluate(zc: np.ndarray) -> np.ndarray:
        fields = operator_fields(f, zc, False, tol)
        term = one_minus_abs2(zc) * np.abs(fields.omega1) / (2.0 * fields.gap)
        return 1.0 - (np.abs(fields.A) + term)

    margins = evaluate_parallel(evaluate, z, workers)
    i = int(np.argmin(margins))
    notes = [] if shc.passed else ["shc_check fails on this grid; the inequality is not implied"]
    return CriterionReport(
        name="shc_order_bound",
        map_label=f.label,
        grid={**grid, "lambdas": shc.grid["lambdas"]},
        passed=float(margins[i]) >= -tol.report_tolerance,
        worst_margin=float(margins[i]),
        witness_z=complex(z[i]),
        applicable=shc.passed,
        notes=notes,
        extra={"shc_margin": shc.worst_margin},
    )


def concave_family_check(
    f: HarmonicMap,
    alpha: float,
    z_grid: ZGrid,
    lambda_grid: LambdaGrid = DEFAULT_LAMBDA_COUNT,
    workers: Optional[int] = None,
    tol: Tolerances = DEFAULT_TOLERANCES,
) -> CriterionReport:
    """Re{((α+1)/2)(1+z)/(1-z) - 1 - zφ_λ''/φ_λ'} > 0,  1 <= α <= 2"""
    if not 1.0 <= alpha <= 2.0:
        raise InvalidParameterError(f"concave family needs 1 <= alpha <= 2, got {alpha}")
    z, grid = z_points(z_grid)
    lambdas = lambda_points(lambda_grid)

    def margin(zz, ratio):
        return np.real(0.5 * (alpha + 1.0) * (1.0 + zz) / (1.0 - zz) - 1.0 - zz * ratio)

    worst, wz, wl, degenerate = _slice_sweep(f, z, lambdas, margin, workers, tol)
    notes = ["phi_lambda' vanishes at the witness"] if degenerate else []
    return CriterionReport(
        name="concave_family",
        map_label=f.label,
        grid={**grid, "lambdas": int(lambdas.size)},
        passed=worst >= -tol.report_tolerance,
        worst_margin=worst,
        witness_z=wz,
        witness_lambda=wl,
        notes=notes,
        extra={"alpha": alpha},
    )


_MU_SLACK = 1e-2


def stable_concave_mu_bound(
    f: HarmonicMap,
    grid: GridSpec,
    alpha: Optional[float],
    lambda_grid: LambdaGrid = DEFAULT_LAMBDA_COUNT,
    workers: Optional[int] = None,
    tol: Tolerances = DEFAULT_TOLERANCES,
) -> CriterionReport:
    """φ_λ 가 모두 오목하고 상이 무계이면 1 <= μ(f) <= 3/2"""
    notes = ["finitely many lambda are sampled and unboundedness is not verified"]
    if alpha is None:
        return CriterionReport(
            name="stable_concave_mu", map_label=f.label, grid=grid.model_dump(), passed=False,
            worst_margin=float('nan'), applicable=False,
            notes=notes + ["map is not a member of a concave family"],
        )

    concave = concave_family_check(f, alpha, grid, lambda_grid, workers, tol)
    estimate = lower_order(f, grid, workers, tol)
    margin = min(estimate.value - (1.0 - _MU_SLACK), 1.5 + tol.report_tolerance - estimate.value)
    if not concave.passed:
        notes.append("concave_family_check fails; precondition not met")
    return CriterionReport(
        name="stable_concave_mu",
        map_label=f.label,
        grid=grid.model_dump(),
        passed=margin >= 0,
        worst_margin=margin,
        witness_z=estimate.witness,
        applicable=concave.passed,
        notes=notes,
        extra={"mu_estimate": estimate.value, "alpha": alpha, "concave_margin": concave.worst_margin},
    )


def nh_lambda_check(
    f: HarmonicMap,
    lam: float,
    grid: ZGrid,
    workers: Optional[int] = None,
    tol: Tolerances = DEFAULT_TOLERANCES,
) -> CriterionReport:
    """
    |S_f| + |ω'|²/(1-|ω|²)² <= 2λ/(1-|z|²)²  를 (1-|z|²)² 를 곱한 척도 없는 형태로 검사:
      margin = 2λ - (1-|z|²)²(|S_f| + |ω'|²/(1-|ω|²)²)
    """
    if not 0.0 < lam <= 1.0:
        raise InvalidParameterError(f"lambda must lie in (0, 1], got {lam}")
    z, grid_info = z_points(grid)

    def evaluate(zc: np.ndarray) -> np.ndarray:
        fields = operator_fields(f, zc, True, tol)
        lhs = np.abs(fields.S) + np.abs(fields.omega1) ** 2 / fields.gap**2
        margin = 2.0 * lam - (1.0 - np.abs(zc) ** 2) ** 2 * lhs
        return np.stack([margin, np.abs(fields.omega)], axis=1)

    table = evaluate_parallel(evaluate, z, workers)
    i = int(np.argmin(table[:, 0]))
    max_omega = float(np.max(table[:, 1]))
    p0 = abs(complex(operator_fields(f, 0j, False, tol).P[0]))
    threshold = 2.0 * np.sqrt(1.0 - lam)
    notes = []
    if not p0 < threshold:
        notes.append(f"|P_f(0)| = {p0:.6g} >= 2 sqrt(1-lambda) = {threshold:.6g}; boundedness hypothesis not met")
    return CriterionReport(
        name="nh_lambda",
        map_label=f.label,
        grid=grid_info,
        passed=float(table[i, 0]) >= -tol.report_tolerance,
        worst_margin=float(table[i, 0]),
        witness_z=complex(z[i]),
        notes=notes,
        extra={
            "lambda": lam,
            "abs_P0": p0,
            "threshold": float(threshold),
            "below_threshold": bool(p0 < threshold),
            "max_abs_omega": max_omega,
            "quasiconformality_K": (1.0 + max_omega) / (1.0 - max_omega) if max_omega < 1 else float('inf'),
        },
    )


def mu_sqrt_bound_check(
    f: HarmonicMap,
    lam: float,
    grid: GridSpec,
    unbounded: bool,
    workers: Optional[int] = None,
    tol: Tolerances = DEFAULT_TOLERANCES,
) -> CriterionReport:
    """NH_λ 의 무계 사상은 μ(f) >= √(1-λ). 추정값은 μ 의 위쪽 한계이므로 실패는 반증 신호."""
    nh = nh_lambda_check(f, lam, grid, workers, tol)
    estimate = lower_order(f, grid, workers, tol)
    bound = float(np.sqrt(1.0 - lam))
    margin = estimate.value - (bound - _MU_SLACK)
    notes = []
    if not nh.passed:
        notes.append("nh_lambda_check fails at this lambda; precondition not met")
    if not unbounded:
        notes.append("map is not flagged unbounded; precondition not met")
    return CriterionReport(
        name="mu_sqrt_bound",
        map_label=f.label,
        grid=grid.model_dump(),
        passed=margin >= 0,
        worst_margin=margin,
        witness_z=estimate.witness,
        applicable=nh.passed and unbounded,
        notes=notes,
        extra={"mu_estimate": estimate.value, "bound": bound, "nh_margin": nh.worst_margin, "lambda": lam},
    )


def no_shc_probe(
    f: HarmonicMap,
    z_grid: ZGrid,
    lambda_grid: LambdaGrid = DEFAULT_LAMBDA_COUNT,
    workers: Optional[int] = None,
    tol: Tolerances = DEFAULT_TOLERANCES,
) -> CriterionReport:
    """inf (1-|z|²)|ω'|/(1-|ω|²) > 0 인 사상은 SHC 일 수 없음"""
    z, grid = z_points(z_grid)
    fields = operator_fields(f, z, False, tol)
    values = one_minus_abs2(z) * np.abs(fields.omega1) / fields.gap
    i = int(np.argmin(values))
    c = float(values[i])
    shc = shc_check(f, z_grid, lambda_grid, workers, tol)
    consistent = not (c > tol.report_tolerance and shc.passed)
    return CriterionReport(
        name="no_shc_probe",
        map_label=f.label,
        grid={**grid, "lambdas": shc.grid["lambdas"]},
        passed=consistent,
        worst_margin=c,
        witness_z=complex(z[i]),
        applicable=c > tol.report_tolerance,
        extra={"shc_pass": shc.passed, "shc_margin": shc.worst_margin},
    )


def slice_identity_residual(
    f: HarmonicMap, z: complex, lam: complex, tol: Tolerances = DEFAULT_TOLERANCES
) -> float:
    """|A_f - [A_{φ_λ} - ((λ + conj ω)/(1 + λω))(1-|z|²)ω'/(2(1-|ω|²))]|"""
    z, lam = complex(z), complex(lam)
    fields = operator_fields(f, z, False, tol)
    omega, omega1 = complex(fields.omega[0]), complex(fields.omega1[0])
    phi = slice_map(f, lam)
    correction = (lam + omega.conjugate()) / (1.0 + lam * omega) * (1.0 - abs(z) ** 2) * omega1 / (
        2.0 * (1.0 - abs(omega) ** 2)
    )
    return abs(complex(fields.A[0]) - (a_operator_analytic(phi, z, tol) - correction))
