"""
하위 차수 μ(f) = inf|A_f| 와 상위 차수 ‖A_f‖ = sup|A_f| 의 표본 추정.

표본 최솟값은 μ 의 위쪽 한계, 표본 최댓값은 ‖A_f‖ 의 아래쪽 한계이다.
극값이 |z| → 1 에서만 근접되는 경우가 많으므로 이진 반지름 1-2^-k 로
경계를 탐색하고 광선마다 (1-r) 에 대한 선형 외삽값을 함께 보고한다.
"""
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Literal, Optional, Sequence, Tuple

import numpy as np

from .config import DEFAULT_TOLERANCES, Tolerances, max_workers
from .harmonic_map import HarmonicMap
from .logger import get_logger
from .operators import operator_fields
from .schemas import GridSpec

logger = get_logger("order")

OrderKind = Literal['lower', 'upper']

_SEMANTICS = {
    "lower": "sampled infimum: an upper bound for mu(f), not a certified value",
    "upper": "sampled supremum: a lower bound for ||A_f||, not a certified value",
}

# 경계 외삽에 쓰는 마지막 이진 반지름 개수
_FIT_POINTS = 4


def evaluate_parallel(
    func: Callable[[np.ndarray], np.ndarray],
    z: np.ndarray,
    workers: Optional[int] = None,
) -> np.ndarray:
    """z 를 인덱스 순서의 조각으로 나눠 병렬 평가. 결과는 스레드 수와 무관."""
    n_workers = max_workers(workers)
    if n_workers == 1 or z.size < 2048:
        return func(z)
    chunks = np.array_split(z, n_workers * 4)
    with ThreadPoolExecutor(max_workers=n_workers) as pool:
        results = list(pool.map(func, chunks))
    return np.concatenate(results)


def _abs_a(f: HarmonicMap, tol: Tolerances) -> Callable[[np.ndarray], np.ndarray]:
    def evaluate(z: np.ndarray) -> np.ndarray:
        return np.abs(operator_fields(f, z, False, tol).A)
    return evaluate


@dataclass(frozen=True)
class OrderEstimate:
    kind: str
    value: float
    witness: complex
    sampled_semantics: str
    boundary_rays: List[Tuple[float, float]]
    grid_spec: Dict[str, Any]
    map_label: str = ""
    diagnostics: Dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "map": self.map_label,
            "kind": self.kind,
            "value": self.value,
            "witness": [self.witness.real, self.witness.imag],
            "sampled_semantics": self.sampled_semantics,
            "grid": self.grid_spec,
            "diagnostics": self.diagnostics,
            "boundary_rays": [[theta, limit] for theta, limit in self.boundary_rays],
        }


def boundary_rays(
    f: HarmonicMap, grid: GridSpec, tol: Tolerances = DEFAULT_TOLERANCES
) -> Tuple[List[Tuple[float, float]], float]:
    """광선마다 |A_f(re^{iθ})| 의 r → 1 선형 외삽값과 최대 적합 잔차"""
    dyadic = grid.dyadic_radii()[-_FIT_POINTS:]
    angles = grid.angles()
    z = dyadic[None, :] * np.exp(1j * angles)[:, None]
    values = np.abs(operator_fields(f, z.ravel(), False, tol).A).reshape(z.shape)
    x = 1.0 - dyadic
    if x.size < 2:
        return [(float(t), float(v[-1])) for t, v in zip(angles, values)], 0.0
    # 모든 광선을 한 번에 최소제곱 적합: v = c0 + c1 (1-r)
    slope, intercept = np.polyfit(x, values.T, 1)
    residual = values - (intercept[:, None] + slope[:, None] * x[None, :])
    rays = [(float(t), float(c)) for t, c in zip(angles, intercept)]
    return rays, float(np.max(np.abs(residual)))


def _refine(
    f: HarmonicMap,
    grid: GridSpec,
    r0: float,
    theta0: float,
    value0: float,
    sense: float,
    tol: Tolerances,
) -> Tuple[float, float, float, int]:
    """(r, θ) 좌표 하강. 개선이 없으면 보폭을 절반으로 줄임."""
    radii = grid.radii()
    k = int(np.searchsorted(radii, r0))
    below = radii[k] - radii[k - 1] if k > 0 else 0.0
    above = radii[k + 1] - radii[k] if k + 1 < radii.size else 0.0
    dr = max(below, above, 1e-12)
    dtheta = 2.0 * np.pi / grid.N
    r, theta, best = r0, theta0, value0
    evaluate = _abs_a(f, tol)

    iterations = 0
    for iterations in range(1, grid.R + 1):
        candidates = np.array([
            (min(r + dr, grid.r_max), theta),
            (max(r - dr, 0.0), theta),
            (r, theta + dtheta),
            (r, theta - dtheta),
        ])
        z = candidates[:, 0] * np.exp(1j * candidates[:, 1])
        scores = sense * evaluate(z)
        j = int(np.argmin(scores))
        improvement = sense * best - scores[j]
        if improvement > 0:
            r, theta = float(candidates[j, 0]), float(candidates[j, 1])
            best = sense * float(scores[j])
            if improvement < grid.refine_tol:
                break
        else:
            dr *= 0.5
            dtheta *= 0.5
            if dr < 1e-15 and dtheta < 1e-15:
                break
    return r, float(np.mod(theta, 2.0 * np.pi)), best, iterations


def estimate_order(
    f: HarmonicMap,
    grid: GridSpec,
    kind: OrderKind,
    workers: Optional[int] = None,
    tol: Tolerances = DEFAULT_TOLERANCES,
) -> OrderEstimate:
    sense = 1.0 if kind == 'lower' else -1.0
    r, theta, z = grid.points()
    values = evaluate_parallel(_abs_a(f, tol), z, workers)
    i = int(np.argmin(sense * values))
    grid_value = float(values[i])
    logger.debug(f"{f.label}: {kind} order sampled over {z.size} points, grid extremum {grid_value:.12g}")

    r_best, theta_best, value, iterations = _refine(f, grid, r[i], theta[i], grid_value, sense, tol)
    witness = complex(r_best * np.exp(1j * theta_best))
    rays, fit_residual = boundary_rays(f, grid, tol)
    limits = [limit for _, limit in rays]
    logger.debug(f"{f.label}: refinement {iterations} iterations, {grid_value:.12g} -> {value:.12g}")

    return OrderEstimate(
        kind=kind,
        value=value,
        witness=witness,
        sampled_semantics=_SEMANTICS[kind],
        boundary_rays=rays,
        grid_spec=grid.model_dump(),
        map_label=f.label,
        diagnostics={
            "n_points": int(z.size),
            "grid_value": grid_value,
            "refine_iterations": iterations,
            "boundary_limit": min(limits) if kind == 'lower' else max(limits),
            "boundary_fit_residual": fit_residual,
        },
    )


def lower_order(
    f: HarmonicMap, grid: GridSpec, workers: Optional[int] = None, tol: Tolerances = DEFAULT_TOLERANCES
) -> OrderEstimate:
    return estimate_order(f, grid, 'lower', workers, tol)


def upper_order(
    f: HarmonicMap, grid: GridSpec, workers: Optional[int] = None, tol: Tolerances = DEFAULT_TOLERANCES
) -> OrderEstimate:
    return estimate_order(f, grid, 'upper', workers, tol)


def radial_profile(
    f: HarmonicMap, theta: float, radii: Sequence[float], tol: Tolerances = DEFAULT_TOLERANCES
) -> List[Tuple[float, float]]:
    radii = np.asarray(radii, dtype=float)
    values = np.abs(operator_fields(f, radii * np.exp(1j * theta), False, tol).A)
    return [(float(r), float(v)) for r, v in zip(radii, values)]


@dataclass(frozen=True)
class MuCriterionResult:
    lambda_hat: float
    implied_mu_lower: float
    applicable: bool
    witness: complex
    map_label: str
    note: str

    def to_dict(self) -> Dict[str, Any]:
        return {
            "map": self.map_label,
            "lambda_hat": self.lambda_hat,
            "implied_mu_lower": self.implied_mu_lower,
            "applicable": self.applicable,
            "witness": [self.witness.real, self.witness.imag],
            "note": self.note,
        }


def mu_criterion_bound(
    f: HarmonicMap, grid: GridSpec, workers: Optional[int] = None, tol: Tolerances = DEFAULT_TOLERANCES
) -> MuCriterionResult:
    """λ̂ = sup ((1-|z|²)/2)|P_f(z) - 2/(1-z)|,  μ(f) >= 1 - λ"""
    def evaluate(z: np.ndarray) -> np.ndarray:
        P = operator_fields(f, z, False, tol).P
        return 0.5 * (1.0 - np.abs(z) ** 2) * np.abs(P - 2.0 / (1.0 - z))

    _, _, z = grid.points()
    values = evaluate_parallel(evaluate, z, workers)
    i = int(np.argmax(values))
    lambda_hat = float(values[i])
    return MuCriterionResult(
        lambda_hat=lambda_hat,
        implied_mu_lower=max(0.0, 1.0 - lambda_hat),
        applicable=lambda_hat <= 1.0,
        witness=complex(z[i]),
        map_label=f.label,
        note="lambda_hat is a sampled supremum (lower bound for the true lambda); "
             "the implied bound on mu is heuristic",
    )
