"""
쌍곡 원판 유틸리티, 궤적 ODE 적분, 왜곡 정리 검증.

쌍곡 밀도는 λ_D(z) = 1/(1-|z|²), 거리는 ρ(z,w) = arctanh|(z-w)/(1-conj(w)z)|.
이 규약에서 z₀ = 0 일 때 exp(2αρ(0,r)) = ((1+r)/(1-r))^α 이다.

궤적 z(t) 는 z'(t) = (1-|z|²)/(2t A_f(z)) 의 해이며 매개변수 t 는 점의
수준값 (1-|z|²) J_f^{1/2}(z) 과 같다.
"""
from dataclasses import dataclass, field
from typing import Any, Dict, List, Literal, Optional, Sequence, Tuple

import numpy as np

from .analytic_fn import AnalyticFunction, ComplexLike, KAlpha, LinearCombination, PowerProduct, Primitive
from .config import DEFAULT_TOLERANCES, Tolerances
from .harmonic_map import HarmonicMap
from .logger import get_logger
from .operators import operator_fields
from .utils.error_handlers import (
    DomainError,
    IntegrationError,
    InvalidParameterError,
    OrientationError,
)

logger = get_logger("geometry")

Side = Literal['right', 'left']

REASON_T_SPAN = "t-span reached"
REASON_BOUNDARY = "boundary proximity"
REASON_ZERO_A = "A_f near zero"
REASON_STEP_FAILURE = "step failure"


def _open_disk(z: ComplexLike) -> np.ndarray:
    arr = np.asarray(z, dtype=complex)
    outside = ~(np.abs(arr) < 1.0)
    if np.any(outside):
        i = int(np.argmax(np.ravel(outside)))
        raise DomainError(complex(np.ravel(arr)[i]), 1.0)
    return arr


def hyperbolic_density(z: ComplexLike) -> ComplexLike:
    arr = _open_disk(z)
    return 1.0 / (1.0 - np.abs(arr) ** 2)


def hyperbolic_distance(z: ComplexLike, w: ComplexLike) -> ComplexLike:
    """ρ(z,w) = arctanh|(z-w)/(1-conj(w)z)|"""
    za, wa = _open_disk(z), _open_disk(w)
    pseudo = np.abs(za - wa) / np.abs(1.0 - np.conj(wa) * za)
    rho = np.arctanh(np.minimum(pseudo, 1.0))
    return float(rho) if np.ndim(rho) == 0 else rho


def level_value(f: HarmonicMap, z: ComplexLike, tol: Tolerances = DEFAULT_TOLERANCES) -> ComplexLike:
    """t = (1-|z|²) J_f(z)^{1/2}"""
    fields = operator_fields(f, z, False, tol)
    if np.any(fields.J <= 0):
        i = int(np.argmax(fields.J <= 0))
        raise OrientationError(complex(fields.z[i]), float(fields.J[i]), f.label)
    level = (1.0 - np.abs(fields.z) ** 2) * np.sqrt(fields.J)
    return float(level[0]) if np.ndim(z) == 0 else level.reshape(np.shape(z))


@dataclass(frozen=True)
class Trajectory:
    t: Tuple[float, ...]
    z: Tuple[complex, ...]
    map_label: str
    tolerances: Dict[str, float]
    reason: str
    rejected_steps: int = 0

    @property
    def states(self) -> List[Tuple[float, complex]]:
        return list(zip(self.t, self.z))

    def __len__(self) -> int:
        return len(self.t)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "map": self.map_label,
            "reason": self.reason,
            "tolerances": self.tolerances,
            "rejected_steps": self.rejected_steps,
            "states": [[t, z.real, z.imag] for t, z in self.states],
        }


# Dormand-Prince 5(4) 계수
_C = (0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0)
_A = (
    (),
    (1.0 / 5.0,),
    (3.0 / 40.0, 9.0 / 40.0),
    (44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0),
    (19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0),
    (9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0),
    (35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0),
)
_B5 = (35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0, 0.0)
_B4 = (5179.0 / 57600.0, 0.0, 7571.0 / 16695.0, 393.0 / 640.0, -92097.0 / 339200.0, 187.0 / 2100.0, 1.0 / 40.0)
_E = tuple(b5 - b4 for b5, b4 in zip(_B5, _B4))


class _StageOutside(Exception):
    pass


class TrajectoryIntegrator:
    """z'(t) = (1-|z|²)/(2t A_f(z)) 의 적응 Dormand-Prince 적분기"""

    def __init__(self, f: HarmonicMap, tol: float = 1e-8, tolerances: Tolerances = DEFAULT_TOLERANCES,
                 max_steps: int = 100000):
        if tol <= 0:
            raise InvalidParameterError(f"integration tolerance must be > 0, got {tol}")
        self.f = f
        self.tol = tol
        self.tolerances = tolerances
        self.max_steps = max_steps
        self._stage_limit = 1.0 - tolerances.boundary_margin

    def a_value(self, z: complex) -> complex:
        return complex(operator_fields(self.f, z, False, self.tolerances).A[0])

    def field(self, t: float, z: complex) -> complex:
        if not abs(z) <= self._stage_limit:
            raise _StageOutside()
        return (1.0 - abs(z) ** 2) / (2.0 * t * self.a_value(z))

    def step(self, t: float, z: complex, h: float) -> Tuple[complex, complex]:
        """한 단계: (5차 해, 국소 오차 추정)"""
        k = []
        for i in range(7):
            zi = z + h * sum(a * kj for a, kj in zip(_A[i], k))
            k.append(self.field(t + _C[i] * h, zi))
        z_new = z + h * sum(b * kj for b, kj in zip(_B5, k))
        err = h * sum(e * kj for e, kj in zip(_E, k))
        return z_new, err

    def run(self, z0: complex, t_end: float) -> Trajectory:
        z0 = complex(z0)
        if t_end <= 0:
            raise InvalidParameterError(f"t_end must be > 0, got {t_end}")
        t0 = level_value(self.f, z0, self.tolerances)
        if abs(self.a_value(z0)) < self.tolerances.trajectory_zero_a:
            raise IntegrationError(f"A_f(z0) vanishes at z0 = {z0}; trajectory field undefined", z0)

        ts, zs = [t0], [z0]
        t, z = t0, z0
        direction = 1.0 if t_end >= t0 else -1.0
        h = direction * self.tol ** 0.2 * t0
        boundary = 1.0 - self.tolerances.trajectory_boundary
        reason = REASON_T_SPAN
        rejected = 0
        steps = 0

        while t != t_end:
            if steps >= self.max_steps:
                reason = REASON_STEP_FAILURE
                break
            steps += 1
            remaining = t_end - t
            last = abs(h) >= abs(remaining)
            if last:
                h = remaining
            try:
                z_new, err = self.step(t, z, h)
            except _StageOutside:
                rejected += 1
                h *= 0.5
                if abs(h) < 1e-14 * abs(t):
                    reason = REASON_STEP_FAILURE
                    break
                continue

            ratio = abs(err) / (self.tol + self.tol * max(abs(z), abs(z_new)))
            if ratio <= 1.0:
                t = t_end if last else t + h
                z = z_new
                ts.append(t)
                zs.append(z)
                if abs(z) > boundary:
                    reason = REASON_BOUNDARY
                    break
                if abs(self.a_value(z)) < self.tolerances.trajectory_zero_a:
                    reason = REASON_ZERO_A
                    break
            else:
                rejected += 1

            factor = 5.0 if ratio == 0 else 0.9 * ratio ** -0.2
            h *= min(5.0, max(0.2, factor))
            if abs(h) < 1e-14 * abs(t):
                reason = REASON_STEP_FAILURE
                break

        if reason == REASON_STEP_FAILURE:
            logger.warning(f"{self.f.label}: trajectory from {z0} stopped at t = {t} ({reason})")
        logger.debug(f"{self.f.label}: trajectory {len(ts)} states, {rejected} rejected, {reason}")
        return Trajectory(
            t=tuple(ts),
            z=tuple(zs),
            map_label=self.f.label,
            tolerances={
                "tol": self.tol,
                "boundary": self.tolerances.trajectory_boundary,
                "zero_a": self.tolerances.trajectory_zero_a,
            },
            reason=reason,
            rejected_steps=rejected,
        )


def integrate_trajectory(
    f: HarmonicMap,
    z0: complex,
    t_end: float,
    tol: float = 1e-8,
    tolerances: Tolerances = DEFAULT_TOLERANCES,
) -> Trajectory:
    """t₀ = level_value(f, z0) 에서 t_end 까지 (양방향)"""
    return TrajectoryIntegrator(f, tol, tolerances).run(z0, t_end)


def trajectory_levels(f: HarmonicMap, traj: Trajectory) -> np.ndarray:
    return np.atleast_1d(level_value(f, np.asarray(traj.z, dtype=complex)))


def trajectory_drift(f: HarmonicMap, traj: Trajectory) -> np.ndarray:
    t = np.asarray(traj.t, dtype=float)
    return np.abs(trajectory_levels(f, traj) - t) / t


def check_level_consistency(f: HarmonicMap, traj: Trajectory) -> float:
    """max |level(z) - t| / t"""
    return float(np.max(trajectory_drift(f, traj)))


@dataclass(frozen=True)
class GrowthReport:
    map_label: str
    mu: float
    passed: bool
    min_margin: float
    witness: Optional[Tuple[int, int]]
    n_pairs: int

    def to_dict(self) -> Dict[str, Any]:
        return {
            "map": self.map_label,
            "mu": self.mu,
            "pass": self.passed,
            "min_margin": self.min_margin,
            "witness": list(self.witness) if self.witness else None,
            "n_pairs": self.n_pairs,
        }


def verify_growth_bound(
    f: HarmonicMap, traj: Trajectory, mu: float, tolerance: float = 1e-7
) -> GrowthReport:
    """
    상태 쌍 (t_i < t_j) 마다 t_j/t_i >= exp(2μρ(z_i, z_j)).
    margin 은 로그 척도: log(t_j/t_i) - 2μρ(z_i, z_j).
    """
    order = np.argsort(np.asarray(traj.t))
    t = np.asarray(traj.t, dtype=float)[order]
    z = np.asarray(traj.z, dtype=complex)[order]
    if t.size < 2:
        return GrowthReport(f.label, mu, True, 0.0, None, 0)
    i, j = np.triu_indices(t.size, k=1)
    margins = np.log(t[j] / t[i]) - 2.0 * mu * hyperbolic_distance(z[i], z[j])
    k = int(np.argmin(margins))
    return GrowthReport(
        map_label=f.label,
        mu=mu,
        passed=bool(margins[k] >= -tolerance),
        min_margin=float(margins[k]),
        witness=(int(order[i[k]]), int(order[j[k]])),
        n_pairs=int(margins.size),
    )


def jacobian_bounds(alpha: float, r: float) -> Tuple[float, float]:
    """J_f(z)/J_f(0) 의 |z| = r 에서의 하한과 상한"""
    if alpha < 0:
        raise InvalidParameterError(f"alpha must be >= 0, got {alpha}")
    if not 0.0 <= r < 1.0:
        raise DomainError(complex(r), 1.0)
    lo = (1.0 - r) ** (2 * alpha - 2) / (1.0 + r) ** (2 * alpha + 2)
    hi = (1.0 + r) ** (2 * alpha - 2) / (1.0 - r) ** (2 * alpha + 2)
    return lo, hi


@dataclass(frozen=True)
class DistortionPair:
    z0: complex
    z1: complex
    ratio: float
    lo: float
    hi: float
    pass_lower: bool
    pass_upper: bool
    margin_lower: float
    margin_upper: float
    left_equality: bool
    right_equality: bool

    @property
    def passed(self) -> bool:
        return self.pass_lower and self.pass_upper

    def to_dict(self) -> Dict[str, Any]:
        return {
            "z0": [self.z0.real, self.z0.imag],
            "z1": [self.z1.real, self.z1.imag],
            "ratio": self.ratio,
            "lo": self.lo,
            "hi": self.hi,
            "pass": self.passed,
            "margin_lower": self.margin_lower,
            "margin_upper": self.margin_upper,
            "left_equality": self.left_equality,
            "right_equality": self.right_equality,
        }


@dataclass(frozen=True)
class DistortionReport:
    map_label: str
    alpha: float
    pairs: List[DistortionPair] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(p.passed for p in self.pairs)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "map": self.map_label,
            "alpha": self.alpha,
            "pass": self.passed,
            "n_pairs": len(self.pairs),
            "n_failed": sum(not p.passed for p in self.pairs),
            "n_left_equality": sum(p.left_equality for p in self.pairs),
            "n_right_equality": sum(p.right_equality for p in self.pairs),
            "pairs": [p.to_dict() for p in self.pairs],
        }


def verify_distortion(
    f: HarmonicMap,
    alpha: float,
    pairs: Sequence[Tuple[complex, complex]],
    rel_tol: float = 1e-9,
    tol: Tolerances = DEFAULT_TOLERANCES,
) -> DistortionReport:
    """exp(-2αρ) <= (1-|z₁|²)J^{1/2}(z₁) / ((1-|z₀|²)J^{1/2}(z₀)) <= exp(2αρ)"""
    if alpha < 0:
        raise InvalidParameterError(f"alpha must be >= 0, got {alpha}")
    if len(pairs) == 0:
        return DistortionReport(f.label, alpha, [])
    z0 = np.asarray([p[0] for p in pairs], dtype=complex)
    z1 = np.asarray([p[1] for p in pairs], dtype=complex)
    ratio = np.atleast_1d(level_value(f, z1, tol)) / np.atleast_1d(level_value(f, z0, tol))
    rho = np.atleast_1d(hyperbolic_distance(z0, z1))
    lo = np.exp(-2.0 * alpha * rho)
    hi = np.exp(2.0 * alpha * rho)
    margin_lower = ratio / lo - 1.0
    margin_upper = hi / ratio - 1.0

    result = [
        DistortionPair(
            z0=complex(z0[k]),
            z1=complex(z1[k]),
            ratio=float(ratio[k]),
            lo=float(lo[k]),
            hi=float(hi[k]),
            pass_lower=bool(margin_lower[k] >= -rel_tol),
            pass_upper=bool(margin_upper[k] >= -rel_tol),
            margin_lower=float(margin_lower[k]),
            margin_upper=float(margin_upper[k]),
            left_equality=bool(rho[k] > 0 and abs(margin_lower[k]) <= rel_tol),
            right_equality=bool(rho[k] > 0 and abs(margin_upper[k]) <= rel_tol),
        )
        for k in range(z0.size)
    ]
    report = DistortionReport(f.label, alpha, result)
    logger.debug(f"{f.label}: distortion alpha={alpha} over {len(result)} pairs, pass={report.passed}")
    return report


def random_pairs(rng: np.random.Generator, n: int, r_max: float = 0.95) -> List[Tuple[complex, complex]]:
    """|z| <= r_max 에서 면적 균등 무작위 점 쌍"""
    r = r_max * np.sqrt(rng.random((n, 2)))
    theta = 2.0 * np.pi * rng.random((n, 2))
    z = r * np.exp(1j * theta)
    return [(complex(a), complex(b)) for a, b in z]


def hyperbolic_segment(z0: complex, z1: complex, n: int) -> np.ndarray:
    """z0 에서 z1 까지 쌍곡 측지선 위 등간격 n 개 점 (양 끝 포함)"""
    if n < 2:
        raise InvalidParameterError(f"segment needs at least 2 points, got {n}")
    z0, z1 = complex(z0), complex(z1)
    _open_disk(np.array([z0, z1]))
    w1 = (z1 - z0) / (1.0 - z0.conjugate() * z1)
    if w1 == 0:
        return np.full(n, z0, dtype=complex)
    length = np.arctanh(abs(w1))
    w = np.tanh(np.linspace(0.0, length, n)) * (w1 / abs(w1))
    points = (w + z0) / (1.0 + z0.conjugate() * w)
    points[0], points[-1] = z0, z1
    return points


@dataclass(frozen=True)
class EqualityReport:
    map_label: str
    alpha: float
    side: str
    passed: bool
    max_deviation: float
    n_pairs: int

    def to_dict(self) -> Dict[str, Any]:
        return {
            "map": self.map_label,
            "alpha": self.alpha,
            "side": self.side,
            "pass": self.passed,
            "max_deviation": self.max_deviation,
            "n_pairs": self.n_pairs,
        }


def verify_equality_propagation(
    f: HarmonicMap,
    alpha: float,
    z0: complex,
    z1: complex,
    n: int = 8,
    side: Side = 'right',
    rel_tol: float = 1e-9,
) -> EqualityReport:
    """측지 구간 위 모든 점 쌍에서 왜곡 부등식의 등호 확인"""
    points = hyperbolic_segment(z0, z1, n)
    levels = np.atleast_1d(level_value(f, points))
    i, j = np.triu_indices(n, k=1)
    sign = 1.0 if side == 'right' else -1.0
    expected = np.exp(sign * 2.0 * alpha * hyperbolic_distance(points[i], points[j]))
    deviation = np.abs((levels[j] / levels[i]) / expected - 1.0)
    return EqualityReport(
        map_label=f.label,
        alpha=alpha,
        side=side,
        passed=bool(np.max(deviation) <= rel_tol),
        max_deviation=float(np.max(deviation)),
        n_pairs=int(deviation.size),
    )


def hyperbolic_length(traj: Trajectory) -> float:
    """연속 상태 사이 쌍곡 거리의 합"""
    z = np.asarray(traj.z, dtype=complex)
    if z.size < 2:
        return 0.0
    return float(np.sum(hyperbolic_distance(z[:-1], z[1:])))


def bloch_growth_probe(f: HarmonicMap, traj: Trajectory) -> Dict[str, Any]:
    """t 증가 방향으로 본 궤적 위 수준값의 단조성과 최댓값"""
    levels = trajectory_levels(f, traj)
    order = np.argsort(np.asarray(traj.t))
    ordered = levels[order]
    return {
        "map": f.label,
        "monotone": bool(np.all(np.diff(ordered) >= 0)),
        "max_level": float(np.max(levels)),
        "first_level": float(ordered[0]),
        "last_level": float(ordered[-1]),
        "hyperbolic_length": hyperbolic_length(traj),
        "reason": traj.reason,
    }


def reconstruct_extremal_h(
    alpha: float,
    theta: float = 0.0,
    omega0: complex = 0j,
    side: Side = 'right',
    rho: Optional[complex] = None,
) -> AnalyticFunction:
    """
    h(0) = 0, h'(0) = 1 이고
      h''/h' = ωω'/(1-ω²) ± 2e^{-iθ}(α ± e^{-iθ}z)/(1-(e^{-iθ}z)²)
    를 만족하는 해석 함수. ω 는 상수 omega0, 또는 rho 가 주어지면 ω(z) = ρz.

    side='right': h'(z) = (1+u)^{α-1}/(1-u)^{α+1},  u = e^{-iθ}z
    side='left':  h'(z) = (1-u)^{α-1}/(1+u)^{α+1}
    """
    if alpha <= 0:
        raise InvalidParameterError(f"alpha must be > 0, got {alpha}")
    if not abs(complex(omega0)) < 1:
        raise InvalidParameterError(f"|omega0| must be < 1, got {abs(complex(omega0))}")
    if side not in ('right', 'left'):
        raise InvalidParameterError(f"side must be 'right' or 'left', got {side!r}")
    if rho is not None and not abs(complex(rho)) <= 1:
        raise InvalidParameterError(f"|rho| must be <= 1, got {abs(complex(rho))}")

    if side == 'right' and theta == 0.0 and rho is None:
        return KAlpha(alpha)

    c = complex(np.exp(-1j * theta))
    if side == 'right':
        factors = [(c, alpha - 1.0), (-c, -alpha - 1.0)]
    else:
        factors = [(-c, alpha - 1.0), (c, -alpha - 1.0)]
    if rho is not None and rho != 0:
        rho = complex(rho)
        factors += [(-rho, -0.5), (rho, -0.5)]
    return Primitive(PowerProduct(tuple(factors)))


def extremal_map(
    alpha: float, theta: float = 0.0, omega0: complex = 0j, side: Side = 'right'
) -> HarmonicMap:
    """상수 복소 팽창률 ω₀ 의 극값 조화 사상 h + conj(ω₀ h)"""
    h = reconstruct_extremal_h(alpha, theta, omega0, side)
    omega0 = complex(omega0)
    g = LinearCombination(((omega0, h),), name=f"{omega0:g}·h")
    return HarmonicMap(h, g, f"extremal(alpha={alpha:g},theta={theta:g},omega0={omega0:g},{side})")
