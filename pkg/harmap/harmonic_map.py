"""
조화 사상 f = h + conj(g) 와 원판 자기동형 사상, 아핀 사상, Koebe 변환.

HarmonicMap 은 불변이며 모든 연산은 순수 함수이다.
"""
from dataclasses import dataclass
from typing import Any, Dict, Optional, Tuple

import numpy as np

from .analytic_fn import (
    AnalyticFunction,
    ComplexLike,
    Composition,
    Jet3,
    LinearCombination,
    as_disk_points,
)
from .config import DEFAULT_TOLERANCES, Tolerances
from .logger import get_logger
from .schemas import GridSpec
from .utils.error_handlers import InvalidParameterError, SingularityError

logger = get_logger("harmonic_map")


@dataclass(frozen=True)
class HarmonicMap:
    """
    f = h + conj(g).

    omega 는 닫힌 형태의 팽창률 ω = g'/h' (선택). 주어지면 연산자 계산에서
    g'/h' 나눗셈 대신 사용한다. |ω| → 1 근처에서 1-|ω|² 의 상쇄 오차를 피한다.
    """
    h: AnalyticFunction
    g: AnalyticFunction
    label: str = "f"
    omega: Optional[AnalyticFunction] = None

    def jets(self, z: ComplexLike) -> Tuple[Jet3, Jet3]:
        return self.h.jet(z), self.g.jet(z)

    def __call__(self, z: ComplexLike) -> ComplexLike:
        return self.h(z) + np.conj(self.g(z))

    def normalization(self) -> Dict[str, complex]:
        """h(0), h'(0), g(0), g'(0)"""
        hj, gj = self.jets(0j)
        return {"h0": hj.f0, "h1": hj.f1, "g0": gj.f0, "g1": gj.f1}

    def relabel(self, label: str) -> "HarmonicMap":
        return HarmonicMap(self.h, self.g, label, self.omega)


@dataclass(frozen=True)
class DiskAutomorphism(AnalyticFunction):
    """σ(z) = e^{iθ}(z + a)/(1 + conj(a) z)"""
    a: complex = 0j
    theta: float = 0.0

    def __post_init__(self):
        if not abs(self.a) < 1:
            raise InvalidParameterError(
                f"automorphism parameter |a| = {abs(self.a)} must be < 1",
                {"a": [complex(self.a).real, complex(self.a).imag]}
            )

    @property
    def label(self) -> str:
        return f"sigma(a={complex(self.a):g},theta={self.theta:g})"

    @property
    def rotation(self) -> complex:
        return complex(np.exp(1j * self.theta))

    def inverse(self) -> "DiskAutomorphism":
        return DiskAutomorphism(-self.a * self.rotation, -self.theta)

    def _jet(self, z: np.ndarray) -> Jet3:
        a = complex(self.a)
        abar = a.conjugate()
        q = 1.0 + abar * z
        s1 = self.rotation * (1.0 - abs(a) ** 2) / q**2
        return Jet3(
            self.rotation * (z + a) / q,
            s1,
            -2.0 * abar * s1 / q,
            6.0 * abar**2 * s1 / q**2,
        )


@dataclass(frozen=True)
class Mobius(AnalyticFunction):
    """M(w) = (p w + q)/(r w + s). 아핀 후합성에서 팽창률 변환에 사용."""
    p: complex
    q: complex
    r: complex
    s: complex

    def _jet(self, w: np.ndarray) -> Jet3:
        den = self.r * w + self.s
        m1 = (self.p * self.s - self.q * self.r) / den**2
        return Jet3(
            (self.p * w + self.q) / den,
            m1,
            -2.0 * self.r * m1 / den,
            6.0 * self.r**2 * m1 / den**2,
        )


@dataclass(frozen=True)
class AffineMap:
    """L(w) = a w + b conj(w) + c,  |b| < |a|"""
    a: complex = 1 + 0j
    b: complex = 0j
    c: complex = 0j

    def __post_init__(self):
        if self.a == 0 or not abs(self.b) < abs(self.a):
            raise InvalidParameterError(
                f"affine map needs a != 0 and |b| < |a| (a={self.a}, b={self.b})"
            )

    def __call__(self, w: ComplexLike) -> ComplexLike:
        return self.a * w + self.b * np.conj(w) + self.c


@dataclass(frozen=True)
class KoebeTransformResult:
    F0: HarmonicMap
    B1: complex
    half_H0pp0: complex


def _first_index(mask: np.ndarray) -> int:
    return int(np.argmax(np.ravel(mask)))


def check_h_prime(h1: np.ndarray, z: np.ndarray, f_label: str, tol: Tolerances = DEFAULT_TOLERANCES) -> None:
    small = np.abs(h1) < tol.h_prime_floor
    if np.any(small):
        i = _first_index(small)
        raise SingularityError(
            "|h'|", complex(np.ravel(z)[i]), float(np.abs(np.ravel(h1)[i])), tol.h_prime_floor, f_label
        )


def one_minus_abs2(w: np.ndarray) -> np.ndarray:
    """1-|w|² 를 (1-|w|)(1+|w|) 로 계산"""
    r = np.abs(w)
    return (1.0 - r) * (1.0 + r)


def dilatation(f: HarmonicMap, z: ComplexLike, tol: Tolerances = DEFAULT_TOLERANCES) -> ComplexLike:
    """ω = g'/h'"""
    arr = as_disk_points(z)
    hj = f.h._jet(arr)
    check_h_prime(hj.f1, arr, f.label, tol)
    omega = f.omega._jet(arr).f0 if f.omega is not None else f.g._jet(arr).f1 / hj.f1
    if np.any(np.abs(omega) >= 1):
        i = _first_index(np.abs(omega) >= 1)
        logger.warning(
            f"{f.label}: |omega| = {np.abs(np.ravel(omega)[i]):.6g} >= 1 at z = {complex(np.ravel(arr)[i])}"
        )
    return complex(omega) if np.ndim(z) == 0 else omega


def jacobian(f: HarmonicMap, z: ComplexLike) -> ComplexLike:
    """J_f = |h'|² - |g'|²"""
    arr = as_disk_points(z)
    J = np.abs(f.h._jet(arr).f1) ** 2 - np.abs(f.g._jet(arr).f1) ** 2
    if np.any(J <= 0):
        i = _first_index(J <= 0)
        logger.warning(f"{f.label}: J_f = {np.ravel(J)[i]:.6g} <= 0 at z = {complex(np.ravel(arr)[i])}")
    return float(J) if np.ndim(z) == 0 else J


@dataclass(frozen=True)
class SensePreservingReport:
    map_label: str
    grid: Dict[str, Any]
    passed: bool
    min_jacobian: float
    max_abs_omega: float
    witness: complex
    n_points: int

    def to_dict(self) -> Dict[str, Any]:
        return {
            "map": self.map_label,
            "grid": self.grid,
            "pass": self.passed,
            "min_jacobian": self.min_jacobian,
            "max_abs_omega": self.max_abs_omega,
            "witness": [self.witness.real, self.witness.imag],
            "n_points": self.n_points,
        }


def is_sense_preserving_sampled(f: HarmonicMap, grid: GridSpec) -> SensePreservingReport:
    """격자 위에서 J_f > 0 확인. 실패는 예외가 아닌 리포트 항목."""
    _, _, z = grid.points()
    h1 = f.h.jet(z).f1
    g1 = f.g.jet(z).f1
    J = np.abs(h1) ** 2 - np.abs(g1) ** 2
    with np.errstate(divide='ignore', invalid='ignore'):
        abs_omega = np.where(np.abs(h1) > 0, np.abs(g1) / np.abs(h1), np.inf)
    i = int(np.argmin(J))
    report = SensePreservingReport(
        map_label=f.label,
        grid=grid.model_dump(),
        passed=bool(np.all(J > 0)),
        min_jacobian=float(J[i]),
        max_abs_omega=float(np.max(abs_omega)),
        witness=complex(z[i]),
        n_points=int(z.size),
    )
    logger.debug(f"{f.label}: sense-preserving sample over {z.size} points, pass={report.passed}")
    return report


def precompose_self_map(f: HarmonicMap, phi: AnalyticFunction, label: Optional[str] = None) -> HarmonicMap:
    """f∘φ, φ 는 원판의 국소 단엽 해석 자기 사상"""
    return HarmonicMap(
        Composition(f.h, phi),
        Composition(f.g, phi),
        label or f"{f.label}∘{phi.label}",
        Composition(f.omega, phi) if f.omega is not None else None,
    )


def precompose(f: HarmonicMap, sigma: DiskAutomorphism) -> HarmonicMap:
    return precompose_self_map(f, sigma)


def postcompose_affine(L: AffineMap, f: HarmonicMap) -> HarmonicMap:
    """
    L∘f = (a h + b g + c) + conj(conj(a) g + conj(b) h)
    ω_{L∘f} = (conj(a) ω + conj(b))/(b ω + a)
    """
    a, b = complex(L.a), complex(L.b)
    H = LinearCombination(((a, f.h), (b, f.g)), constant=complex(L.c))
    G = LinearCombination(((a.conjugate(), f.g), (b.conjugate(), f.h)))
    omega = None
    if f.omega is not None:
        omega = Composition(Mobius(a.conjugate(), b.conjugate(), b, a), f.omega)
    return HarmonicMap(H, G, f"L∘{f.label}", omega)


def slice_map(f: HarmonicMap, lam: complex) -> AnalyticFunction:
    """φ_λ = h + λg"""
    return LinearCombination(((1.0 + 0j, f.h), (complex(lam), f.g)), name=f"{f.label}[lambda={complex(lam):g}]")


def koebe_transform(f: HarmonicMap, a: complex, tol: Tolerances = DEFAULT_TOLERANCES) -> KoebeTransformResult:
    """
    F(z) = (f(σ_a(z)) - f(a)) / ((1-|a|²) h'(a)),  σ_a(z) = (z + a)/(1 + conj(a) z)
    F₀ = (F - conj(B₁ F)) / (1 - |B₁|²),  B₁ = G'(0)

    F₀ 의 해석 부분 H₀ 에 대해 H₀''(0)/2 = A_f(a).
    """
    a = complex(a)
    sigma = DiskAutomorphism(a, 0.0)
    hj, gj = f.jets(a)
    check_h_prime(np.asarray(hj.f1), np.asarray(a), f.label, tol)
    c = (1.0 - abs(a) ** 2) * hj.f1

    composed = precompose(f, sigma)
    H = LinearCombination(((1.0 / c, composed.h),), constant=-hj.f0 / c)
    G = LinearCombination(((1.0 / c.conjugate(), composed.g),), constant=-gj.f0 / c.conjugate())

    B1 = gj.f1 / hj.f1.conjugate()
    gap = 1.0 - abs(B1) ** 2
    if gap < tol.omega_gap_floor:
        raise SingularityError("1-|omega|^2", a, gap, tol.omega_gap_floor, f.label)

    normalizer = AffineMap(1.0 / gap, -B1.conjugate() / gap, 0j)
    F0 = postcompose_affine(normalizer, HarmonicMap(H, G, f"F[{f.label},a={a:g}]"))
    F0 = F0.relabel(f"F0[{f.label},a={a:g}]")
    half_H0pp0 = F0.h.jet(0j).f2 / 2.0
    return KoebeTransformResult(F0=F0, B1=B1, half_H0pp0=half_H0pp0)
