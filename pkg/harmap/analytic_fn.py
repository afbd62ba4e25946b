"""
단위 원판 위 해석 함수와 3차까지의 도함수(jet) 계산.

모든 함수는 스칼라 또는 numpy 복소 배열을 받아 같은 모양의 결과를 돌려준다.
분수 거듭제곱은 주가지(principal branch)를 사용한다. (1+z), (1-z), (1+cz) (|c|<=1)
는 원판에서 오른쪽 반평면에 있으므로 주가지가 원판 전체에서 일가(single-valued)이다.
"""
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import Sequence, Tuple, Union

import numpy as np
from numpy.polynomial import polynomial as P
from numpy.polynomial.legendre import leggauss

from .config import DEFAULT_TOLERANCES
from .utils.error_handlers import DomainError, RepresentationError

ComplexLike = Union[complex, float, np.ndarray]


@dataclass(frozen=True)
class Jet3:
    """z 에서의 함수값과 1, 2, 3차 도함수"""
    f0: ComplexLike
    f1: ComplexLike
    f2: ComplexLike
    f3: ComplexLike

    def as_tuple(self) -> Tuple[ComplexLike, ComplexLike, ComplexLike, ComplexLike]:
        return (self.f0, self.f1, self.f2, self.f3)


def as_disk_points(z: ComplexLike, margin: float = None) -> np.ndarray:
    """복소 배열로 변환하고 |z| <= 1 - margin 인지 확인"""
    if margin is None:
        margin = DEFAULT_TOLERANCES.boundary_margin
    arr = np.asarray(z, dtype=complex)
    if not np.all(np.isfinite(arr)):
        raise DomainError(complex(arr.flat[int(np.argmin(np.isfinite(arr).ravel()))]), 1.0 - margin)
    radius = np.abs(arr)
    limit = 1.0 - margin
    if arr.size and radius.max() > limit:
        raise DomainError(complex(arr.flat[int(np.argmax(radius))]), limit)
    return arr


def _scalarize(jet: Jet3, scalar: bool) -> Jet3:
    if not scalar:
        return jet
    return Jet3(*(complex(v) for v in jet.as_tuple()))


class AnalyticFunction(ABC):
    """원판 위 해석 함수. 생성 후 불변."""

    @property
    def label(self) -> str:
        return type(self).__name__

    def jet(self, z: ComplexLike) -> Jet3:
        scalar = np.ndim(z) == 0
        arr = as_disk_points(z)
        return _scalarize(self._jet(arr), scalar)

    def __call__(self, z: ComplexLike) -> ComplexLike:
        return self.jet(z).f0

    @abstractmethod
    def _jet(self, z: np.ndarray) -> Jet3:
        ...


@dataclass(frozen=True)
class TaylorSeries(AnalyticFunction):
    """절단 테일러 다항식 c_0 + c_1 z + ... + c_N z^N (N >= 3)"""
    coeffs: Tuple[complex, ...]

    def __post_init__(self):
        if len(self.coeffs) < 4:
            raise RepresentationError(
                f"Taylor representation needs at least 4 coefficients, got {len(self.coeffs)}"
            )

    @property
    def label(self) -> str:
        return f"taylor(N={len(self.coeffs) - 1})"

    def _jet(self, z: np.ndarray) -> Jet3:
        c0 = np.asarray(self.coeffs, dtype=complex)
        c1 = P.polyder(c0)
        c2 = P.polyder(c1)
        c3 = P.polyder(c2)
        return Jet3(P.polyval(z, c0), P.polyval(z, c1), P.polyval(z, c2), P.polyval(z, c3))


def taylor_from_coeffs(coeffs: Sequence[complex]) -> TaylorSeries:
    return TaylorSeries(tuple(complex(c) for c in coeffs))


def eval_jet(fn: AnalyticFunction, z: ComplexLike) -> Jet3:
    return fn.jet(z)


@dataclass(frozen=True)
class PowerSum(AnalyticFunction):
    """
    c + γ·log(1-z) + Σ a_j (1-z)^(-p_j)

    z=1 에 특이점이 모인 카탈로그 함수(반평면, Koebe, 조화 Koebe, 로그 예제,
    오목 예제)를 모두 이 형태로 쓴다.
    """
    terms: Tuple[Tuple[float, complex], ...]
    log_coef: complex = 0.0
    constant: complex = 0.0
    name: str = "power_sum"

    @property
    def label(self) -> str:
        return self.name

    def _jet(self, z: np.ndarray) -> Jet3:
        w = 1.0 - z
        f0 = np.full(z.shape, self.constant, dtype=complex)
        f1 = np.zeros(z.shape, dtype=complex)
        f2 = np.zeros(z.shape, dtype=complex)
        f3 = np.zeros(z.shape, dtype=complex)
        for p, a in self.terms:
            base = w ** (-p)
            f0 = f0 + a * base
            f1 = f1 + a * p * base / w
            f2 = f2 + a * p * (p + 1) * base / w**2
            f3 = f3 + a * p * (p + 1) * (p + 2) * base / w**3
        if self.log_coef != 0:
            f0 = f0 + self.log_coef * np.log(w)
            f1 = f1 - self.log_coef / w
            f2 = f2 - self.log_coef / w**2
            f3 = f3 - 2.0 * self.log_coef / w**3
        return Jet3(f0, f1, f2, f3)


@dataclass(frozen=True)
class PowerProduct(AnalyticFunction):
    """scale·Π (1 + c_k z)^(p_k),  |c_k| <= 1. 도함수는 로그 도함수로 계산."""
    factors: Tuple[Tuple[complex, float], ...]
    scale: complex = 1.0

    def _jet(self, z: np.ndarray) -> Jet3:
        log_value = np.zeros(z.shape, dtype=complex)
        l1 = np.zeros(z.shape, dtype=complex)
        l2 = np.zeros(z.shape, dtype=complex)
        l3 = np.zeros(z.shape, dtype=complex)
        for c, p in self.factors:
            if p == 0 or c == 0:
                continue
            base = 1.0 + c * z
            log_value = log_value + p * np.log(base)
            q = c / base
            l1 = l1 + p * q
            l2 = l2 - p * q**2
            l3 = l3 + 2.0 * p * q**3
        f0 = self.scale * np.exp(log_value)
        return Jet3(
            f0,
            f0 * l1,
            f0 * (l1**2 + l2),
            f0 * (l1**3 + 3.0 * l1 * l2 + l3),
        )


# 구간 [0, z] 위 가우스-르장드르 노드
_GL_NODES, _GL_WEIGHTS = leggauss(48)
_GL_S = 0.5 * (_GL_NODES + 1.0)
_GL_W = 0.5 * _GL_WEIGHTS


@dataclass(frozen=True)
class Primitive(AnalyticFunction):
    """F(0) = constant, F' = derivative 인 원시함수. 값은 [0, z] 위 구적으로 계산."""
    derivative: AnalyticFunction
    constant: complex = 0.0

    @property
    def label(self) -> str:
        return f"primitive({self.derivative.label})"

    def _value(self, z: np.ndarray) -> np.ndarray:
        nodes = z[..., None] * _GL_S
        integrand = self.derivative._jet(nodes).f0
        return self.constant + z * np.sum(integrand * _GL_W, axis=-1)

    def _jet(self, z: np.ndarray) -> Jet3:
        d = self.derivative._jet(z)
        return Jet3(self._value(z), d.f0, d.f1, d.f2)


@dataclass(frozen=True)
class KAlpha(AnalyticFunction):
    """k_α(z) = (1/(2α))[((1+z)/(1-z))^α - 1],  k_α'(z) = (1+z)^(α-1)/(1-z)^(α+1)"""
    alpha: float
    _derivative: PowerProduct = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(
            self, "_derivative",
            PowerProduct(((1.0, self.alpha - 1.0), (-1.0, -self.alpha - 1.0)))
        )

    @property
    def label(self) -> str:
        return f"k_alpha({self.alpha:g})"

    def _jet(self, z: np.ndarray) -> Jet3:
        u = (1.0 + z) / (1.0 - z)
        value = (u ** self.alpha - 1.0) / (2.0 * self.alpha)
        d = self.derivative_jet(z)
        return Jet3(value, d.f0, d.f1, d.f2)

    def derivative_jet(self, z: np.ndarray) -> Jet3:
        return self._derivative._jet(z)


@dataclass(frozen=True)
class LinearCombination(AnalyticFunction):
    """Σ coef_k·fn_k + constant"""
    terms: Tuple[Tuple[complex, AnalyticFunction], ...]
    constant: complex = 0.0
    name: str = ""

    @property
    def label(self) -> str:
        if self.name:
            return self.name
        return " + ".join(f"({complex(c):g})·{fn.label}" for c, fn in self.terms)

    def _jet(self, z: np.ndarray) -> Jet3:
        f0 = np.full(z.shape, self.constant, dtype=complex)
        f1 = np.zeros(z.shape, dtype=complex)
        f2 = np.zeros(z.shape, dtype=complex)
        f3 = np.zeros(z.shape, dtype=complex)
        for coef, fn in self.terms:
            if coef == 0:
                continue
            j = fn._jet(z)
            f0 = f0 + coef * j.f0
            f1 = f1 + coef * j.f1
            f2 = f2 + coef * j.f2
            f3 = f3 + coef * j.f3
        return Jet3(f0, f1, f2, f3)


ZERO = TaylorSeries((0j, 0j, 0j, 0j))
IDENTITY = TaylorSeries((0j, 1 + 0j, 0j, 0j))


@dataclass(frozen=True)
class Composition(AnalyticFunction):
    """outer∘inner. inner 는 원판을 원판으로 보내는 해석 함수."""
    outer: AnalyticFunction
    inner: AnalyticFunction

    @property
    def label(self) -> str:
        return f"{self.outer.label}∘{self.inner.label}"

    def _jet(self, z: np.ndarray) -> Jet3:
        s = self.inner._jet(z)
        o = self.outer._jet(as_disk_points(s.f0))
        # Faà di Bruno, 3차까지
        return Jet3(
            o.f0,
            o.f1 * s.f1,
            o.f2 * s.f1**2 + o.f1 * s.f2,
            o.f3 * s.f1**3 + 3.0 * o.f2 * s.f1 * s.f2 + o.f1 * s.f3,
        )
