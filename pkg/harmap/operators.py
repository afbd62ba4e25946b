"""
전-슈바르츠 미분 P_f, 연산자 A_f, 조화 슈바르츠 미분 S_f.

  P_f = h''/h' - conj(ω)ω'/(1-|ω|²)
  A_f = ((1-|z|²)/2) P_f - conj(z)
  ∂_z P_f = (h'''h' - h''²)/h'² - [conj(ω)ω''/(1-|ω|²) + (conj(ω)ω')²/(1-|ω|²)²]
  S_f = ∂_z P_f - P_f²/2

conj(ω) 는 반해석 함수이므로 ∂_z conj(ω) = 0 으로 두고 미분한다.
"""
from dataclasses import dataclass
from typing import Any, Callable, Dict, Optional

import numpy as np

from .analytic_fn import AnalyticFunction, ComplexLike, as_disk_points
from .config import DEFAULT_TOLERANCES, Tolerances
from .harmonic_map import HarmonicMap, check_h_prime, one_minus_abs2
from .utils.error_handlers import DomainError, SingularityError


@dataclass(frozen=True)
class OperatorFields:
    """점 배열 위 연산자 값들"""
    z: np.ndarray
    P: np.ndarray
    A: np.ndarray
    S: Optional[np.ndarray]
    J: np.ndarray
    omega: np.ndarray
    omega1: np.ndarray
    gap: np.ndarray


@dataclass(frozen=True)
class OperatorSample:
    z: complex
    P: complex
    A: complex
    S: Optional[complex]
    map_label: str

    def to_dict(self) -> Dict[str, Any]:
        data = {
            "map": self.map_label,
            "z": [self.z.real, self.z.imag],
            "P": [self.P.real, self.P.imag],
            "A": [self.A.real, self.A.imag],
            "abs_A": abs(self.A),
        }
        if self.S is not None:
            data["S"] = [self.S.real, self.S.imag]
        return data


@dataclass(frozen=True)
class WirtingerPair:
    dz: complex
    dzbar: complex


def _check_gap(gap: np.ndarray, z: np.ndarray, label: str, tol: Tolerances) -> None:
    small = gap < tol.omega_gap_floor
    if np.any(small):
        i = int(np.argmax(np.ravel(small)))
        raise SingularityError(
            "1-|omega|^2", complex(np.ravel(z)[i]), float(np.ravel(gap)[i]), tol.omega_gap_floor, label
        )


def _dilatation_jet(f: HarmonicMap, hj, gj, arr: np.ndarray):
    """ω, ω', ω'' 과 1-|ω|²"""
    if f.omega is not None:
        wj = f.omega._jet(arr)
        return wj.f0, wj.f1, wj.f2, one_minus_abs2(wj.f0)
    omega = gj.f1 / hj.f1
    omega1 = (gj.f2 - omega * hj.f2) / hj.f1
    omega2 = (gj.f3 - 2.0 * omega1 * hj.f2 - omega * hj.f3) / hj.f1
    # (|h'|-|g'|)(|h'|+|g'|)/|h'|²
    abs_h1, abs_g1 = np.abs(hj.f1), np.abs(gj.f1)
    gap = (abs_h1 - abs_g1) * (abs_h1 + abs_g1) / abs_h1**2
    return omega, omega1, omega2, gap


def operator_fields(
    f: HarmonicMap,
    z: ComplexLike,
    with_schwarzian: bool = True,
    tol: Tolerances = DEFAULT_TOLERANCES,
) -> OperatorFields:
    arr = as_disk_points(np.atleast_1d(z), tol.boundary_margin)
    hj = f.h._jet(arr)
    gj = f.g._jet(arr)
    check_h_prime(hj.f1, arr, f.label, tol)

    omega, omega1, omega2, gap = _dilatation_jet(f, hj, gj, arr)
    _check_gap(gap, arr, f.label, tol)

    log_h = hj.f2 / hj.f1
    correction = np.conj(omega) * omega1 / gap
    P = log_h - correction
    A = 0.5 * one_minus_abs2(arr) * P - np.conj(arr)

    S = None
    if with_schwarzian:
        dP = (hj.f3 * hj.f1 - hj.f2**2) / hj.f1**2 - (
            np.conj(omega) * omega2 / gap + correction**2
        )
        S = dP - 0.5 * P**2

    J = np.abs(hj.f1) ** 2 - np.abs(gj.f1) ** 2
    return OperatorFields(z=arr, P=P, A=A, S=S, J=J, omega=omega, omega1=omega1, gap=gap)


def _same_shape(values: np.ndarray, z: ComplexLike) -> ComplexLike:
    if np.ndim(z) == 0:
        return complex(values[0])
    return values.reshape(np.shape(z))


def pre_schwarzian(f: HarmonicMap, z: ComplexLike, tol: Tolerances = DEFAULT_TOLERANCES) -> ComplexLike:
    return _same_shape(operator_fields(f, z, False, tol).P, z)


def a_operator(f: HarmonicMap, z: ComplexLike, tol: Tolerances = DEFAULT_TOLERANCES) -> ComplexLike:
    return _same_shape(operator_fields(f, z, False, tol).A, z)


def schwarzian(f: HarmonicMap, z: ComplexLike, tol: Tolerances = DEFAULT_TOLERANCES) -> ComplexLike:
    return _same_shape(operator_fields(f, z, True, tol).S, z)


def a_operator_analytic(h: AnalyticFunction, z: ComplexLike, tol: Tolerances = DEFAULT_TOLERANCES) -> ComplexLike:
    """A_h = ((1-|z|²)/2) h''/h' - conj(z)"""
    arr = as_disk_points(np.atleast_1d(z), tol.boundary_margin)
    hj = h._jet(arr)
    check_h_prime(hj.f1, arr, h.label, tol)
    A = 0.5 * (1.0 - np.abs(arr) ** 2) * (hj.f2 / hj.f1) - np.conj(arr)
    return _same_shape(A, z)


def operator_sample(
    f: HarmonicMap, z: complex, with_schwarzian: bool = True, tol: Tolerances = DEFAULT_TOLERANCES
) -> OperatorSample:
    fields = operator_fields(f, complex(z), with_schwarzian, tol)
    return OperatorSample(
        z=complex(z),
        P=complex(fields.P[0]),
        A=complex(fields.A[0]),
        S=complex(fields.S[0]) if fields.S is not None else None,
        map_label=f.label,
    )


def wirtinger_fd(
    field: Callable[[complex], complex],
    z: complex,
    step: float = 1e-5,
    tol: Tolerances = DEFAULT_TOLERANCES,
) -> WirtingerPair:
    """중심 차분: ∂_z = (∂_x - i∂_y)/2, ∂_zbar = (∂_x + i∂_y)/2"""
    z = complex(z)
    limit = 1.0 - tol.stencil_margin
    if abs(z) + step > limit:
        raise DomainError(z + step * z / abs(z) if z != 0 else z + step, limit)
    dx = (field(z + step) - field(z - step)) / (2.0 * step)
    dy = (field(z + 1j * step) - field(z - 1j * step)) / (2.0 * step)
    return WirtingerPair(dz=complex(0.5 * (dx - 1j * dy)), dzbar=complex(0.5 * (dx + 1j * dy)))


def log_density(f: HarmonicMap, z: complex) -> float:
    """log((1-|z|²) J_f^{1/2})"""
    fields = operator_fields(f, complex(z), False)
    return float(np.log(1.0 - abs(z) ** 2) + 0.5 * np.log(fields.J[0]))


def log_density_gradient_check(
    f: HarmonicMap, z: complex, step: float = 1e-5, tol: Tolerances = DEFAULT_TOLERANCES
) -> float:
    """|A_f(z) - (1-|z|²) ∂_z log{(1-|z|²) J_f^{1/2}}|"""
    z = complex(z)
    gradient = wirtinger_fd(lambda w: log_density(f, w), z, step, tol).dz
    return abs(a_operator(f, z, tol) - (1.0 - abs(z) ** 2) * gradient)


def chain_rule_prediction(
    f: HarmonicMap, phi: AnalyticFunction, z: ComplexLike, tol: Tolerances = DEFAULT_TOLERANCES
) -> ComplexLike:
    """
    A_{f∘φ}(z) 예측값:
      ((1-|z|²)φ'(z)/(1-|φ(z)|²))·(A_f(φ(z)) + conj(φ(z))) + A_φ(z)
    """
    arr = as_disk_points(np.atleast_1d(z), tol.boundary_margin)
    pj = phi._jet(arr)
    w = pj.f0
    A_f = np.atleast_1d(a_operator(f, w, tol))
    A_phi = np.atleast_1d(a_operator_analytic(phi, arr, tol))
    scale = (1.0 - np.abs(arr) ** 2) * pj.f1 / (1.0 - np.abs(w) ** 2)
    return _same_shape(scale * (A_f + np.conj(w)) + A_phi, z)
