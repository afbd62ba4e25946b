from typing import Any, Dict, List, Literal, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from .config import DEFAULT_TOLERANCES, Tolerances


class GridSpec(BaseModel):
    """극좌표 격자: 균등 반지름 M 개 + 이진 반지름 1-2^-k (k<=K), 각도 N 개"""
    model_config = ConfigDict(frozen=True)

    M: int = Field(64, ge=1)
    N: int = Field(256, ge=1)
    K: int = Field(20, ge=1)
    R: int = Field(40, ge=1)
    refine_tol: float = Field(1e-12, gt=0)

    @field_validator('K')
    @classmethod
    def validate_dyadic_depth(cls, K):
        # 가장 바깥 반지름이 연산자 허용 영역 안에 있어야 함
        if 2.0 ** (-K) < DEFAULT_TOLERANCES.boundary_margin:
            raise ValueError(
                f"K={K} probes beyond |z| = 1 - {DEFAULT_TOLERANCES.boundary_margin:g}"
            )
        return K

    @property
    def r_max(self) -> float:
        return 1.0 - 2.0 ** (-self.K)

    def radii(self) -> np.ndarray:
        uniform = np.linspace(0.0, self.r_max, self.M) if self.M > 1 else np.zeros(1)
        dyadic = 1.0 - 2.0 ** (-np.arange(1, self.K + 1, dtype=float))
        return np.unique(np.concatenate([uniform, dyadic]))

    def dyadic_radii(self) -> np.ndarray:
        return 1.0 - 2.0 ** (-np.arange(1, self.K + 1, dtype=float))

    def angles(self) -> np.ndarray:
        return 2.0 * np.pi * np.arange(self.N) / self.N

    def points(self) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        """(r, θ, z) 평탄 배열. 원점은 한 번만 포함."""
        radii = self.radii()
        angles = self.angles()
        positive = radii[radii > 0]
        r = np.repeat(positive, angles.size)
        theta = np.tile(angles, positive.size)
        if radii[0] == 0:
            r = np.concatenate([[0.0], r])
            theta = np.concatenate([[0.0], theta])
        return r, theta, r * np.exp(1j * theta)


class TaylorSpec(BaseModel):
    """테일러 계수 [[re, im], ...]"""
    h: List[Tuple[float, float]]
    g: List[Tuple[float, float]]

    @field_validator('h', 'g')
    @classmethod
    def validate_coefficients(cls, coeffs):
        if len(coeffs) < 4:
            raise ValueError(f"at least 4 coefficients required, got {len(coeffs)}")
        if not all(np.isfinite(c[0]) and np.isfinite(c[1]) for c in coeffs):
            raise ValueError("coefficients must be finite")
        return coeffs

    def complex_h(self) -> List[complex]:
        return [complex(re, im) for re, im in self.h]

    def complex_g(self) -> List[complex]:
        return [complex(re, im) for re, im in self.g]


class MapDescriptor(BaseModel):
    """{"catalog": name, "params": {...}} 또는 {"taylor": {"h": [...], "g": [...]}}"""
    catalog: Optional[str] = None
    params: Dict[str, Any] = {}
    taylor: Optional[TaylorSpec] = None

    @model_validator(mode='after')
    def validate_kind(self):
        if (self.catalog is None) == (self.taylor is None):
            raise ValueError("exactly one of 'catalog' or 'taylor' must be given")
        if self.taylor is not None and self.params:
            raise ValueError("'params' only applies to catalog maps")
        return self

    @property
    def label(self) -> str:
        if self.catalog is not None:
            if not self.params:
                return self.catalog
            inner = ",".join(f"{k}={v}" for k, v in sorted(self.params.items()))
            return f"{self.catalog}({inner})"
        return "taylor"


class RunConfig(BaseModel):
    """CLI 실행 설정. JSON 설정 파일 위에 플래그 값이 덮어씀."""
    map: MapDescriptor = MapDescriptor(catalog="identity")
    grid: GridSpec = GridSpec()
    tolerances: Tolerances = DEFAULT_TOLERANCES
    ode_tol: float = Field(1e-8, gt=0)
    seed: int = 0
    out: Optional[str] = None
    format: Literal['csv', 'json'] = 'json'
    workers: Optional[int] = Field(None, ge=1)

    @classmethod
    def from_flat(cls, flat: Dict[str, Any]) -> "RunConfig":
        """
        평탄 JSON 키 -> 중첩 설정
          map, params, taylor, grid_M, grid_N, grid_K, grid_R, refine_tol,
          tol, report_tolerance, seed, out, format, workers
        """
        unknown = set(flat) - FLAT_KEYS
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")

        data: Dict[str, Any] = {}
        if flat.get('taylor') is not None:
            data['map'] = {"taylor": flat['taylor']}
        elif flat.get('map') is not None:
            data['map'] = {"catalog": flat['map'], "params": flat.get('params') or {}}

        grid = {key[5:]: flat[key] for key in ('grid_M', 'grid_N', 'grid_K', 'grid_R') if flat.get(key) is not None}
        if flat.get('refine_tol') is not None:
            grid['refine_tol'] = flat['refine_tol']
        if grid:
            data['grid'] = grid
        if flat.get('report_tolerance') is not None:
            data['tolerances'] = {"report_tolerance": flat['report_tolerance']}
        if flat.get('tol') is not None:
            data['ode_tol'] = flat['tol']
        for key in ('seed', 'out', 'format', 'workers'):
            if flat.get(key) is not None:
                data[key] = flat[key]
        return cls.model_validate(data)


FLAT_KEYS = {
    'map', 'params', 'taylor', 'grid_M', 'grid_N', 'grid_K', 'grid_R', 'refine_tol',
    'tol', 'report_tolerance', 'seed', 'out', 'format', 'workers',
}
