"""
이름이 붙은 조화 사상 카탈로그.

z=1 에 특이점이 있는 항목은 w = 1 - z 의 거듭제곱 합(PowerSum)으로 표현한다.
  half_plane_L      h' = 1/(1-z)³,  g' = -z/(1-z)³,  ω = -z
  harmonic_koebe_K  h' = (1+z)/(1-z)⁴,  g' = z(1+z)/(1-z)⁴,  ω = z
  log_example       h = z/(1-z),  g = -(z/(1-z) + log(1-z)),  ω = -z
  concave_example   h = ((1-z)^-α - 1)/α (α = 1+2β),  ω = ρz
"""
from dataclasses import dataclass
from typing import Any, Callable, Dict, Optional, Type

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator

from .analytic_fn import (
    IDENTITY,
    ZERO,
    KAlpha,
    LinearCombination,
    PowerSum,
    TaylorSeries,
    taylor_from_coeffs,
)
from .harmonic_map import HarmonicMap
from .schemas import MapDescriptor
from .utils.error_handlers import InvalidParameterError, UnknownMapError

def to_complex(value: Any) -> complex:
    """숫자, [re, im], "a+bj" 문자열을 complex 로 변환"""
    if isinstance(value, (list, tuple)):
        if len(value) != 2:
            raise ValueError("complex value must be [re, im]")
        return complex(float(value[0]), float(value[1]))
    if isinstance(value, str):
        return complex(value.replace(" ", ""))
    return complex(value)

class _Params(BaseModel):
    model_config = ConfigDict(extra='forbid', arbitrary_types_allowed=True)

class NoParams(_Params):
    pass

class PowerMapParams(_Params):
    n: int = Field(2, ge=2)

class AlphaParams(_Params):
    alpha: float = Field(..., gt=0)

class FAlphaParams(_Params):
    alpha: float = Field(..., gt=0)
    omega0: complex = 0j

    @field_validator('omega0', mode='before')
    @classmethod
    def parse_omega0(cls, v):
        v = to_complex(v)
        if not abs(v) < 1:
            raise ValueError(f"|omega0| = {abs(v)} must be < 1")
        return v

class AffineIdentityParams(_Params):
    epsilon: complex = 0.5 + 0j

    @field_validator('epsilon', mode='before')
    @classmethod
    def parse_epsilon(cls, v):
        v = to_complex(v)
        if not abs(v) < 1:
            raise ValueError(f"|epsilon| = {abs(v)} must be < 1")
        return v

class ConcaveParams(_Params):
    beta: float = Field(0.25, gt=0, le=0.5)
    rho: complex = 0j

    @field_validator('rho', mode='before')
    @classmethod
    def parse_rho(cls, v):
        v = to_complex(v)
        if not abs(v) < 1:
            raise ValueError(f"|rho| = {abs(v)} must be < 1")
        return v

@dataclass(frozen=True)
class MapInfo:
    """알려진 값. None 은 모름."""
    mu: Optional[float] = None
    upper: Optional[float] = None
    unbounded: bool = False
    concave_alpha: Optional[float] = None
    is_shc: bool = False
    provenance: str = ""

    def to_dict(self) -> Dict[str, Any]:
        return {
            "mu": self.mu,
            "upper": self.upper,
            "unbounded": self.unbounded,
            "concave_alpha": self.concave_alpha,
            "is_shc": self.is_shc,
            "provenance": self.provenance,
        }

@dataclass(frozen=True)
class CatalogEntry:
    name: str
    params_model: Type[_Params]
    build: Callable[[Any], HarmonicMap]
    info: Callable[[Any], MapInfo]
    description: str

    def parse(self, params: Optional[Dict[str, Any]]) -> _Params:
        try:
            return self.params_model(**(params or {}))
        except ValidationError as e:
            raise InvalidParameterError(
                f"invalid parameters for '{self.name}': {e.errors()[0]['msg']}",
                {k: str(v) for k, v in (params or {}).items()}
            )

    def param_schema(self) -> Dict[str, Any]:
        return {
            name: {"type": str(field.annotation.__name__), "default": None if field.is_required() else str(field.default)}
            for name, field in self.params_model.model_fields.items()
        }

# 해석 함수 조각
def _half_plane() -> PowerSum:
    # l(z) = z/(1-z)
    return PowerSum(((1.0, 1.0),), constant=-1.0, name="l")

def _omega(c0: complex, c1: complex) -> TaylorSeries:
    # 닫힌 형태 팽창률 ω = c0 + c1 z
    return taylor_from_coeffs([c0, c1, 0, 0])

def _build_identity(p: NoParams) -> HarmonicMap:
    return HarmonicMap(IDENTITY, ZERO, "identity")

def _build_affine_identity(p: AffineIdentityParams) -> HarmonicMap:
    g = taylor_from_coeffs([0, p.epsilon, 0, 0])
    return HarmonicMap(IDENTITY, g, f"affine_identity(epsilon={p.epsilon:g})", _omega(p.epsilon, 0))

def _build_half_plane_L(p: NoParams) -> HarmonicMap:
    h = PowerSum(((2.0, 0.5),), constant=-0.5, name="L.h")
    g = PowerSum(((2.0, -0.5), (1.0, 1.0)), constant=-0.5, name="L.g")
    return HarmonicMap(h, g, "half_plane_L", _omega(0, -1))

def _build_harmonic_koebe_K(p: NoParams) -> HarmonicMap:
    h = PowerSum(((3.0, 2.0 / 3.0), (2.0, -0.5)), constant=-1.0 / 6.0, name="K.h")
    g = PowerSum(((3.0, 2.0 / 3.0), (2.0, -1.5), (1.0, 1.0)), constant=-1.0 / 6.0, name="K.g")
    return HarmonicMap(h, g, "harmonic_koebe_K", _omega(0, 1))

def _build_power_map(p: PowerMapParams) -> HarmonicMap:
    coeffs = [0j] * max(4, p.n + 1)
    coeffs[p.n] = 1.0 / p.n
    omega = [0j] * max(4, p.n)
    omega[p.n - 1] = 1.0
    return HarmonicMap(IDENTITY, taylor_from_coeffs(coeffs), f"power_map(n={p.n})", taylor_from_coeffs(omega))

def _build_log_example(p: NoParams) -> HarmonicMap:
    h = _half_plane()
    g = PowerSum(((1.0, -1.0),), log_coef=-1.0, constant=1.0, name="log.g")
    return HarmonicMap(h, g, "log_example", _omega(0, -1))

def _build_k_alpha(p: AlphaParams) -> HarmonicMap:
    return HarmonicMap(KAlpha(p.alpha), ZERO, f"k_alpha(alpha={p.alpha:g})")

def _build_f_alpha(p: FAlphaParams) -> HarmonicMap:
    k = KAlpha(p.alpha)
    g = LinearCombination(((p.omega0, k),), name=f"{p.omega0:g}·{k.label}")
    return HarmonicMap(k, g, f"f_alpha(alpha={p.alpha:g},omega0={p.omega0:g})", _omega(p.omega0, 0))

def _build_concave_example(p: ConcaveParams) -> HarmonicMap:
    alpha = 1.0 + 2.0 * p.beta
    h = PowerSum(((alpha, 1.0 / alpha),), constant=-1.0 / alpha, name="concave.h")
    # g' = ρ z (1-z)^(-α-1)
    rho = p.rho
    g = PowerSum(
        ((alpha, rho / alpha), (alpha - 1.0, -rho / (alpha - 1.0))),
        constant=-rho * (1.0 / alpha - 1.0 / (alpha - 1.0)),
        name="concave.g",
    )
    return HarmonicMap(h, g, f"concave_example(beta={p.beta:g},rho={rho:g})", _omega(0, rho))

def _k_alpha_info(alpha: float, provenance: str) -> MapInfo:
    return MapInfo(
        mu=1.0 if 1.0 <= alpha <= 2.0 else None,
        upper=alpha if alpha >= 1.0 else None,
        unbounded=True,
        concave_alpha=alpha if 1.0 <= alpha <= 2.0 else None,
        provenance=provenance,
    )

CATALOG: Dict[str, CatalogEntry] = {
    "identity": CatalogEntry(
        "identity", NoParams, _build_identity,
        lambda p: MapInfo(mu=0.0, upper=1.0, is_shc=True, provenance="A_f = -conj(z)"),
        "h = z, g = 0",
    ),
    "affine_identity": CatalogEntry(
        "affine_identity", AffineIdentityParams, _build_affine_identity,
        lambda p: MapInfo(mu=0.0, upper=1.0, is_shc=True, provenance="affine image of the identity"),
        "f = z + conj(epsilon z)",
    ),
    "half_plane_L": CatalogEntry(
        "half_plane_L", NoParams, _build_half_plane_L,
        lambda p: MapInfo(mu=1.5, upper=1.5, unbounded=True, concave_alpha=2.0,
                          provenance="|A_L| = 3/2 identically"),
        "h' = 1/(1-z)^3, g' = -z/(1-z)^3",
    ),
    "harmonic_koebe_K": CatalogEntry(
        "harmonic_koebe_K", NoParams, _build_harmonic_koebe_K,
        lambda p: MapInfo(mu=1.5, upper=2.5, unbounded=True,
                          provenance="|A_K|^2 = 9/4 + 4(1-|z|^2)^2/|1-z^2|^2"),
        "h = (z - z^2/2 + z^3/6)/(1-z)^3, g = (z^2/2 + z^3/6)/(1-z)^3",
    ),
    "power_map": CatalogEntry(
        "power_map", PowerMapParams, _build_power_map,
        lambda p: MapInfo(mu=0.0, upper=1.5, provenance="sup of |A_f| is the radial limit 3/2"),
        "f = z + conj(z)^n / n",
    ),
    "log_example": CatalogEntry(
        "log_example", NoParams, _build_log_example,
        lambda p: MapInfo(mu=0.5, upper=1.5, unbounded=True,
                          provenance="A_f = (1-conj z)/(1-z) - conj(z)/2"),
        "h = z/(1-z), g = -(z/(1-z) + log(1-z))",
    ),
    "k_alpha": CatalogEntry(
        "k_alpha", AlphaParams, _build_k_alpha,
        lambda p: _k_alpha_info(p.alpha, "k_alpha' = (1+z)^(alpha-1)/(1-z)^(alpha+1)"),
        "h = (((1+z)/(1-z))^alpha - 1)/(2 alpha), g = 0",
    ),
    "f_alpha": CatalogEntry(
        "f_alpha", FAlphaParams, _build_f_alpha,
        lambda p: _k_alpha_info(p.alpha, "affine image of k_alpha"),
        "f = k_alpha + conj(omega0 k_alpha)",
    ),
    "concave_example": CatalogEntry(
        "concave_example", ConcaveParams, _build_concave_example,
        lambda p: MapInfo(unbounded=True, concave_alpha=1.0 + 2.0 * p.beta,
                          provenance="concave-family margin beta - |rho|/(1+|rho|)"),
        "h = ((1-z)^-(1+2 beta) - 1)/(1+2 beta), omega = rho z",
    ),
}

def get_entry(name: str) -> CatalogEntry:
    entry = CATALOG.get(name)
    if entry is None:
        raise UnknownMapError(name)
    return entry

def catalog(name: str, params: Optional[Dict[str, Any]] = None) -> HarmonicMap:
    entry = get_entry(name)
    return entry.build(entry.parse(params))

def map_info(name: str, params: Optional[Dict[str, Any]] = None) -> MapInfo:
    entry = get_entry(name)
    return entry.info(entry.parse(params))

def from_descriptor(descriptor: MapDescriptor) -> HarmonicMap:
    if descriptor.catalog is not None:
        return catalog(descriptor.catalog, descriptor.params)
    h = taylor_from_coeffs(descriptor.taylor.complex_h())
    g = taylor_from_coeffs(descriptor.taylor.complex_g())
    return HarmonicMap(h, g, "taylor")

def info_from_descriptor(descriptor: MapDescriptor) -> MapInfo:
    if descriptor.catalog is not None:
        return map_info(descriptor.catalog, descriptor.params)
    return MapInfo(provenance="user Taylor data")

def describe_catalog() -> Dict[str, Dict[str, Any]]:
    """이름별 파라미터 스키마와 기본 파라미터에서의 알려진 차수"""
    listing = {}
    for name, entry in CATALOG.items():
        try:
            info = entry.info(entry.parse({}))
        except InvalidParameterError:
            info = None
        listing[name] = {
            "description": entry.description,
            "params": entry.param_schema(),
            "known": info.to_dict() if info else None,
        }
    return listing
