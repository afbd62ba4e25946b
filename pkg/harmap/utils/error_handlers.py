from typing import Dict, Any, Optional, Union
from pydantic import ValidationError

# 종료 코드
EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_USAGE = 2
EXIT_SINGULARITY = 3


def _point_payload(z: Optional[complex]) -> Optional[list]:
    if z is None:
        return None
    z = complex(z)
    return [z.real, z.imag]


class HarmapError(Exception):
    """harmap 에러 기본 클래스"""
    def __init__(
        self,
        exit_code: int,
        detail: str,
        code: str = None,
        data: Dict[str, Any] = None
    ):
        self.exit_code = exit_code
        self.detail = detail
        self.code = code
        self.data = data
        super().__init__(detail)


class DomainError(HarmapError):
    """점이 단위 원판(허용 영역) 밖에 있는 경우"""
    def __init__(self, z: complex, limit: float):
        super().__init__(
            exit_code=EXIT_USAGE,
            detail=f"point {complex(z)} outside the admissible disk |z| <= {limit}",
            code="domain_error",
            data={"z": _point_payload(z), "limit": limit}
        )


class RepresentationError(HarmapError):
    """테일러 계수 표현이 올바르지 않은 경우"""
    def __init__(self, detail: str):
        super().__init__(
            exit_code=EXIT_USAGE,
            detail=detail,
            code="representation_error"
        )


class SingularityError(HarmapError):
    """h' 또는 1-|ω|² 가 임계값보다 작은 경우"""
    def __init__(self, quantity: str, z: complex, value: float, floor: float, map_label: str = None):
        super().__init__(
            exit_code=EXIT_SINGULARITY,
            detail=f"{quantity} = {value:.3e} below floor {floor:.1e} at z = {complex(z)}",
            code="singularity",
            data={"quantity": quantity, "z": _point_payload(z), "value": value,
                  "floor": floor, "map": map_label}
        )
        self.z = complex(z)


class OrientationError(HarmapError):
    """야코비안이 양수가 아닌 경우 (sense-preserving 아님)"""
    def __init__(self, z: complex, jacobian: float, map_label: str = None):
        super().__init__(
            exit_code=EXIT_SINGULARITY,
            detail=f"Jacobian {jacobian:.3e} <= 0 at z = {complex(z)}",
            code="orientation_error",
            data={"z": _point_payload(z), "jacobian": jacobian, "map": map_label}
        )


class InvalidParameterError(HarmapError):
    """파라미터 검증 실패"""
    def __init__(self, detail: str, params: Dict[str, Any] = None):
        super().__init__(
            exit_code=EXIT_USAGE,
            detail=detail,
            code="invalid_parameter",
            data={"params": params} if params else None
        )


class UnknownMapError(HarmapError):
    """카탈로그에 없는 이름"""
    def __init__(self, name: Union[str, int]):
        super().__init__(
            exit_code=EXIT_USAGE,
            detail=f"catalog map '{name}' not found",
            code="unknown_map"
        )


class ConfigError(HarmapError):
    """설정 또는 사용법 오류"""
    def __init__(self, detail: str):
        super().__init__(
            exit_code=EXIT_USAGE,
            detail=detail,
            code="config_error"
        )


class IntegrationError(HarmapError):
    """궤적 적분 실패"""
    def __init__(self, detail: str, z: complex = None):
        super().__init__(
            exit_code=EXIT_SINGULARITY,
            detail=detail,
            code="integration_error",
            data={"z": _point_payload(z)} if z is not None else None
        )


def handle_validation_error(e: ValidationError) -> Dict[str, Any]:
    """Pydantic ValidationError 처리"""
    errors = []
    for error in e.errors():
        errors.append({
            "loc": list(error["loc"]),
            "msg": error["msg"],
            "type": error["type"]
        })

    return {
        "exit_code": EXIT_USAGE,
        "detail": "Validation error",
        "code": "validation_error",
        "errors": errors
    }


def handle_harmap_error(e: HarmapError) -> Dict[str, Any]:
    """HarmapError 처리"""
    response = {
        "exit_code": e.exit_code,
        "detail": e.detail
    }

    if e.code:
        response["code"] = e.code

    if e.data:
        response["data"] = e.data

    return response


def handle_generic_error(e: Exception) -> Dict[str, Any]:
    """일반 예외 처리"""
    return {
        "exit_code": EXIT_CHECK_FAILED,
        "detail": "Internal error",
        "code": "internal_error",
        "error_type": type(e).__name__
    }
