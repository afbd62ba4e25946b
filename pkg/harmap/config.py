import os
from dotenv import load_dotenv
from pydantic import BaseModel, ConfigDict, Field

load_dotenv()

LOG_LEVEL = os.getenv("HARMAP_LOG_LEVEL", "INFO")
LOG_DIR = os.getenv("HARMAP_LOG_DIR", "")
JSON_LOGS = os.getenv("HARMAP_JSON_LOGS", "0").lower() in ("1", "true", "yes")


def _env_threads() -> int:
    raw = os.getenv("HARMAP_THREADS", "")
    try:
        value = int(raw)
    except ValueError:
        value = os.cpu_count() or 1
    return max(1, value)


class Tolerances(BaseModel):
    """수치 임계값 (모두 양수)"""
    model_config = ConfigDict(frozen=True)

    h_prime_floor: float = Field(1e-14, gt=0)
    omega_gap_floor: float = Field(1e-12, gt=0)
    # 닫힌 형태 연산자: |z| <= 1 - boundary_margin
    boundary_margin: float = Field(1e-7, gt=0, lt=1)
    # 유한차분 스텐실: |z ± h| <= 1 - stencil_margin
    stencil_margin: float = Field(1e-6, gt=0, lt=1)
    trajectory_boundary: float = Field(1e-4, gt=0, lt=1)
    trajectory_zero_a: float = Field(1e-8, gt=0)
    report_tolerance: float = Field(1e-9, gt=0)


DEFAULT_TOLERANCES = Tolerances()


def max_workers(requested: int = None) -> int:
    """HARMAP_THREADS 로 제한된 워커 수"""
    cap = _env_threads()
    if requested is None or requested < 1:
        return cap
    return min(requested, cap)
