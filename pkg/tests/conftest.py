import os
import sys

import numpy as np
import pytest

# 프로젝트 루트 디렉토리를 sys.path에 추가
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))

from harmap.catalog import catalog
from harmap.main import main
from harmap.schemas import GridSpec

# 닫힌 형태가 알려진 카탈로그 사상들 (파라미터 포함)
CATALOG_CASES = [
    ("identity", {}),
    ("affine_identity", {"epsilon": 0.5}),
    ("half_plane_L", {}),
    ("harmonic_koebe_K", {}),
    ("power_map", {"n": 2}),
    ("power_map", {"n": 3}),
    ("log_example", {}),
    ("k_alpha", {"alpha": 1.5}),
    ("f_alpha", {"alpha": 1.5, "omega0": 0.2}),
    ("concave_example", {"beta": 0.25, "rho": 0.1}),
]


def case_id(case):
    name, params = case
    if not params:
        return name
    return name + "(" + ",".join(f"{k}={v}" for k, v in params.items()) + ")"


@pytest.fixture(params=CATALOG_CASES, ids=case_id)
def catalog_map(request):
    """카탈로그 사상 전체를 순회하는 픽스처"""
    name, params = request.param
    return catalog(name, params)


@pytest.fixture
def identity():
    return catalog("identity")


@pytest.fixture
def half_plane():
    return catalog("half_plane_L")


@pytest.fixture
def harmonic_koebe():
    return catalog("harmonic_koebe_K")


@pytest.fixture
def log_map():
    return catalog("log_example")


@pytest.fixture
def rng():
    # 고정 시드
    return np.random.default_rng(20240611)


@pytest.fixture
def small_grid():
    """빠른 격자 (기준값 검사 없이 동작 확인용)"""
    return GridSpec(M=8, N=16, K=8, R=5)


@pytest.fixture
def medium_grid():
    return GridSpec(M=24, N=64, K=12, R=20)


@pytest.fixture
def default_grid():
    return GridSpec()


@pytest.fixture
def cli(capsys):
    """CLI 실행기: (종료 코드, stdout, stderr) 반환"""
    def run(*argv):
        code = main([str(a) for a in argv])
        captured = capsys.readouterr()
        return code, captured.out, captured.err
    return run


def random_disk_points(rng, n, r_max=0.9):
    """|z| <= r_max 면적 균등 점"""
    r = r_max * np.sqrt(rng.random(n))
    theta = 2.0 * np.pi * rng.random(n)
    return r * np.exp(1j * theta)
