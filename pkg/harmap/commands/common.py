import argparse
import json
from pathlib import Path
from typing import Any, Dict

from ..catalog import from_descriptor, info_from_descriptor, MapInfo
from ..harmonic_map import HarmonicMap
from ..schemas import RunConfig
from ..utils.error_handlers import ConfigError


def add_run_options(parser: argparse.ArgumentParser) -> None:
    """모든 하위 명령 공통 플래그. 기본값 None 은 설정 파일 값을 유지함을 뜻함."""
    parser.add_argument("--config", help="flat JSON config file; flags override its values")
    parser.add_argument("--map", help="catalog map name")
    parser.add_argument("--params", help="catalog parameters as a JSON object")
    parser.add_argument("--taylor", help="JSON file with Taylor coefficients {\"h\": [[re, im], ...], \"g\": [...]}")
    parser.add_argument("--grid-M", dest="grid_M", type=int, help="uniform radial count")
    parser.add_argument("--grid-N", dest="grid_N", type=int, help="angular count")
    parser.add_argument("--grid-K", dest="grid_K", type=int, help="dyadic depth, r_max = 1 - 2^-K")
    parser.add_argument("--grid-R", dest="grid_R", type=int, help="refinement iterations")
    parser.add_argument("--tol", type=float, help="ODE tolerance")
    parser.add_argument("--seed", type=int, help="seed for sampled pairs")
    parser.add_argument("--out", help="output path (default: stdout)")
    parser.add_argument("--format", choices=["csv", "json"], help="output format")
    parser.add_argument("--workers", type=int, help="worker threads (capped by HARMAP_THREADS)")


def _read_json(path: str, what: str) -> Any:
    try:
        return json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as e:
        raise ConfigError(f"cannot read {what} '{path}': {e}")
    except json.JSONDecodeError as e:
        raise ConfigError(f"{what} '{path}' is not valid JSON: {e}")


def flat_options(args: argparse.Namespace) -> Dict[str, Any]:
    """설정 파일 위에 플래그 값을 덮어쓴 평탄 설정"""
    flat: Dict[str, Any] = {}
    if getattr(args, "config", None):
        flat = _read_json(args.config, "config file")
        if not isinstance(flat, dict):
            raise ConfigError("config file must hold a JSON object")

    overrides = {
        key: getattr(args, key, None)
        for key in ("map", "grid_M", "grid_N", "grid_K", "grid_R", "tol", "seed", "out", "format", "workers")
    }
    if getattr(args, "params", None):
        try:
            overrides["params"] = json.loads(args.params)
        except json.JSONDecodeError as e:
            raise ConfigError(f"--params is not valid JSON: {e}")
    if getattr(args, "taylor", None):
        overrides["taylor"] = args.taylor
    if overrides.get("map") is not None and overrides.get("taylor") is None:
        flat.pop("taylor", None)
    if overrides.get("taylor") is not None:
        flat.pop("map", None)
        flat.pop("params", None)

    flat.update({k: v for k, v in overrides.items() if v is not None})
    if isinstance(flat.get("taylor"), str):
        flat["taylor"] = _read_json(flat["taylor"], "Taylor file")
    return flat


def build_config(args: argparse.Namespace) -> RunConfig:
    flat = flat_options(args)
    try:
        return RunConfig.from_flat(flat)
    except ValueError as e:
        # pydantic ValidationError 는 ValueError 의 하위 클래스이므로 그대로 전달
        if type(e) is ValueError:
            raise ConfigError(str(e))
        raise


def load_map(config: RunConfig) -> HarmonicMap:
    return from_descriptor(config.map)


def load_info(config: RunConfig) -> MapInfo:
    return info_from_descriptor(config.map)


def parse_point(text: str) -> complex:
    try:
        return complex(text.replace(" ", ""))
    except ValueError:
        raise ConfigError(f"cannot parse point '{text}' (use e.g. 0.3+0.2j)")
