import argparse
import json
import sys
from typing import List, Optional

from pydantic import ValidationError

from . import __version__
from .commands import COMMANDS
from .commands.common import build_config
from .logger import filter_params
from .middleware import RunLogging
from .utils.error_handlers import (
    EXIT_CHECK_FAILED,
    EXIT_USAGE,
    HarmapError,
    handle_generic_error,
    handle_harmap_error,
    handle_validation_error,
)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="harmap",
        description="Numerical toolkit for the pre-Schwarzian, Schwarzian and order of planar harmonic maps.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    subparsers = parser.add_subparsers(dest="command", required=True)
    for module in COMMANDS:
        module.register(subparsers)
    return parser


def _report(payload: dict) -> None:
    """오류 페이로드는 stderr 로 출력 (stdout 은 결과 전용)"""
    print(json.dumps(payload, ensure_ascii=False), file=sys.stderr)


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        # argparse 는 사용법 오류에 2, --help/--version 에 0 으로 종료
        return int(e.code or 0)

    config = None
    if args.needs_config:
        try:
            config = build_config(args)
        except ValidationError as e:
            _report(handle_validation_error(e))
            return EXIT_USAGE
        except HarmapError as e:
            _report(handle_harmap_error(e))
            return e.exit_code

    map_label = config.map.label if config is not None else None
    params = filter_params(config.model_dump(mode="json")) if config is not None else None
    run = RunLogging(command=args.command, map_label=map_label, params=params)
    try:
        return run.dispatch(lambda: args.handler(args, config))
    except HarmapError as e:
        _report(handle_harmap_error(e))
        return e.exit_code
    except Exception as e:
        _report(handle_generic_error(e))
        return EXIT_CHECK_FAILED


if __name__ == "__main__":
    raise SystemExit(main())
