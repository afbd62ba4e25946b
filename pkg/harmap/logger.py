import logging
import sys
import json
from datetime import datetime
from pathlib import Path
from typing import Dict, Any

from .config import LOG_LEVEL, LOG_DIR, JSON_LOGS

# 로거 설정
logger = logging.getLogger("harmap")
logger.setLevel(LOG_LEVEL)
logger.propagate = False

# run 단위로 붙는 추가 필드
_EXTRA_FIELDS = ("run_id", "command", "map_label", "exit_code", "duration", "exception", "params")


class JsonFormatter(logging.Formatter):
    def format(self, record):
        log_data = {
            "timestamp": datetime.fromtimestamp(record.created).isoformat(),
            "level": record.levelname,
            "name": record.name,
            "message": record.getMessage()
        }

        for field in _EXTRA_FIELDS:
            if hasattr(record, field):
                log_data[field] = getattr(record, field)

        return json.dumps(log_data, default=str)


text_format = logging.Formatter('%(asctime)s - %(name)s - %(levelname)s - %(message)s')

# 콘솔 핸들러 (stdout 은 명령 출력용이므로 stderr 사용)
console_handler = logging.StreamHandler(sys.stderr)
console_handler.setFormatter(JsonFormatter() if JSON_LOGS else text_format)
logger.addHandler(console_handler)


def _attach_file_handlers(log_dir: Path) -> None:
    log_dir.mkdir(parents=True, exist_ok=True)
    today = datetime.now().strftime('%Y-%m-%d')

    # 파일 핸들러 (일반 로그)
    file_handler = logging.FileHandler(log_dir / f"harmap_{today}.log")
    file_handler.setFormatter(text_format)
    logger.addHandler(file_handler)

    # 파일 핸들러 (에러 로그)
    error_handler = logging.FileHandler(log_dir / f"error_{today}.log")
    error_handler.setLevel(logging.ERROR)
    error_handler.setFormatter(text_format)
    logger.addHandler(error_handler)

    # JSON 로그 핸들러
    json_handler = logging.FileHandler(log_dir / f"harmap_json_{today}.log")
    json_handler.setFormatter(JsonFormatter())
    logger.addHandler(json_handler)


if LOG_DIR:
    _attach_file_handlers(Path(LOG_DIR))


def get_logger(name: str = None):
    if name:
        return logger.getChild(name)
    return logger


def log_command(run_id: str, command: str, map_label: str = None, params: Dict[str, Any] = None):
    """명령 시작 로깅"""
    extra = {
        'run_id': run_id,
        'command': command,
        'map_label': map_label
    }

    log_msg = f"Run {run_id}: {command}"
    if map_label:
        log_msg += f" on {map_label}"
    if params:
        filtered = filter_params(params)
        extra['params'] = filtered
        log_msg += f" - Params: {json.dumps(filtered, default=str)}"

    logger.info(log_msg, extra=extra)


def log_result(run_id: str, exit_code: int, duration: float):
    """명령 종료 로깅"""
    extra = {
        'run_id': run_id,
        'exit_code': exit_code,
        'duration': duration
    }
    logger.info(f"Run {run_id}: exit {exit_code}, Duration {duration:.4f}s", extra=extra)


def log_error(run_id: str, error: Exception, exit_code: int = 1):
    """명령 에러 로깅"""
    extra = {
        'run_id': run_id,
        'exit_code': exit_code,
        'exception': str(error)
    }
    logger.error(f"Error {run_id}: {str(error)}", exc_info=exit_code not in (2, 3), extra=extra)


def filter_params(data: Dict[str, Any], max_items: int = 16) -> Dict[str, Any]:
    """긴 계수 배열 등 큰 값 축약"""
    if not data or not isinstance(data, dict):
        return data

    filtered = {}
    for key, value in data.items():
        if isinstance(value, dict):
            filtered[key] = filter_params(value, max_items)
        elif isinstance(value, (list, tuple)) and len(value) > max_items:
            filtered[key] = f"<{len(value)} items>"
        else:
            filtered[key] = value

    return filtered
