import time
import uuid
from typing import Any, Callable, Dict

from .logger import log_command, log_result, log_error
from .utils.error_handlers import HarmapError


class RunLogging:
    """명령 실행을 감싸 run id, 소요 시간, 종료 코드를 로깅"""

    def __init__(self, command: str, map_label: str = None, params: Dict[str, Any] = None):
        self.command = command
        self.map_label = map_label
        self.params = params
        self.run_id = str(uuid.uuid4())

    def dispatch(self, handler: Callable[[], int]) -> int:
        # 실행 시작 시간
        start_time = time.time()

        log_command(
            run_id=self.run_id,
            command=self.command,
            map_label=self.map_label,
            params=self.params
        )

        try:
            exit_code = handler()
            duration = time.time() - start_time
            log_result(run_id=self.run_id, exit_code=exit_code, duration=duration)
            return exit_code
        except HarmapError as e:
            log_error(run_id=self.run_id, error=e, exit_code=e.exit_code)
            raise
        except Exception as e:
            # 예상하지 못한 예외는 트레이스백과 함께 기록
            log_error(run_id=self.run_id, error=e)
            raise
