"""
Structured logging for simulator runs.
Every STASH report, scaling decision and recommendation is traceable in the daily JSON log.
"""

import logging
import json
import traceback
import os
import threading
from typing import Dict, Any, Optional
from django.conf import settings
from django.utils import timezone


# JSON-per-day array writer
class _JsonDailyArrayWriter:
    def __init__(self):
        self._lock = threading.Lock()

    @staticmethod
    def _logs_dir() -> str:
        return getattr(settings, 'STALLSIM_LOG_DIR', 'logs')

    def _file_path_for_today(self) -> str:
        date_str = timezone.now().date().isoformat()  # e.g., 2026-10-17
        return os.path.join(self._logs_dir(), f"{date_str}.json")

    def append(self, obj: Dict[str, Any]):
        with self._lock:
            try:
                os.makedirs(self._logs_dir(), exist_ok=True)
                path = self._file_path_for_today()
                data = []
                if os.path.exists(path):
                    with open(path, 'r', encoding='utf-8') as f:
                        try:
                            data = json.load(f)
                            if not isinstance(data, list):
                                data = []
                        except ValueError:
                            data = []
                data.append(obj)
                with open(path, 'w', encoding='utf-8') as f:
                    json.dump(data, f, ensure_ascii=False, indent=2, default=str)
                    f.write("\n")
            except OSError:
                # Log file problems must never break a simulation
                pass


_daily_writer = _JsonDailyArrayWriter()


class JsonDailyArrayHandler(logging.Handler):
    """Logging handler that appends records to a pretty-printed daily JSON array."""
    def emit(self, record: logging.LogRecord) -> None:
        try:
            entry = {
                'timestamp': timezone.now().isoformat(),
                'level': record.levelname,
                'logger': record.name,
                'event': getattr(record, 'event', None),
                'message': record.getMessage(),
                'context': getattr(record, 'context', None),
            }
            _daily_writer.append(entry)
        except Exception:
            self.handleError(record)


class ProductionLogger:
    """
    Structured logger for simulator events.

    Each event becomes one record on the ``stall_analysis.<name>`` logger with the
    event name and payload attached as ``event``/``context`` extras, so the daily
    JSON handler stores them as fields rather than as formatted text.
    """

    def __init__(self, name: str):
        self.logger = logging.getLogger(f'stall_analysis.{name.lower()}')

    def log_structured(self, level: str, event_type: str, data: Dict[str, Any],
                       message: Optional[str] = None):
        """Log structured data with its full context"""
        text = message or event_type
        extra = {'event': event_type, 'context': data}
        level_up = level.upper()
        if level_up == 'ERROR':
            self.logger.error(text, extra=extra)
        elif level_up == 'WARNING':
            self.logger.warning(text, extra=extra)
        elif level_up == 'DEBUG':
            self.logger.debug(text, extra=extra)
        else:
            self.logger.info(text, extra=extra)

    def log_simulation(self, cluster: Dict[str, Any], model_name: str, timing: Dict[str, Any]):
        """Log one simulated epoch"""
        self.log_structured('DEBUG', 'EPOCH_SIMULATED', {
            'cluster': cluster,
            'model': model_name,
            'timing': timing,
        }, f"Simulated epoch of {model_name}: {timing.get('total')} s")

    def log_stall_report(self, report: Dict[str, Any]):
        """Log a finished STASH report"""
        self.log_structured('INFO', 'STALL_REPORT', report,
                            f"STASH {report.get('instance')}/{report.get('model')} "
                            f"batch {report.get('batch')}: I/C {report.get('interconnect_stall_pct')}%")

    def log_scaling_decision(self, decision: str, value: Any, context: Dict[str, Any]):
        """Log analytic model decisions (optimal n, degenerate cases)"""
        self.log_structured('INFO', 'SCALING_DECISION', {
            'decision': decision,
            'value': value,
            'context': context,
        }, f"Scaling decision: {decision} = {value}")

    def log_recommendation(self, recommendation: Dict[str, Any], budget_s: float):
        """Log advisor output with the budget it was checked against"""
        self.log_structured('INFO', 'RECOMMENDATION', {
            'budget_s': budget_s,
            'recommendation': recommendation,
        }, f"Recommendation feasible={recommendation.get('feasible')}")

    def log_error(self, error_type: str, error_message: str,
                  context: Dict[str, Any] = None, exception: Exception = None):
        """Log errors with full context and stack trace"""
        error_data = {
            'error_type': error_type,
            'error_message': error_message,
            'context': context or {}
        }

        if exception:
            error_data['exception_type'] = type(exception).__name__
            error_data['stack_trace'] = ''.join(
                traceback.format_exception(type(exception), exception, exception.__traceback__)
            )

        self.log_structured('ERROR', 'SYSTEM_ERROR', error_data,
                            f"Error: {error_type}: {error_message}")


# Global logger instances
simulation_logger = ProductionLogger('SIMULATION')
stash_logger = ProductionLogger('STASH')
advisor_logger = ProductionLogger('ADVISOR')
api_logger = ProductionLogger('API')
system_logger = ProductionLogger('SYSTEM')


def get_logger(name: str) -> ProductionLogger:
    """Get a production logger instance"""
    return ProductionLogger(name)
