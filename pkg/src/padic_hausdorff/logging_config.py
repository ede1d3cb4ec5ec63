"""
Logging Configuration
Console logging for the p-adic lab. Records go to stderr, since stdout carries
reports, either as JSON lines or as text lines tagged with the scenario and
theorem they belong to. LogContext times one operation of a verification run.
"""

import json
import logging
import os
import sys
from dataclasses import dataclass
from datetime import datetime, timezone
from typing import Dict, Optional

LOG_FORMATS = ("text", "json")

# Extras that verification code attaches to its records
LAB_FIELDS = ("scenario_id", "theorem", "operation", "duration_ms", "success")


@dataclass
class LogConfig:
    """Level and format of the lab's console log"""
    level: str = "WARNING"
    format: str = "text"

    def __post_init__(self):
        self.level = self.level.upper()
        if not isinstance(logging.getLevelName(self.level), int):
            raise ValueError(f"unknown log level: {self.level}")
        if self.format not in LOG_FORMATS:
            raise ValueError(f"log format must be one of {LOG_FORMATS}, got {self.format!r}")


def _lab_fields(record: logging.LogRecord) -> Dict[str, object]:
    return {name: getattr(record, name) for name in LAB_FIELDS if hasattr(record, name)}


class StructuredFormatter(logging.Formatter):
    """One JSON object per record, lab extras included"""

    def format(self, record: logging.LogRecord) -> str:
        log_data = {
            "timestamp": datetime.fromtimestamp(record.created, timezone.utc).isoformat(),
            "level": record.levelname,
            "logger": record.name,
            "message": record.getMessage(),
        }
        log_data.update(_lab_fields(record))
        if record.exc_info:
            log_data["exception"] = {
                "type": record.exc_info[0].__name__,
                "message": str(record.exc_info[1]),
                "traceback": self.formatException(record.exc_info),
            }
        return json.dumps(log_data, default=str)


class ScenarioFormatter(logging.Formatter):
    """Plain text with a [scenario theorem] tag when the record carries one"""

    def __init__(self):
        super().__init__('%(asctime)s - %(levelname)s - %(name)s - %(message)s', datefmt='%H:%M:%S')

    def format(self, record: logging.LogRecord) -> str:
        text = super().format(record)
        tag = " ".join(str(getattr(record, name)) for name in ("scenario_id", "theorem") if hasattr(record, name))
        return f"{text} [{tag}]" if tag else text


class LoggerManager:
    """Owns the console handler installed on the root logger"""

    _instance: Optional['LoggerManager'] = None
    _initialized: bool = False

    def __new__(cls) -> 'LoggerManager':
        """Singleton pattern"""
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __init__(self):
        if not self._initialized:
            self.config = LogConfig()
            self.handler: Optional[logging.Handler] = None
            self._initialized = True

    def setup(self, config: LogConfig) -> None:
        """Replace the console handler; handlers installed by others are left alone."""
        self.config = config
        root_logger = logging.getLogger()
        if self.handler is not None:
            root_logger.removeHandler(self.handler)

        handler = logging.StreamHandler(sys.stderr)
        handler.setFormatter(StructuredFormatter() if config.format == "json" else ScenarioFormatter())
        root_logger.addHandler(handler)
        self.handler = handler
        self.update_level(config.level)

    def update_level(self, level: str) -> None:
        self.config.level = level.upper()
        logging.getLogger().setLevel(self.config.level)
        logging.getLogger("src.padic_hausdorff").setLevel(self.config.level)


def get_logger_manager() -> LoggerManager:
    return LoggerManager()


def setup_logging(level: str = "WARNING", format: str = "text") -> None:
    """
    Configure the console log.

    Raises:
        ValueError: for an unknown level or format
    """
    get_logger_manager().setup(LogConfig(level=level, format=format))


class LogContext:
    """Times an operation and logs Starting / Completed / Failed with lab extras"""

    def __init__(self, logger: logging.Logger, operation: str, **context):
        self.logger = logger
        self.operation = operation
        self.context = context
        self.start_time: Optional[float] = None
        self.duration_ms: float = 0.0

    def __enter__(self):
        self.start_time = datetime.now().timestamp()
        self.logger.debug(
            f"Starting: {self.operation}",
            extra={"operation": self.operation, **self.context}
        )
        return self

    def __exit__(self, exc_type, exc_val, exc_tb):
        self.duration_ms = (datetime.now().timestamp() - self.start_time) * 1000
        extra = {"operation": self.operation, "duration_ms": self.duration_ms,
                 "success": exc_type is None, **self.context}
        if exc_type is None:
            self.logger.info(f"Completed: {self.operation} ({self.duration_ms:.2f}ms)", extra=extra)
        else:
            self.logger.warning(f"Failed: {self.operation} ({self.duration_ms:.2f}ms) - {exc_val}", extra=extra)
        return False


# Initialize default configuration on import
if __name__ != "__main__":
    setup_logging(level=os.getenv("PADIC_LAB_LOG_LEVEL", "WARNING"))
