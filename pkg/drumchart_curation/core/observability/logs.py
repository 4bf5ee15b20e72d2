"""
structlog configuration shared by the CLI and the conversion worker processes.

Log lines are rendered by structlog and handed to the standard library, so third-party loggers
(matplotlib, opentelemetry) end up in the same stream. Every context variable whose name starts
with CONTEXT_VAR_PREFIX (see observability.context) is added to each line, which is how the
track id and pipeline stage appear on every message of a conversion.
"""

import contextvars
import logging
from enum import Enum
from pathlib import Path

import structlog
from colorama import init as colorama_init
from pydantic_settings import BaseSettings, SettingsConfigDict
from pythonjsonlogger import jsonlogger

colorama_init(autoreset=True)


class LogLevel(Enum):
    CRITICAL = logging.CRITICAL
    ERROR = logging.ERROR
    WARNING = logging.WARNING
    INFO = logging.INFO
    DEBUG = logging.DEBUG
    NOTSET = logging.NOTSET


class ObservabilitySettings(BaseSettings):
    model_config = SettingsConfigDict(
        env_prefix="DRUMCHART_OBSERVABILITY_",
    )
    LOG_LEVEL: LogLevel = LogLevel.INFO
    CONTEXT_VAR_PREFIX: str = "observability."
    CONSOLE_LOGGING: bool = True
    LOG_FILE: Path | None = None
    LOGGERS: list[str] = [
        "matplotlib",
        "PIL",
        "opentelemetry",
        "concurrent.futures",
    ]
    THIRD_PARTY_LOG_LEVEL: LogLevel = LogLevel.WARNING


def _context_processor(prefix: str):
    def add_observability_context(_, __, event_dict):
        for context_var, value in contextvars.copy_context().items():
            if context_var.name.startswith(prefix):
                event_dict[context_var.name.removeprefix(prefix)] = value
        return event_dict

    return add_observability_context


def _handler(settings: ObservabilitySettings) -> logging.Handler:
    if settings.LOG_FILE is not None:
        settings.LOG_FILE.parent.mkdir(parents=True, exist_ok=True)
        handler: logging.Handler = logging.FileHandler(settings.LOG_FILE, encoding="utf-8")
    else:
        handler = logging.StreamHandler()

    if settings.CONSOLE_LOGGING:
        handler.setFormatter(logging.Formatter("%(message)s"))
    else:
        handler.setFormatter(jsonlogger.JsonFormatter("%(message)s"))
    return handler


def configure_logging(settings: ObservabilitySettings) -> None:
    """
    Configure structlog and the root logger.

    Console rendering is coloured unless the output goes to LOG_FILE. Also used as the
    initializer of conversion worker processes, so workers log exactly like the parent.

    Args:
        settings (ObservabilitySettings): Levels, renderer and destination.
    """
    processors = [
        structlog.stdlib.add_log_level,
        structlog.stdlib.add_logger_name,
        structlog.processors.TimeStamper(fmt="iso"),
        _context_processor(settings.CONTEXT_VAR_PREFIX),
    ]

    if settings.CONSOLE_LOGGING:
        processors.extend(
            [
                structlog.dev.set_exc_info,
                structlog.dev.ConsoleRenderer(colors=settings.LOG_FILE is None),
            ]
        )
    else:
        processors.extend([structlog.processors.format_exc_info, structlog.processors.JSONRenderer()])

    structlog.configure(
        processors=processors,
        context_class=dict,
        logger_factory=structlog.stdlib.LoggerFactory(),
        wrapper_class=structlog.stdlib.BoundLogger,
        cache_logger_on_first_use=True,
    )

    logging.basicConfig(
        handlers=[_handler(settings)],
        level=settings.LOG_LEVEL.value,
        force=True,
    )

    for name in settings.LOGGERS:
        logging.getLogger(name).setLevel(settings.THIRD_PARTY_LOG_LEVEL.value)


__all__ = [
    "LogLevel",
    "ObservabilitySettings",
    "configure_logging",
]
