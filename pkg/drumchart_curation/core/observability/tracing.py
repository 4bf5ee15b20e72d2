from contextlib import contextmanager
from contextvars import ContextVar
from functools import wraps
from typing import Any, Callable, Iterator, TypeVar

from opentelemetry import trace
from opentelemetry.sdk.resources import SERVICE_NAME, Resource
from opentelemetry.sdk.trace import TracerProvider
from opentelemetry.sdk.trace.export import BatchSpanProcessor, ConsoleSpanExporter
from opentelemetry.trace import Span, SpanKind, Tracer
from pydantic_settings import BaseSettings, SettingsConfigDict
from structlog import getLogger

from drumchart_curation.core.observability.context import BaseObservabilityContext

logger = getLogger(__name__)


FuncT = TypeVar("FuncT", bound=Callable[..., Any])


class OpenTelemetrySettings(BaseSettings):
    model_config = SettingsConfigDict(
        env_prefix="DRUMCHART_OTEL_",
    )

    SERVICE_NAME: str = "drumchart-curation"
    ENABLE_CONSOLE_EXPORTER: bool = False


def configure_tracing(settings: OpenTelemetrySettings) -> None:
    """
    Install a tracer provider. Spans are only exported when the console exporter is enabled;
    otherwise they exist to put trace and span ids on the log lines of each pipeline stage.
    """
    provider = TracerProvider(resource=Resource.create({SERVICE_NAME: settings.SERVICE_NAME}))
    trace.set_tracer_provider(provider)

    if settings.ENABLE_CONSOLE_EXPORTER:
        provider.add_span_processor(BatchSpanProcessor(ConsoleSpanExporter()))
        logger.info("Console span exporter enabled")

    logger.debug("OpenTelemetry tracing configured")


class TraceContextModel(BaseObservabilityContext):
    trace_id: ContextVar[str] = ContextVar("observability.trace_id")
    span_id: ContextVar[str] = ContextVar("observability.span_id")


@contextmanager
def _bind_span_ids(span: Span) -> Iterator[None]:
    context = span.get_span_context()
    if not context.is_valid:
        yield
        return

    with TraceContextModel.bind(trace_id=format(context.trace_id, "032x"), span_id=format(context.span_id, "016x")):
        yield


def span_function(span_name: str):
    """
    Run the decorated function inside a span and expose its ids to the logs.

    Args:
        span_name (str): Name of the span, e.g. "convert_track".
    """

    def decorator(func: FuncT) -> FuncT:
        @wraps(func)
        def wrapper(*args, **kwargs):
            tracer = trace.get_tracer(func.__module__)
            with tracer.start_as_current_span(span_name, kind=SpanKind.INTERNAL) as span, _bind_span_ids(span):
                return func(*args, **kwargs)

        return wrapper  # type: ignore

    return decorator


@contextmanager
def span_context(tracer: Tracer, span_name: str, **attributes: str | int | float | bool) -> Iterator[Span]:
    """
    Open a child span for one stage of work, with optional span attributes.
    """
    with tracer.start_as_current_span(span_name, kind=SpanKind.INTERNAL, attributes=attributes or None) as span:
        with _bind_span_ids(span):
            yield span


__all__ = [
    "OpenTelemetrySettings",
    "configure_tracing",
    "TraceContextModel",
    "span_function",
    "span_context",
]
