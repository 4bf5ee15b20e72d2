from contextlib import contextmanager
from contextvars import ContextVar
from typing import Iterator


class BaseObservabilityContext:
    @classmethod
    @contextmanager
    def bind(cls, **kwargs) -> Iterator[None]:
        tokens = dict()
        for key, value in kwargs.items():
            attribute_definition = getattr(cls, key, None)
            if isinstance(attribute_definition, ContextVar):
                token = attribute_definition.set(value)
                tokens[key] = token

        try:
            yield
        finally:
            for key, token in tokens.items():
                getattr(cls, key).reset(token)


class TrackContext(BaseObservabilityContext):
    id: ContextVar[str] = ContextVar("observability.track.id")
    stage: ContextVar[str] = ContextVar("observability.track.stage")


class BatchContext(BaseObservabilityContext):
    input_dir: ContextVar[str] = ContextVar("observability.batch.input_dir")
    output_dir: ContextVar[str] = ContextVar("observability.batch.output_dir")


__all__ = [
    "BaseObservabilityContext",
    "TrackContext",
    "BatchContext",
]
