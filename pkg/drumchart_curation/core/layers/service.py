from typing import Generic, TypeVar

import structlog
from pydantic_settings import BaseSettings

SettingsT = TypeVar("SettingsT", bound=BaseSettings)


class BaseService(Generic[SettingsT]):
    """
    A component's entry point, holding the settings it was built with.
    """

    settings: SettingsT

    def __init__(self, settings: SettingsT) -> None:
        self.settings = settings
        self.logger = structlog.get_logger(type(self).__module__).bind(service=type(self).__name__)


__all__ = [
    "BaseService",
]
