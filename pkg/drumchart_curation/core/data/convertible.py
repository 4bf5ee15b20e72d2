import types
from typing import Any, Self, Union, get_args, get_origin

from pydantic import BaseModel, ConfigDict
from structlog import get_logger

logger = get_logger(__name__)


def _model_of(annotation: Any) -> type["ConvertibleBaseModel"] | None:
    if isinstance(annotation, type) and issubclass(annotation, ConvertibleBaseModel):
        return annotation
    if get_origin(annotation) in (Union, types.UnionType):
        models = [model for arg in get_args(annotation) if (model := _model_of(arg)) is not None]
        if len(models) == 1:
            return models[0]
    return None


def _prune(annotation: Any, value: Any) -> Any:
    """
    Drop unknown keys from a decoded value wherever the annotation nests a model: directly,
    as an optional, or inside a homogeneous list, tuple or dict.
    """
    model = _model_of(annotation)
    if model is not None:
        return model._known_fields(value) if isinstance(value, dict) else value

    origin = get_origin(annotation)
    if origin in (Union, types.UnionType):
        return value
    args = [arg for arg in get_args(annotation) if arg is not Ellipsis]
    if origin in (list, tuple, set, frozenset) and len(args) == 1 and isinstance(value, list):
        return [_prune(args[0], item) for item in value]
    if origin is dict and len(args) == 2 and isinstance(value, dict):
        return {key: _prune(args[1], item) for key, item in value.items()}
    return value


class ConvertibleBaseModel(BaseModel):
    """
    A pydantic model that reads and writes plain JSON-compatible dictionaries.

    from_dict is lenient about keys the model does not know, at any depth, so files written by a
    newer version of the toolchain (an extra manifest column, an extra field in a nested report)
    still load. Direct construction keeps the strictness configured by the subclass.
    """

    model_config = ConfigDict(
        validate_assignment=True,
        extra="ignore",
    )

    @classmethod
    def _known_fields(cls, value: dict[str, Any]) -> dict[str, Any]:
        known = {
            key: _prune(cls.model_fields[key].annotation, item)
            for key, item in value.items()
            if key in cls.model_fields
        }
        unknown = sorted(set(value) - set(known))
        if unknown:
            logger.debug(f"{cls.__qualname__} ignores unknown keys {unknown}")
        return known

    @classmethod
    def from_dict(cls, value: dict[str, Any]) -> Self:
        """
        Validate a dictionary, dropping keys that are not fields of the model or of any model
        nested in it.

        Args:
            value (dict[str, Any]): Field values, typically decoded JSON.

        Returns:
            Self: The validated model.

        Raises:
            pydantic.ValidationError: If a known field is missing or invalid.
        """
        return cls.model_validate(cls._known_fields(value))

    def to_dict(self, exclude_unset: bool = False) -> dict[str, Any]:
        """
        Dump to JSON-compatible values: enums become their values, tuples become lists.
        """
        return self.model_dump(mode="json", exclude_unset=exclude_unset)

    @classmethod
    def convert_from(cls, source: "ConvertibleBaseModel", exclude_unset: bool = False, **values: Any) -> Self:
        """
        Build a model from the fields of another, overriding some of them.
        """
        value = source.to_dict(exclude_unset=exclude_unset)
        value.update(values)
        return cls.from_dict(value)


__all__ = [
    "ConvertibleBaseModel",
]
