from pydantic import ConfigDict

from .convertible import ConvertibleBaseModel


class ValueDTO(ConvertibleBaseModel):
    """
    Immutable value object. Domain values (charts, tempo maps, onsets) are frozen once built.
    """

    model_config = ConfigDict(
        frozen=True,
        extra="forbid",
    )


class ArrayDTO(ValueDTO):
    """
    Immutable value object carrying numpy arrays.
    """

    model_config = ConfigDict(
        frozen=True,
        extra="forbid",
        arbitrary_types_allowed=True,
    )


__all__ = [
    "ValueDTO",
    "ArrayDTO",
]
