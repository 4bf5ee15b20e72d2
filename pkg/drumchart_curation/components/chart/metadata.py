from structlog import get_logger

from .errors import MissingArtistError
from .schemas import ChartMetadata

logger = get_logger(__name__)

_FIELD_KEYS = {
    "name": "title",
    "artist": "artist",
    "genre": "genre",
}


def decode_metadata(raw: bytes) -> str:
    """
    Decode a metadata file as UTF-8, replacing invalid bytes. A leading byte-order mark is dropped.
    """
    return raw.decode("utf-8", errors="replace").removeprefix("\ufeff")


def parse_metadata(text: str) -> ChartMetadata:
    """
    Parse a song.ini style metadata file: key=value lines under a single section header.

    Keys are matched case-insensitively and values are trimmed. `name`, `artist` and `genre`
    fill the dedicated fields, every other pair is kept in `extra` in file order (the last
    occurrence of a repeated key wins).

    Args:
        text (str): The decoded file content.

    Returns:
        ChartMetadata: The parsed metadata.

    Raises:
        MissingArtistError: If there is no artist or it is blank.
    """
    fields: dict[str, str] = {}
    extra: dict[str, str] = {}
    for number, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith(("#", ";")):
            continue
        if line.startswith("[") and line.endswith("]"):
            continue
        if "=" not in line:
            logger.debug(f"Ignoring metadata line {number} without '='")
            continue

        key, value = line.split("=", 1)
        key = key.strip().lower()
        value = value.strip()
        if key in _FIELD_KEYS:
            fields[_FIELD_KEYS[key]] = value
        else:
            extra[key] = value

    if not fields.get("artist"):
        raise MissingArtistError()

    return ChartMetadata(
        title=fields.get("title", ""),
        artist=fields["artist"],
        genre=fields.get("genre", ""),
        extra=extra,
    )


__all__ = [
    "decode_metadata",
    "parse_metadata",
]
