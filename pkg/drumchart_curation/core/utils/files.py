import os
import tempfile
from pathlib import Path

from structlog import get_logger

logger = get_logger(__name__)


def atomic_write_bytes(path: Path, data: bytes) -> None:
    """
    Write data to path through a temporary file in the same directory followed by a rename,
    so readers never observe a partially written file.

    Args:
        path (Path): Destination file.
        data (bytes): Full file content.
    """
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp_name = tempfile.mkstemp(prefix=f".{path.name}.", suffix=".tmp", dir=path.parent)
    try:
        with os.fdopen(fd, "wb") as handle:
            handle.write(data)
        os.replace(tmp_name, path)
    except BaseException:
        Path(tmp_name).unlink(missing_ok=True)
        raise

    logger.debug(f"Wrote {len(data)} bytes to {path}")


def atomic_write_text(path: Path, text: str) -> None:
    atomic_write_bytes(path, text.encode("utf-8"))


__all__ = [
    "atomic_write_bytes",
    "atomic_write_text",
]
