"""
Binary feature files.

Layout (little-endian): magic b"ADTF", u32 version, u32 n_frames, u32 n_bands, f64 frame_rate,
then n_frames * n_bands float32 values in row-major order. Band center frequencies are not
stored.
"""

import struct
from pathlib import Path

import numpy as np
from structlog import get_logger

from drumchart_curation.core.utils.files import atomic_write_bytes

from .errors import BadFeatureFileError
from .spectrogram import LogSpectrogram

logger = get_logger(__name__)

MAGIC = b"ADTF"
VERSION = 1

_header = struct.Struct("<4sIIId")


def encode_features(features: LogSpectrogram) -> bytes:
    n_frames, n_bands = features.shape
    header = _header.pack(MAGIC, VERSION, n_frames, n_bands, features.frame_rate)
    return header + np.ascontiguousarray(features.frames, dtype="<f4").tobytes()


def decode_features(blob: bytes, source: str = "<bytes>") -> LogSpectrogram:
    if len(blob) < _header.size:
        raise BadFeatureFileError(source, f"{len(blob)} bytes is shorter than the {_header.size}-byte header")

    magic, version, n_frames, n_bands, frame_rate = _header.unpack_from(blob, 0)
    if magic != MAGIC:
        raise BadFeatureFileError(source, f"bad magic {magic!r}")
    if version != VERSION:
        raise BadFeatureFileError(source, f"unsupported version {version}")
    if frame_rate <= 0:
        raise BadFeatureFileError(source, f"frame rate {frame_rate} is not positive")

    expected = _header.size + 4 * n_frames * n_bands
    if len(blob) != expected:
        raise BadFeatureFileError(source, f"expected {expected} bytes for {n_frames}x{n_bands} values, got {len(blob)}")

    frames = np.frombuffer(blob, dtype="<f4", offset=_header.size).reshape(n_frames, n_bands)
    return LogSpectrogram(
        frames=frames.astype(np.float64),
        frame_rate=frame_rate,
        band_center_frequencies=np.full(n_bands, np.nan),
    )


def write_features(path: Path, features: LogSpectrogram) -> None:
    """
    Write a feature matrix to path atomically.

    Args:
        path (Path): Destination file.
        features (LogSpectrogram): Frames are stored as float32.
    """
    atomic_write_bytes(path, encode_features(features))
    logger.debug(f"Wrote {features.shape[0]}x{features.shape[1]} features to {path}")


def read_features(path: Path) -> LogSpectrogram:
    """
    Read a feature file.

    Raises:
        BadFeatureFileError: If the header is invalid or the body size does not match it.
    """
    return decode_features(path.read_bytes(), str(path))


__all__ = [
    "MAGIC",
    "VERSION",
    "encode_features",
    "decode_features",
    "write_features",
    "read_features",
]
