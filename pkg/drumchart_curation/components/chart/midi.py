"""
Standard MIDI File reading and writing.

Formats 0 and 1 with PPQ time division are supported. Delta times are accumulated into absolute
ticks, running status is honoured, note-on events with velocity 0 become note-off events, and
everything this project has no use for (controllers, sysex, unknown meta events) is skipped.
"""

import struct
from typing import Iterable, Sequence

from structlog import get_logger

from .schemas import MidiEventKind, MidiFileData, RawMidiEvent

logger = get_logger(__name__)

HEADER_MAGIC = b"MThd"
TRACK_MAGIC = b"MTrk"
HEADER_LENGTH = 6

META_TRACK_NAME = 0x03
META_END_OF_TRACK = 0x2F
META_TEMPO = 0x51

unpack_chunk_header = struct.Struct(">4sI").unpack_from
unpack_midi_header = struct.Struct(">hhh").unpack_from


class MidiParseError(Exception):
    def __init__(self, message: str, offset: int, *args: object) -> None:
        super().__init__(f"{message} (byte offset {offset})", *args)
        self.offset = offset


class MalformedHeaderError(MidiParseError):
    pass


class TruncatedFileError(MidiParseError):
    pass


class UnsupportedFormatError(MidiParseError):
    pass


def _read_var_len(data: bytes, pos: int, end: int) -> tuple[int, int]:
    """
    Reads a variable-length quantity from data starting on pos.

    Returns the value and the new position.
    """
    value = 0
    for _ in range(4):
        if pos >= end:
            raise TruncatedFileError("variable-length quantity runs past the end of its chunk", pos)
        byte = data[pos]
        pos += 1
        value = (value << 7) | (byte & 0x7F)
        if not byte & 0x80:
            return value, pos
    raise MidiParseError("variable-length quantity longer than four bytes", pos)


def _require(data: bytes, pos: int, count: int, end: int, what: str) -> None:
    if pos + count > end:
        raise TruncatedFileError(f"{what} runs past the end of its chunk", pos)


def _parse_track(data: bytes, start: int, end: int) -> list[RawMidiEvent]:
    events: list[RawMidiEvent] = []
    running_status: int | None = None
    tick = 0
    pos = start

    while pos < end:
        delta, pos = _read_var_len(data, pos, end)
        tick += delta

        _require(data, pos, 1, end, "event status")
        status = data[pos]
        if status & 0x80:
            pos += 1
            if status < 0xF0:
                running_status = status
            elif status < 0xF8:
                # sysex and system common messages cancel running status
                running_status = None
        elif running_status is None:
            raise MidiParseError("data byte without running status", pos)
        else:
            status = running_status

        if status == 0xFF:
            _require(data, pos, 1, end, "meta event type")
            meta_type = data[pos]
            length, pos = _read_var_len(data, pos + 1, end)
            _require(data, pos, length, end, "meta event payload")
            payload = data[pos : pos + length]
            pos += length

            if meta_type == META_END_OF_TRACK:
                break
            if meta_type == META_TEMPO and length == 3:
                tempo = int.from_bytes(payload, "big")
                if tempo > 0:
                    events.append(RawMidiEvent(tick=tick, kind=MidiEventKind.TEMPO_CHANGE, tempo_us_per_quarter=tempo))
                    continue
            if meta_type == META_TRACK_NAME:
                text = payload.decode("latin-1")
                events.append(RawMidiEvent(tick=tick, kind=MidiEventKind.TRACK_NAME, text=text, meta_type=meta_type))
                continue
            events.append(RawMidiEvent(tick=tick, kind=MidiEventKind.OTHER_META, meta_type=meta_type))
        elif status in (0xF0, 0xF7):
            length, pos = _read_var_len(data, pos, end)
            _require(data, pos, length, end, "sysex payload")
            pos += length
        elif status >= 0xF0:
            # system common / realtime bytes are not legal in files; skip their data bytes
            pos += {0xF1: 1, 0xF2: 2, 0xF3: 1}.get(status, 0)
        else:
            event_type = status >> 4
            channel = status & 0x0F
            size = 1 if event_type in (0xC, 0xD) else 2
            _require(data, pos, size, end, "channel event data")
            if event_type in (0x8, 0x9):
                pitch, velocity = data[pos] & 0x7F, data[pos + 1] & 0x7F
                kind = MidiEventKind.NOTE_ON if event_type == 0x9 and velocity > 0 else MidiEventKind.NOTE_OFF
                events.append(RawMidiEvent(tick=tick, kind=kind, pitch=pitch, velocity=velocity, channel=channel))
            pos += size

    return events


def parse_smf(blob: bytes) -> MidiFileData:
    """
    Parse a Standard MIDI File.

    Args:
        blob (bytes): The complete file content.

    Returns:
        MidiFileData: Per-track absolute-tick events and the PPQ resolution.

    Raises:
        MalformedHeaderError: If the header chunk is missing or has a bad length.
        TruncatedFileError: If a chunk extends past the end of the data.
        UnsupportedFormatError: For SMPTE time division or MIDI format 2.
    """
    if len(blob) < 8 or blob[:4] != HEADER_MAGIC:
        raise MalformedHeaderError("missing 'MThd' header chunk", 0)

    _, header_length = unpack_chunk_header(blob, 0)
    if header_length < HEADER_LENGTH:
        raise MalformedHeaderError(f"header chunk length {header_length} is shorter than {HEADER_LENGTH}", 4)
    if 8 + header_length > len(blob):
        raise TruncatedFileError("header chunk extends past end of file", 8)

    fmt, n_tracks, division = unpack_midi_header(blob, 8)
    if division < 0:
        raise UnsupportedFormatError("SMPTE time division is not supported", 12)
    if division == 0:
        raise MalformedHeaderError("time division of zero ticks per quarter", 12)
    if fmt not in (0, 1):
        raise UnsupportedFormatError(f"MIDI format {fmt} is not supported", 8)

    tracks: list[tuple[RawMidiEvent, ...]] = []
    pos = 8 + header_length
    while pos < len(blob) and len(tracks) < n_tracks:
        if pos + 8 > len(blob):
            raise TruncatedFileError("chunk header extends past end of file", pos)
        magic, length = unpack_chunk_header(blob, pos)
        body = pos + 8
        if body + length > len(blob):
            raise TruncatedFileError(f"chunk declares {length} bytes but only {len(blob) - body} remain", pos)
        if magic == TRACK_MAGIC:
            tracks.append(tuple(_parse_track(blob, body, body + length)))
        else:
            logger.debug(f"Skipping unknown chunk {magic!r} at offset {pos}")
        pos = body + length

    if len(tracks) < n_tracks:
        logger.warning(f"Header declares {n_tracks} tracks but {len(tracks)} were found")

    return MidiFileData(ticks_per_quarter=division, format=fmt, tracks=tuple(tracks))


def _write_var_len(value: int) -> bytes:
    if value < 0:
        raise ValueError("variable-length quantities are non-negative")
    out = [value & 0x7F]
    value >>= 7
    while value:
        out.append((value & 0x7F) | 0x80)
        value >>= 7
    return bytes(reversed(out))


def _encode_event(event: RawMidiEvent) -> bytes:
    channel = event.channel or 0
    match event.kind:
        case MidiEventKind.NOTE_ON:
            return bytes([0x90 | channel, event.pitch, event.velocity])
        case MidiEventKind.NOTE_OFF:
            return bytes([0x80 | channel, event.pitch, event.velocity])
        case MidiEventKind.TEMPO_CHANGE:
            assert event.tempo_us_per_quarter is not None
            return bytes([0xFF, META_TEMPO, 3]) + event.tempo_us_per_quarter.to_bytes(3, "big")
        case MidiEventKind.TRACK_NAME:
            payload = (event.text or "").encode("latin-1")
            return bytes([0xFF, META_TRACK_NAME]) + _write_var_len(len(payload)) + payload
        case _:
            # other meta events are written back as empty text events of their type
            return bytes([0xFF, event.meta_type if event.meta_type is not None else 0x01, 0])


def write_smf(tracks: Sequence[Iterable[RawMidiEvent]], ticks_per_quarter: int) -> bytes:
    """
    Serialize tracks of absolute-tick events to a Standard MIDI File (format 0 for a single
    track, format 1 otherwise). Running status is not used.

    Args:
        tracks (Sequence[Iterable[RawMidiEvent]]): Events per track, sorted by tick.
        ticks_per_quarter (int): PPQ resolution written to the header.

    Returns:
        bytes: The file content.
    """
    fmt = 0 if len(tracks) == 1 else 1
    out = bytearray(HEADER_MAGIC + struct.pack(">Ihhh", HEADER_LENGTH, fmt, len(tracks), ticks_per_quarter))
    for track in tracks:
        body = bytearray()
        last_tick = 0
        for event in track:
            if event.tick < last_tick:
                raise ValueError(f"events must be sorted by tick, {event.tick} follows {last_tick}")
            body += _write_var_len(event.tick - last_tick) + _encode_event(event)
            last_tick = event.tick
        body += b"\x00\xff\x2f\x00"
        out += TRACK_MAGIC + struct.pack(">I", len(body)) + body
    return bytes(out)


__all__ = [
    "MidiParseError",
    "MalformedHeaderError",
    "TruncatedFileError",
    "UnsupportedFormatError",
    "parse_smf",
    "write_smf",
]
