"""Mono PCM waveform algebra: WAV codec, resampling, stretching, splicing."""
from __future__ import annotations

import math
import struct
from dataclasses import dataclass
from typing import Iterable

import numpy as np

DEFAULT_RATE = 16000


class AudioError(Exception):
    pass


class MalformedWav(AudioError):
    pass


class UnsupportedFormat(AudioError):
    pass


class RateMismatch(AudioError):
    pass


def round_half_away(x: float) -> int:
    """Round to the nearest integer, ties away from zero (round(2.5) == 3)."""
    return int(math.copysign(math.floor(abs(x) + 0.5), x))


@dataclass(frozen=True, eq=False)
class AudioBuffer:
    """Mono float samples at a fixed sample rate.

    The sample array is stored read-only; operations always return new buffers.
    """

    sample_rate: int
    samples: np.ndarray

    def __post_init__(self) -> None:
        if int(self.sample_rate) <= 0:
            raise ValueError(f"sample_rate must be positive, got {self.sample_rate}")
        arr = np.array(self.samples, dtype=np.float64).reshape(-1)
        arr.flags.writeable = False
        object.__setattr__(self, "samples", arr)
        object.__setattr__(self, "sample_rate", int(self.sample_rate))

    def __len__(self) -> int:
        return int(self.samples.shape[0])

    @property
    def duration_ms(self) -> float:
        return len(self) * 1000.0 / self.sample_rate

    @classmethod
    def empty(cls, sample_rate: int = DEFAULT_RATE) -> "AudioBuffer":
        return cls(sample_rate, np.zeros(0))

    def peak(self) -> float:
        return float(np.max(np.abs(self.samples))) if len(self) else 0.0


# --- WAV codec -------------------------------------------------------------

def decode_wav(data: bytes) -> AudioBuffer:
    """Decode a RIFF/WAVE PCM16 mono file. Unknown chunks are skipped."""
    if len(data) < 12 or data[0:4] != b"RIFF" or data[8:12] != b"WAVE":
        raise MalformedWav("missing RIFF/WAVE magic")
    pos = 12
    fmt = None
    pcm = None
    while pos + 8 <= len(data):
        chunk_id = data[pos:pos + 4]
        (size,) = struct.unpack_from("<I", data, pos + 4)
        body = data[pos + 8:pos + 8 + size]
        if len(body) < size:
            raise MalformedWav(f"chunk {chunk_id!r} truncated")
        if chunk_id == b"fmt ":
            if size < 16:
                raise MalformedWav("fmt chunk too short")
            fmt = struct.unpack_from("<HHIIHH", body, 0)
        elif chunk_id == b"data":
            pcm = body
        pos += 8 + size + (size & 1)
    if fmt is None:
        raise MalformedWav("no fmt chunk")
    if pcm is None:
        raise MalformedWav("no data chunk")
    audio_format, channels, rate, _byte_rate, _align, bits = fmt
    if audio_format != 1:
        raise UnsupportedFormat(f"audio format {audio_format} is not PCM")
    if channels != 1:
        raise UnsupportedFormat(f"{channels} channels; only mono is supported")
    if bits != 16:
        raise UnsupportedFormat(f"{bits}-bit samples; only 16-bit is supported")
    if rate == 0:
        raise MalformedWav("sample rate is zero")
    if len(pcm) % 2:
        raise MalformedWav("odd-length PCM16 data")
    ints = np.frombuffer(pcm, dtype="<i2")
    return AudioBuffer(rate, ints.astype(np.float64) / 32768.0)


def to_pcm16(samples: np.ndarray) -> np.ndarray:
    # x32768 with clipping: exact inverse of decode's /32768 on every 16-bit value.
    scaled = np.clip(np.asarray(samples, dtype=np.float64), -1.0, 1.0) * 32768.0
    rounded = np.sign(scaled) * np.floor(np.abs(scaled) + 0.5)
    return np.clip(rounded, -32768, 32767).astype("<i2")


def encode_wav(buf: AudioBuffer) -> bytes:
    """Canonical 44-byte-header PCM16 LE mono WAV."""
    pcm = to_pcm16(buf.samples).tobytes()
    header = struct.pack(
        "<4sI4s4sIHHIIHH4sI",
        b"RIFF", 36 + len(pcm), b"WAVE",
        b"fmt ", 16, 1, 1, buf.sample_rate, buf.sample_rate * 2, 2, 16,
        b"data", len(pcm),
    )
    return header + pcm


def read_wav(path) -> AudioBuffer:
    with open(path, "rb") as fh:
        return decode_wav(fh.read())


# --- transforms ------------------------------------------------------------

def _interp(samples: np.ndarray, positions: np.ndarray) -> np.ndarray:
    if samples.size == 0:
        return np.zeros(positions.shape[0])
    return np.interp(positions, np.arange(samples.size, dtype=np.float64), samples)


def resample(buf: AudioBuffer, target_rate: int) -> AudioBuffer:
    """Linear-interpolation resampling to ``target_rate``."""
    if target_rate <= 0:
        raise ValueError("target_rate must be positive")
    if target_rate == buf.sample_rate:
        return AudioBuffer(buf.sample_rate, buf.samples.copy())
    n_out = round_half_away(len(buf) * target_rate / buf.sample_rate)
    positions = np.arange(n_out, dtype=np.float64) * (buf.sample_rate / target_rate)
    return AudioBuffer(target_rate, _interp(buf.samples, positions))


def time_stretch(buf: AudioBuffer, factor: float) -> AudioBuffer:
    """Lengthen by ``factor`` via interpolation; pitch drops accordingly."""
    if factor < 1.0:
        raise ValueError(f"stretch factor must be >= 1.0, got {factor}")
    if factor == 1.0:
        return AudioBuffer(buf.sample_rate, buf.samples.copy())
    n_out = round_half_away(len(buf) * factor)
    positions = np.arange(n_out, dtype=np.float64) / factor
    return AudioBuffer(buf.sample_rate, _interp(buf.samples, positions))


def silence(duration_ms: float, rate: int) -> AudioBuffer:
    if duration_ms < 0:
        raise ValueError("duration_ms must be >= 0")
    return AudioBuffer(rate, np.zeros(round_half_away(duration_ms * rate / 1000.0)))


def concat(buffers: Iterable[AudioBuffer], sample_rate: int | None = None) -> AudioBuffer:
    """Splice buffers end to end. All must share one rate.

    ``sample_rate`` sets the rate of the result for an empty input list
    (default 16 kHz) and is otherwise checked against the inputs.
    """
    buffers = list(buffers)
    if not buffers:
        return AudioBuffer.empty(sample_rate or DEFAULT_RATE)
    rate = buffers[0].sample_rate
    for i, b in enumerate(buffers):
        if b.sample_rate != rate:
            raise RateMismatch(f"buffer {i} is {b.sample_rate} Hz, expected {rate} Hz")
    if sample_rate is not None and sample_rate != rate:
        raise RateMismatch(f"buffers are {rate} Hz, expected {sample_rate} Hz")
    return AudioBuffer(rate, np.concatenate([b.samples for b in buffers]))


def normalize_peak(buf: AudioBuffer, target_peak: float = 0.89) -> AudioBuffer:
    if not 0.0 < target_peak <= 1.0:
        raise ValueError("target_peak must be in (0, 1]")
    peak = buf.peak()
    if peak == 0.0:
        return AudioBuffer(buf.sample_rate, buf.samples.copy())
    return AudioBuffer(buf.sample_rate, buf.samples * (target_peak / peak))


def sine(freq_hz: float, n_samples: int, rate: int, amplitude: float = 0.3) -> AudioBuffer:
    t = np.arange(n_samples, dtype=np.float64) / rate
    return AudioBuffer(rate, amplitude * np.sin(2.0 * np.pi * freq_hz * t))
