"""Text-to-speech backends behind one ``synthesize`` contract.

``stub`` renders a fixed-frequency sine whose length is proportional to the
character count, so durations are analytic. ``http`` POSTs
``{"text", "voice", "sample_rate"}`` as JSON and expects a WAV body back;
vendor APIs are reached through a small proxy or config mapping, not here.
"""
from __future__ import annotations

import logging
import os
import time
from dataclasses import dataclass, field
from typing import Any, Callable, Mapping
from urllib.parse import urlparse

import requests

from .audio import AudioBuffer, AudioError, decode_wav, round_half_away, sine

log = logging.getLogger(__name__)


class BackendError(Exception):
    pass


class BackendUnavailable(BackendError):
    pass


class BadResponse(BackendError):
    pass


class EmptyText(BackendError, ValueError):
    pass


@dataclass(frozen=True)
class SynthesisRequest:
    text: str
    voice: str = "default"
    rate: int = 16000


@dataclass(frozen=True)
class BackendDescriptor:
    name: str
    kind: str = "stub"
    # stub
    ms_per_char: float = 60.0
    freq_hz: float = 220.0
    amplitude: float = 0.3
    rate: int = 16000
    # http
    url: str | None = None
    voice: str = "default"
    token_env: str | None = None
    timeout_s: float = 30.0
    max_retries: int = 2
    backoff_ms: float = 250.0
    extra: Mapping[str, Any] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.kind == "stub":
            if self.ms_per_char <= 0 or self.freq_hz <= 0 or self.rate <= 0:
                raise ValueError(f"stub backend {self.name!r}: ms_per_char, freq_hz and rate must be positive")
        elif self.kind == "http":
            parsed = urlparse(self.url or "")
            if parsed.scheme not in ("http", "https") or not parsed.netloc:
                raise ValueError(f"http backend {self.name!r}: bad url {self.url!r}")
        else:
            raise ValueError(f"backend {self.name!r}: unknown kind {self.kind!r}")

    @classmethod
    def from_config(cls, name: str, obj: Mapping[str, Any]) -> "BackendDescriptor":
        known = {f for f in cls.__dataclass_fields__ if f not in ("name", "extra")}
        kwargs = {k: v for k, v in obj.items() if k in known}
        extra = {k: v for k, v in obj.items() if k not in known}
        return cls(name=name, extra=extra, **kwargs)


def _spoken(text: str) -> str:
    spoken = text.strip()
    if not spoken:
        raise EmptyText("nothing to synthesize")
    return spoken


def stub_sample_count(text: str, ms_per_char: float, rate: int) -> int:
    return round_half_away(len(text.strip()) * ms_per_char * rate / 1000.0)


class StubBackend:
    def __init__(self, descriptor: BackendDescriptor):
        self.descriptor = descriptor

    def synthesize(self, req: SynthesisRequest) -> AudioBuffer:
        d = self.descriptor
        n = stub_sample_count(_spoken(req.text), d.ms_per_char, d.rate)
        return sine(d.freq_hz, n, d.rate, d.amplitude)


class HttpBackend:
    def __init__(self, descriptor: BackendDescriptor, session: requests.Session | None = None):
        self.descriptor = descriptor
        self.session = session or requests.Session()

    def synthesize(self, req: SynthesisRequest) -> AudioBuffer:
        d = self.descriptor
        body = {"text": _spoken(req.text), "voice": req.voice or d.voice, "sample_rate": req.rate}
        headers = {"Accept": "audio/wav"}
        if d.token_env:
            token = os.environ.get(d.token_env)
            if token:
                headers["Authorization"] = f"Bearer {token}"
        try:
            resp = self.session.post(d.url, json=body, headers=headers, timeout=d.timeout_s)
        except requests.RequestException as exc:
            raise BackendUnavailable(f"{d.name}: {exc}") from exc
        if resp.status_code >= 500 or resp.status_code in (408, 429):
            raise BackendUnavailable(f"{d.name}: HTTP {resp.status_code}")
        if resp.status_code != 200:
            raise BadResponse(f"{d.name}: HTTP {resp.status_code}")
        try:
            return decode_wav(resp.content)
        except AudioError as exc:
            raise BadResponse(f"{d.name}: undecodable audio: {exc}") from exc


def make_backend(descriptor: BackendDescriptor):
    if descriptor.kind == "stub":
        return StubBackend(descriptor)
    return HttpBackend(descriptor)


def synthesize(req: SynthesisRequest, backend) -> AudioBuffer:
    """Synthesize with a backend instance or a :class:`BackendDescriptor`."""
    if isinstance(backend, BackendDescriptor):
        backend = make_backend(backend)
    return backend.synthesize(req)


def backoff_schedule(max_retries: int, backoff_ms: float) -> list[float]:
    """Delays in ms before each retry: backoff, 2x backoff, 4x backoff, ..."""
    return [backoff_ms * 2**i for i in range(max_retries)]


def synthesize_with_retry(
    req: SynthesisRequest,
    backend,
    max_retries: int = 2,
    backoff_ms: float = 250.0,
    *,
    sleep: Callable[[float], None] = time.sleep,
    on_retry: Callable[[int, BackendUnavailable], None] | None = None,
) -> AudioBuffer:
    """Retry only on :class:`BackendUnavailable`; other errors surface at once."""
    delays = backoff_schedule(max_retries, backoff_ms)
    for attempt in range(max_retries + 1):
        try:
            return synthesize(req, backend)
        except BackendUnavailable as exc:
            if attempt == max_retries:
                raise
            log.warning("backend unavailable (attempt %d): %s", attempt + 1, exc)
            if on_retry is not None:
                on_retry(attempt + 1, exc)
            sleep(delays[attempt] / 1000.0)
    raise AssertionError("unreachable")
