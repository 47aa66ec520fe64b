"""Annotated text -> one speech waveform.

Per segment: clean text has its stutters rewritten and goes to the TTS
backend; cues are resolved to manifest assets; fillers are synthesized,
stretched and followed by a short silence; pauses become silence. Pieces are
spliced in order and the result is peak-normalized once.
"""
from __future__ import annotations

import json
import logging
import random
from dataclasses import dataclass, field
from typing import Iterator

from . import audio
from .audio import AudioBuffer
from .backends import BackendError, SynthesisRequest, make_backend, synthesize_with_retry
from .config import PipelineConfig
from .cues import (
    CueError,
    IntensityScale,
    load_embeddings,
    load_manifest,
    resolve_cue,
)
from .disfluency import make_rng, plan_interjection, rewrite_clean_text
from .markup import ParsedUtterance, SegmentKind, parse_utterance

log = logging.getLogger(__name__)

GAP = "Gap"


class PipelineError(Exception):
    def __init__(self, segment_index: int, cause: Exception):
        super().__init__(f"segment {segment_index}: {type(cause).__name__}: {cause}")
        self.segment_index = segment_index
        self.cause = cause


@dataclass(frozen=True)
class TracePiece:
    i: int
    kind: str
    detail: str
    samples: int
    backend: str
    segment: int

    def to_json(self) -> dict:
        return {"i": self.i, "kind": self.kind, "detail": self.detail,
                "samples": self.samples, "backend": self.backend}


@dataclass
class SynthesisTrace:
    pieces: list[TracePiece] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.pieces)

    def __iter__(self) -> Iterator[TracePiece]:
        return iter(self.pieces)

    @property
    def kinds(self) -> list[str]:
        return [p.kind for p in self.pieces]

    @property
    def total_samples(self) -> int:
        return sum(p.samples for p in self.pieces)

    def count(self, kind: str) -> int:
        return sum(1 for p in self.pieces if p.kind == kind)

    def to_jsonl(self) -> str:
        return "".join(json.dumps(p.to_json(), ensure_ascii=False) + "\n" for p in self.pieces)


@dataclass
class ConversationAudio:
    turns: list[tuple[AudioBuffer, SynthesisTrace] | None]
    combined: AudioBuffer
    errors: list[tuple[int, Exception]]


class Synthesizer:
    """Holds the loaded manifest, embeddings and backend for one config."""

    def __init__(self, cfg: PipelineConfig, backend=None):
        cfg.check_files()
        self.cfg = cfg
        self.manifest = load_manifest(cfg.manifest_path)
        self.table = load_embeddings(cfg.embeddings_path)
        self.scale = IntensityScale(cfg.references, cfg.default_rank)
        self.scale.validate(self.table)
        self.backend = backend if backend is not None else make_backend(cfg.backend)
        self.backend_name = cfg.backend.name
        self._assets: dict[tuple[str, int], AudioBuffer] = {}

    def parse(self, text: str) -> ParsedUtterance:
        return parse_utterance(text, self.cfg.lexicon, lenient=self.cfg.lenient)

    def _asset(self, emotion: str, rank: int) -> AudioBuffer:
        key = (emotion, rank)
        if key not in self._assets:
            self._assets[key] = audio.resample(self.manifest.asset(emotion, rank), self.cfg.rate)
        return self._assets[key]

    def _speak(self, text: str) -> AudioBuffer:
        d = self.cfg.backend
        req = SynthesisRequest(text.strip(), d.voice, self.cfg.rate)
        buf = synthesize_with_retry(req, self.backend, d.max_retries, d.backoff_ms)
        return audio.resample(buf, self.cfg.rate)

    def _interjection(self, filler: str) -> AudioBuffer:
        plan = plan_interjection(filler, self.cfg.interjection_stretch, self.cfg.interjection_pause_ms)
        spoken = audio.time_stretch(self._speak(plan.text), plan.stretch)
        return audio.concat([spoken, audio.silence(plan.pause_ms, self.cfg.rate)])

    def _segment_pieces(self, parsed: ParsedUtterance, rng: random.Random):
        """Yield (segment index, kind, detail, backend label, buffer)."""
        cfg = self.cfg
        for k, seg in enumerate(parsed.segments):
            try:
                if seg.kind is SegmentKind.CLEAN:
                    if not seg.payload.strip():
                        continue
                    rewritten, rewrites = rewrite_clean_text(seg.payload, rng, cfg.stutter)
                    if not rewrites:
                        yield k, SegmentKind.CLEAN.value, seg.payload, self.backend_name, self._speak(seg.payload)
                        continue
                    # restart rewrites carry their own pauses and filler
                    sub = parse_utterance(rewritten, cfg.lexicon, lenient=True, leading_interjection=False)
                    for s in sub.segments:
                        if s.kind is SegmentKind.CLEAN:
                            if s.payload.strip():
                                yield k, s.kind.value, s.payload, self.backend_name, self._speak(s.payload)
                        elif s.kind is SegmentKind.PAUSE:
                            yield k, s.kind.value, sub.text_of(s), "silence", audio.silence(cfg.pause_ms, cfg.rate)
                        else:
                            yield k, s.kind.value, s.payload, self.backend_name, self._interjection(s.payload)
                elif seg.kind is SegmentKind.EMOTION_CUE:
                    cue = resolve_cue(seg.payload, self.manifest, self.scale, self.table)
                    yield k, seg.kind.value, cue.describe(), "asset", self._asset(cue.emotion_head, cue.rank)
                elif seg.kind is SegmentKind.INTERJECTION:
                    yield k, seg.kind.value, seg.payload, self.backend_name, self._interjection(seg.payload)
                elif seg.kind is SegmentKind.PAUSE:
                    yield k, seg.kind.value, parsed.text_of(seg), "silence", audio.silence(cfg.pause_ms, cfg.rate)
            except (BackendError, CueError, audio.AudioError, ValueError) as exc:
                raise PipelineError(k, exc) from exc

    def synthesize_utterance(self, text: str, rng: random.Random | None = None) -> tuple[AudioBuffer, SynthesisTrace]:
        cfg = self.cfg
        rng = rng if rng is not None else make_rng(cfg.seed)
        parsed = self.parse(text)
        buffers: list[AudioBuffer] = []
        trace = SynthesisTrace()
        for seg_index, kind, detail, backend, buf in self._segment_pieces(parsed, rng):
            if buffers and cfg.splice_gap_ms > 0:
                gap = audio.silence(cfg.splice_gap_ms, cfg.rate)
                trace.pieces.append(TracePiece(len(trace), GAP, f"{cfg.splice_gap_ms:g}ms", len(gap), "silence", seg_index))
                buffers.append(gap)
            trace.pieces.append(TracePiece(len(trace), kind, detail, len(buf), backend, seg_index))
            buffers.append(buf)
        out = audio.normalize_peak(audio.concat(buffers, cfg.rate), cfg.normalize_peak)
        log.debug("synthesized %d pieces, %d samples", len(trace), len(out))
        return out, trace

    def synthesize_conversation(self, turns: list[str]) -> ConversationAudio:
        """Synthesize each turn and splice them with ``conversation_gap_ms`` between.

        A failing turn is reported in ``errors`` and left out of the combined
        waveform; the remaining turns still render.
        """
        if not turns:
            raise ValueError("no turns to synthesize")
        cfg = self.cfg
        results: list[tuple[AudioBuffer, SynthesisTrace] | None] = []
        errors: list[tuple[int, Exception]] = []
        for k, text in enumerate(turns):
            try:
                results.append(self.synthesize_utterance(text, make_rng((cfg.seed + k) % 2**64)))
            except Exception as exc:  # noqa: BLE001 - reported per turn
                log.error("turn %d failed: %s", k, exc)
                errors.append((k, exc))
                results.append(None)
        pieces: list[AudioBuffer] = []
        for r in results:
            if r is None:
                continue
            if pieces:
                pieces.append(audio.silence(cfg.conversation_gap_ms, cfg.rate))
            pieces.append(r[0])
        return ConversationAudio(results, audio.concat(pieces, cfg.rate), errors)


def synthesize_utterance(text: str, cfg: PipelineConfig | None = None) -> tuple[AudioBuffer, SynthesisTrace]:
    return Synthesizer(cfg or PipelineConfig()).synthesize_utterance(text)


def synthesize_conversation(turns: list[str], cfg: PipelineConfig | None = None) -> ConversationAudio:
    return Synthesizer(cfg or PipelineConfig()).synthesize_conversation(turns)
