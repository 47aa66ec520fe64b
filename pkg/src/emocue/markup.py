"""Lossless segmentation of emotion/disfluency-annotated response text.

Input looks like ``*cries softly* Um, trying to, you know... but it's hard.``
and is cut into typed spans that tile the source exactly:

* ``EmotionCue`` -- an asterisk-delimited stage direction (payload: the inner text)
* ``Pause`` -- a run of three or more dots, or a horizontal ellipsis
* ``Interjection`` -- a filler word taken from the lexicon, recognised only at
  the start of the utterance or right after a cue or pause (whitespace may
  intervene); fillers elsewhere stay in the clean text
* ``Clean`` -- everything else

Stutter tokens (``m-my``) stay inside clean text and are located separately
with :func:`find_stutter_tokens`.
"""
from __future__ import annotations

import enum
import re
from dataclasses import dataclass
from typing import Any, NamedTuple, Sequence

DEFAULT_LEXICON: tuple[str, ...] = ("uh", "um", "you know", "I mean", "like", "right")

ELLIPSIS = "…"
_PAUSE = re.compile(r"\.{3,}|…+")
_WS = re.compile(r"\s*")
_STUTTER = re.compile(
    r"(?<![\w-])(?P<prefix>[^\W\d_]{1,3})-(?P<word>[^\W\d_]+(?:'[^\W\d_]+)*)(?![\w-])"
)


class MarkupError(ValueError):
    pass


class UnbalancedAsterisk(MarkupError):
    def __init__(self, position: int):
        super().__init__(f"unmatched '*' at offset {position}")
        self.position = position


class SegmentKind(str, enum.Enum):
    CLEAN = "Clean"
    EMOTION_CUE = "EmotionCue"
    INTERJECTION = "Interjection"
    STUTTER = "Stutter"
    PAUSE = "Pause"


@dataclass(frozen=True)
class Segment:
    kind: SegmentKind
    start: int
    end: int
    # Clean/Interjection: str; EmotionCue: str without asterisks;
    # Stutter: (prefix, word); Pause: number of dots (an ellipsis counts as 3)
    payload: Any

    @property
    def is_disfluency(self) -> bool:
        return self.kind is not SegmentKind.CLEAN

    def to_json(self) -> dict:
        payload = list(self.payload) if self.kind is SegmentKind.STUTTER else self.payload
        return {"kind": self.kind.value, "start": self.start, "end": self.end, "payload": payload}

    @classmethod
    def from_json(cls, obj: dict) -> "Segment":
        kind = SegmentKind(obj["kind"])
        payload = obj["payload"]
        if kind is SegmentKind.STUTTER:
            payload = tuple(payload)
        return cls(kind, int(obj["start"]), int(obj["end"]), payload)


@dataclass(frozen=True)
class ParsedUtterance:
    source: str
    segments: tuple[Segment, ...]

    def text_of(self, seg: Segment) -> str:
        return self.source[seg.start:seg.end]

    def clean_texts(self) -> list[str]:
        """Source text between consecutive disfluency segments.

        Always one more entry than :meth:`disfluencies`; gaps where two
        disfluencies touch (or the text starts/ends with one) come out empty.
        """
        out = []
        pos = 0
        for seg in self.segments:
            if seg.is_disfluency:
                out.append(self.source[pos:seg.start])
                pos = seg.end
        out.append(self.source[pos:])
        return out

    def disfluencies(self) -> list[str]:
        """Cue payloads, filler words and raw pause text, in order."""
        return [
            seg.payload if seg.kind is SegmentKind.EMOTION_CUE else self.text_of(seg)
            for seg in self.segments
            if seg.is_disfluency
        ]

    def to_json(self) -> dict:
        return {"source": self.source, "segments": [s.to_json() for s in self.segments]}

    @classmethod
    def from_json(cls, obj: dict) -> "ParsedUtterance":
        return cls(obj["source"], tuple(Segment.from_json(s) for s in obj["segments"]))


class StutterToken(NamedTuple):
    position: int
    prefix: str
    word: str

    @property
    def end(self) -> int:
        return self.position + len(self.prefix) + 1 + len(self.word)


def _interjection_pattern(lexicon: Sequence[str]) -> re.Pattern[str]:
    words = sorted({w.strip() for w in lexicon if w.strip()}, key=len, reverse=True)
    if not words:
        raise ValueError("interjection lexicon is empty")
    alts = "|".join(r"\s+".join(map(re.escape, w.split())) for w in words)
    return re.compile(rf"(?:{alts})(?![\w'])", re.IGNORECASE)


def parse_utterance(
    text: str,
    lexicon: Sequence[str] = DEFAULT_LEXICON,
    *,
    lenient: bool = False,
    leading_interjection: bool = True,
) -> ParsedUtterance:
    """Segment ``text``; see the module docstring for the grammar.

    An odd number of asterisks raises :class:`UnbalancedAsterisk` unless
    ``lenient``, in which case the last asterisk is kept as clean text.
    ``leading_interjection=False`` disables filler extraction at offset 0
    (used when re-parsing a fragment taken from the middle of an utterance).
    """
    interjection = _interjection_pattern(lexicon)
    stars = [i for i, ch in enumerate(text) if ch == "*"]
    if len(stars) % 2:
        if not lenient:
            raise UnbalancedAsterisk(stars[-1])
        stars.pop()
    closing = dict(zip(stars[::2], stars[1::2]))

    segments: list[Segment] = []
    clean_start = 0

    def flush(end: int) -> None:
        if end > clean_start:
            segments.append(Segment(SegmentKind.CLEAN, clean_start, end, text[clean_start:end]))

    i = 0
    n = len(text)
    expect_filler = leading_interjection
    while i < n:
        if expect_filler:
            expect_filler = False
            q = _WS.match(text, i).end()
            m = interjection.match(text, q)
            if m:
                flush(q)
                segments.append(Segment(SegmentKind.INTERJECTION, q, m.end(), m.group(0)))
                i = clean_start = m.end()
                continue
        if i in closing:
            j = closing[i]
            flush(i)
            segments.append(Segment(SegmentKind.EMOTION_CUE, i, j + 1, text[i + 1:j]))
            i = clean_start = j + 1
            expect_filler = True
            continue
        m = _PAUSE.match(text, i)
        if m:
            flush(i)
            run = m.group(0)
            dots = 3 * len(run) if run[0] == ELLIPSIS else len(run)
            segments.append(Segment(SegmentKind.PAUSE, i, m.end(), dots))
            i = clean_start = m.end()
            expect_filler = True
            continue
        i += 1
    flush(n)
    return ParsedUtterance(text, tuple(segments))


def find_stutter_tokens(clean: str) -> list[StutterToken]:
    """Hyphenated onset repeats (``m-my``, ``I-I``) whose prefix starts the word."""
    found = []
    for m in _STUTTER.finditer(clean):
        prefix, word = m.group("prefix"), m.group("word")
        if word.lower().startswith(prefix.lower()):
            found.append(StutterToken(m.start(), prefix, word))
    return found


def reconstruct(parsed: ParsedUtterance) -> str:
    return "".join(parsed.source[s.start:s.end] for s in parsed.segments)
