"""Text-level stutter rewriting and interjection post-processing plans."""
from __future__ import annotations

import enum
import random
from dataclasses import dataclass
from typing import Sequence

from .markup import StutterToken, find_stutter_tokens

MAX_SEED = 2**64 - 1


class Approach(str, enum.Enum):
    FULL_REPEAT = "FullRepeat"
    PARTIAL_REPEAT = "PartialRepeat"
    RESTART_REPEAT = "RestartRepeat"


@dataclass(frozen=True)
class StutterConfig:
    n: int = 4
    fragment_len: int = 3
    restart_fillers: tuple[str, ...] = ("um",)

    def __post_init__(self) -> None:
        if self.n < 1 or self.fragment_len < 1:
            raise ValueError("stutter.n and stutter.fragment_len must be >= 1")
        if not self.restart_fillers:
            raise ValueError("stutter.restart_fillers must not be empty")


@dataclass(frozen=True)
class StutterRewrite:
    original: tuple[str, str]
    approach: Approach
    text: str


@dataclass(frozen=True)
class InterjectionPlan:
    text: str
    stretch: float
    pause_ms: float


def make_rng(seed: int) -> random.Random:
    if not 0 <= seed <= MAX_SEED:
        raise ValueError(f"seed must be a 64-bit unsigned integer, got {seed}")
    return random.Random(seed)


def rewrite_stutter(
    token: StutterToken | Sequence[str],
    n: int = 4,
    rng: random.Random | None = None,
    *,
    fragment_len: int = 3,
    restart_fillers: Sequence[str] = ("um",),
    approach: Approach | None = None,
) -> StutterRewrite:
    """Turn a ``prefix-word`` stutter into the text the TTS voice should speak.

    Words shorter than ``n`` are doubled. Longer words get either a fragment
    repeat ("rec recently") or a restart with a filler between pauses
    ("recently... um... recently"), chosen with a fair draw from ``rng``.
    ``approach`` forces the long-word branch (ignored for short words).
    ``token`` is a :class:`StutterToken` or a bare ``(prefix, word)`` pair.
    """
    prefix, word = (token.prefix, token.word) if isinstance(token, StutterToken) else token
    if len(word) < n:
        return StutterRewrite((prefix, word), Approach.FULL_REPEAT, f"{word} {word}")
    if approach is None or approach is Approach.FULL_REPEAT:
        if rng is None:
            raise ValueError("rng is required to choose a long-word approach")
        approach = Approach.PARTIAL_REPEAT if rng.random() < 0.5 else Approach.RESTART_REPEAT
    if approach is Approach.PARTIAL_REPEAT:
        text = f"{word[:fragment_len]} {word}"
    else:
        filler = restart_fillers[0]
        if len(restart_fillers) > 1:
            if rng is None:
                raise ValueError("rng is required to pick among several restart fillers")
            filler = rng.choice(list(restart_fillers))
        text = f"{word}... {filler}... {word}"
    return StutterRewrite((prefix, word), approach, text)


def rewrite_clean_text(
    clean: str, rng: random.Random, cfg: StutterConfig = StutterConfig()
) -> tuple[str, list[StutterRewrite]]:
    """Rewrite every stutter token in ``clean``, left to right."""
    out = []
    rewrites = []
    pos = 0
    for tok in find_stutter_tokens(clean):
        rw = rewrite_stutter(
            (tok.prefix, tok.word), cfg.n, rng,
            fragment_len=cfg.fragment_len, restart_fillers=cfg.restart_fillers,
        )
        out.append(clean[pos:tok.position])
        out.append(rw.text)
        rewrites.append(rw)
        pos = tok.end
    out.append(clean[pos:])
    return "".join(out), rewrites


def plan_interjection(filler: str, stretch: float = 1.3, pause_ms: float = 200) -> InterjectionPlan:
    if not filler.strip():
        raise ValueError("filler must be non-empty")
    if stretch < 1.0:
        raise ValueError("stretch factor must be >= 1.0")
    if pause_ms < 0:
        raise ValueError("pause_ms must be >= 0")
    return InterjectionPlan(filler, float(stretch), float(pause_ms))
