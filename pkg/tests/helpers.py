"""Shared generators and independent oracles for the test-suite."""
from __future__ import annotations

import io
import json
import math
import random
import wave
from pathlib import Path

DATA = Path(__file__).parent / "data"

CRIES_EXAMPLE = "*cries softly* Um, trying to, you know... but it's... it's hard."

WORDS = ["I", "it's", "hard", "trying", "to", "my", "wife", "cope", "Hello,", "Rohan.", "drinking",
         "well-known", "x-ray", "son", "busy", "PhD,", "recently", "yeah", "help", "sad", "really"]
FILLERS = ["uh", "um", "Um", "Uh", "you know", "I mean", "like", "right"]
CUES = ["sighs", "sighs heavily", "cries softly", "looks down", "nods, clears throat", "", "bites lip",
        "laughs", "smiles", "sobs quietly", "flags with his hands"]
STUTTERS = ["m-my", "r-recently", "y-yeah", "I-I", "M-My", "p-proud", "W-wife", "U-uh", "n-no"]
GLUE = [" ", ", ", "", "  ", "\n", "? ", "! "]


def load_tables() -> dict:
    with open(DATA / "conversations.json", encoding="utf-8") as fh:
        return json.load(fh)


def random_annotated(rng: random.Random, max_parts: int = 12) -> str:
    """Compose cues, fillers, stutters, dot runs and words into a balanced-asterisk string."""
    parts = []
    for _ in range(rng.randint(0, max_parts)):
        r = rng.random()
        if r < 0.15:
            parts.append(f"*{rng.choice(CUES)}*")
        elif r < 0.3:
            parts.append(rng.choice(FILLERS))
        elif r < 0.42:
            parts.append(rng.choice(STUTTERS))
        elif r < 0.55:
            parts.append(rng.choice(["...", "....", "…", "......", ".", ".."]))
        else:
            parts.append(rng.choice(WORDS))
        parts.append(rng.choice(GLUE))
    return "".join(parts)


def round_half_up(x: float) -> int:
    return int(math.floor(x + 0.5))


def wav_frames_stdlib(path) -> tuple[int, int]:
    """(frame count, rate) read with the stdlib wave module."""
    with wave.open(str(path), "rb") as w:
        return w.getnframes(), w.getframerate()


def canonical_wav_stdlib(values: list[int], rate: int) -> bytes:
    """A PCM16 mono file written by the stdlib wave module (independent of emocue)."""
    bio = io.BytesIO()
    with wave.open(bio, "wb") as w:
        w.setnchannels(1)
        w.setsampwidth(2)
        w.setframerate(rate)
        w.writeframes(b"".join(v.to_bytes(2, "little", signed=True) for v in values))
    return bio.getvalue()


def expected_piece_samples(piece, manifest_json: Path, *, ms_per_char=60.0, rate=16000,
                           pause_ms=600.0, stretch=1.3, filler_pause_ms=200.0) -> int:
    """Analytic length of one trace piece, recomputed from first principles.

    Stub law for speech, stdlib-decoded asset length rescaled to the pipeline
    rate for cues, fixed silences for pauses and filler tails.
    """
    if piece.kind == "Clean":
        return round_half_up(len(piece.detail.strip()) * ms_per_char * rate / 1000)
    if piece.kind == "Pause":
        return round_half_up(pause_ms * rate / 1000)
    if piece.kind == "Interjection":
        spoken = round_half_up(len(piece.detail.strip()) * ms_per_char * rate / 1000)
        return round_half_up(spoken * stretch) + round_half_up(filler_pause_ms * rate / 1000)
    if piece.kind == "EmotionCue":
        head, rank = piece.detail.split(" ")[0].split("@")
        manifest = json.loads(manifest_json.read_text(encoding="utf-8"))
        entry = next(e for e in manifest["entries"] if e["emotion"] == head and e["rank"] == int(rank))
        frames, src_rate = wav_frames_stdlib(manifest_json.parent / entry["path"])
        return round_half_up(frames * rate / src_rate)
    raise AssertionError(f"unexpected piece kind {piece.kind}")
