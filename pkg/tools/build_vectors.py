"""Regenerate the bundled word-vector file (src/emocue/data/vectors.txt).

The vectors are hand-specified feature profiles over a small semantic basis
(intensity bands, affect, breath, tears, gaze, gesture, ...) plus a little
seeded noise so that no two tokens coincide. They cover the cue lexicon that
chat models emit in stage directions; any larger word2vec/GloVe-style text
file in the same format can be dropped in instead.

    python tools/build_vectors.py
"""
from __future__ import annotations

import random
from pathlib import Path

AXES = [
    "manner", "low", "mid", "high", "sad", "joy", "breath", "tears",
    "vocal", "gaze", "gesture", "tension", "speech", "generic", "calm", "time",
]

# token -> {axis: weight}
PROFILES: dict[str, dict[str, float]] = {}


def add(words: str, **weights: float) -> None:
    for w in words.split():
        PROFILES[w] = dict(weights)


# intensity adverbs
add("softly", manner=1.0, low=1.6, calm=0.4)
add("quietly gently lightly faintly", manner=1.0, low=1.4, calm=0.5)
add("slightly barely mildly", manner=1.0, low=1.5)
add("slowly", manner=1.0, low=1.0, time=0.6, calm=0.4)
add("moderately", manner=1.0, mid=1.6)
add("somewhat fairly", manner=1.0, mid=1.4)
add("audibly visibly noticeably", manner=1.0, mid=1.1, high=0.4)
add("heavily", manner=1.0, high=1.6)
add("deeply profoundly", manner=1.0, high=1.4, sad=0.3)
add("loudly", manner=1.0, high=1.3, vocal=0.5)
add("uncontrollably violently intensely", manner=1.0, high=1.5, tension=0.4)
add("hard", manner=0.6, high=1.2, tension=0.4)
add("bitterly", manner=1.0, high=1.1, sad=0.6)
add("nervously anxiously", manner=1.0, mid=0.8, tension=0.9)
add("sadly", manner=1.0, mid=0.6, sad=1.0)
add("shakily", manner=1.0, mid=0.7, tension=0.7, vocal=0.3)
add("briefly", manner=1.0, low=0.8, time=0.8)
add("again", manner=0.4, time=1.0)

# emotions and gestures
add("cries cry crying cried", sad=1.4, tears=1.4, vocal=0.8)
add("sobs sob sobbing", sad=1.4, tears=1.2, vocal=1.0, breath=0.3, high=0.2)
add("weeps weeping", sad=1.4, tears=1.4, vocal=0.5)
add("sniffles sniffs", sad=0.9, tears=1.0, breath=0.6)
add("tears", sad=1.1, tears=1.5)
add("bursts", high=0.9, vocal=0.7, tension=0.4)
add("into", generic=1.0)
add("laughs laugh laughing chuckles chuckle giggles", joy=1.5, vocal=1.2, breath=0.3)
add("smiles smile smiling grins grin", joy=1.5, gaze=0.4, calm=0.4)
add("sighs sigh sighing", breath=1.5, sad=0.8, calm=0.3)
add("exhales exhale breathes breath", breath=1.5, calm=0.5)
add("inhales gasps", breath=1.3, tension=0.4)
add("groans groan", breath=0.8, vocal=0.8, sad=0.5, tension=0.5)
add("whispers whisper", speech=1.2, low=0.5, breath=0.4, calm=0.3)
add("mumbles murmurs", speech=1.1, low=0.5, sad=0.3)
add("stammers stutters", speech=1.2, tension=0.8)
add("looks look looking", gaze=1.5)
add("glances stares", gaze=1.4, time=0.3)
add("down", gaze=0.6, sad=0.9, breath=0.4, low=0.4)
add("away", gaze=0.7, sad=0.5)
add("up", gaze=0.7, joy=0.3)
add("nods nod nodding", gaze=1.0, gesture=0.8, calm=0.5)
add("shakes shake", gesture=1.0, gaze=0.6, tension=0.4)
add("head", gaze=0.9, gesture=0.7)
add("bangs bang", gesture=1.2, tension=1.3, high=0.5)
add("bites", gesture=0.8, tension=1.0)
add("lip lips", gesture=0.6, speech=0.4)
add("struggles struggling", tension=1.3, sad=0.4)
add("clears", speech=0.8, breath=0.4)
add("throat", speech=1.2, breath=0.5)
add("coughs", speech=0.7, breath=0.9, vocal=0.5)
add("flags waves", gesture=1.4)
add("hands hand fingers", gesture=1.3)
add("shrugs", gesture=1.3, calm=0.3)
add("trembles shivers", tension=1.2, sad=0.5)
add("pauses pause hesitates", time=1.2, calm=0.6, speech=0.3)
add("wipes", gesture=1.0, tears=0.7)
add("eyes", gaze=1.2, tears=0.5)
add("face", gaze=0.9, gesture=0.4)
add("frowns", sad=0.8, gaze=0.6, tension=0.5)
add("winces", tension=1.2, gaze=0.4)
add("swallows", speech=0.6, tension=0.7, breath=0.3)
add("voice", speech=1.3, vocal=0.6)
add("cracks cracking", speech=0.8, sad=0.7, tension=0.6)
add("tearfully", manner=1.0, tears=1.0, sad=0.8, mid=0.5)
add("happily", manner=1.0, joy=1.2, mid=0.5)
add("angrily", manner=1.0, tension=1.4, high=0.6)
add("sad sadness sorrow grief", sad=1.6)
add("happy joy glad", joy=1.6)
add("anxious worried nervous", tension=1.3, sad=0.5)
add("tired weary exhausted", sad=0.6, calm=0.6, low=0.4)
add("angry frustrated", tension=1.5, high=0.3)

# fillers and common words
add("uh um er hmm", speech=1.0, time=0.6, generic=0.5)
add("like right", speech=0.6, generic=1.0)
add("know mean", speech=0.5, generic=1.1)
add(
    "i you he she it we they my his her your our their me him them "
    "a an the and or but so to of in on at for with from by as is are "
    "was were be been am have has had do does did not no yes yeah okay "
    "this that these those there here what why how when who which "
    "very really just too quite much more most less",
    generic=1.5,
)
add(
    "wife son phd drinking drink alcohol health nodule removed "
    "coping cope mechanism alzheimer days bad good nurse pastor "
    "help helps hello hi sorry trying tried recently busy sick hard proud",
    generic=0.9, speech=0.3,
)


def build(seed: int = 1234, noise: float = 0.06) -> list[tuple[str, list[float]]]:
    rng = random.Random(seed)
    rows = []
    for token in sorted(PROFILES):
        weights = PROFILES[token]
        vec = [weights.get(axis, 0.0) + rng.gauss(0.0, noise) for axis in AXES]
        rows.append((token, vec))
    return rows


def main() -> None:
    out = Path(__file__).resolve().parents[1] / "src" / "emocue" / "data" / "vectors.txt"
    rows = build()
    with open(out, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(f"{len(rows)} {len(AXES)}\n")
        for token, vec in rows:
            fh.write(token + " " + " ".join(f"{x:.6f}" for x in vec) + "\n")
    print(f"wrote {len(rows)} vectors to {out}")


if __name__ == "__main__":
    main()
