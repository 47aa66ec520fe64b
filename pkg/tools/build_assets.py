"""Regenerate the placeholder emotion assets and their manifest.

Each (emotion, rank) gets a short synthetic signature -- breathy noise for
sighs, a wavering tone for cries, pulsed bursts for laughs, a soft chirp for
smiles -- louder and longer at higher ranks. Swap in recorded clips by editing
src/emocue/data/manifest.json.

    python tools/build_assets.py
"""
from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from emocue.audio import AudioBuffer, encode_wav

RATE = 22050
DATA = Path(__file__).resolve().parents[1] / "src" / "emocue" / "data"

DURATIONS = {
    "cries": (0.8, 1.0, 1.2),
    "laughs": (0.6, 0.8, 1.0),
    "sighs": (0.5, 0.7, 0.9),
    "smiles": (0.3, 0.4, 0.5),
}
LEVELS = (0.3, 0.5, 0.7)


def envelope(n: int) -> np.ndarray:
    t = np.linspace(0.0, 1.0, n)
    return np.sin(np.pi * t) ** 2


def signature(emotion: str, rank: int, rng: np.random.Generator) -> np.ndarray:
    n = int(round(DURATIONS[emotion][rank] * RATE))
    t = np.arange(n) / RATE
    if emotion == "sighs":
        noise = rng.standard_normal(n)
        kernel = np.ones(12) / 12
        sig = np.convolve(noise, kernel, mode="same") * 3.0
    elif emotion == "cries":
        f = 420 + 60 * np.sin(2 * np.pi * 5.5 * t) - 80 * t
        sig = np.sin(2 * np.pi * np.cumsum(f) / RATE) + 0.2 * rng.standard_normal(n)
    elif emotion == "laughs":
        gate = (np.sin(2 * np.pi * 6.0 * t) > 0.2).astype(float)
        sig = gate * np.sin(2 * np.pi * 310 * t) + 0.1 * rng.standard_normal(n)
    else:
        f = 520 + 180 * t
        sig = 0.6 * np.sin(2 * np.pi * np.cumsum(f) / RATE) + 0.3 * rng.standard_normal(n)
    sig = sig * envelope(n)
    return LEVELS[rank] * sig / np.max(np.abs(sig))


def main() -> None:
    assets = DATA / "assets"
    assets.mkdir(parents=True, exist_ok=True)
    rng = np.random.default_rng(20240501)
    entries = []
    for emotion in sorted(DURATIONS):
        for rank in range(3):
            name = f"{emotion}_{rank}.wav"
            buf = AudioBuffer(RATE, signature(emotion, rank, rng))
            (assets / name).write_bytes(encode_wav(buf))
            entries.append({"emotion": emotion, "rank": rank, "path": f"assets/{name}"})
    manifest = {"sample_rate": RATE, "default": {"emotion": "sighs", "rank": 1}, "entries": entries}
    (DATA / "manifest.json").write_text(json.dumps(manifest, indent=2) + "\n", encoding="utf-8")
    print(f"wrote {len(entries)} assets")


if __name__ == "__main__":
    main()
