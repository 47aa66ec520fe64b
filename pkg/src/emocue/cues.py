"""Emotion-cue intensity ranking and asset resolution via word-vector cosine."""
from __future__ import annotations

import enum
import json
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping, Sequence

import numpy as np

from .audio import AudioBuffer, AudioError, read_wav

_TOKEN = re.compile(r"[^\W\d_]+(?:'[^\W\d_]+)*")

DEFAULT_REFERENCES: dict[int, tuple[str, ...]] = {0: ("softly",), 1: ("moderately",), 2: ("heavily",)}


class CueError(Exception):
    pass


class ZeroVector(CueError, ValueError):
    pass


class ManifestEmpty(CueError):
    pass


class ManifestError(CueError):
    pass


class Provenance(str, enum.Enum):
    EXACT = "exact"
    HALLUCINATED_NEAREST = "hallucinated-nearest"
    DEFAULT = "default"


def tokenize(phrase: str) -> list[str]:
    return _TOKEN.findall(phrase.lower())


@dataclass(frozen=True, eq=False)
class EmbeddingTable:
    dim: int
    entries: Mapping[str, np.ndarray]

    def __contains__(self, token: str) -> bool:
        return token.lower() in self.entries

    def get(self, token: str) -> np.ndarray | None:
        """Vector for ``token``, or None when out of vocabulary."""
        return self.entries.get(token.lower())

    def scaled(self, factor: float) -> "EmbeddingTable":
        return EmbeddingTable(self.dim, {k: v * factor for k, v in self.entries.items()})

    @classmethod
    def from_dict(cls, vectors: Mapping[str, Sequence[float]]) -> "EmbeddingTable":
        entries = {k.lower(): np.asarray(v, dtype=np.float64) for k, v in vectors.items()}
        dims = {v.shape[0] for v in entries.values()}
        if len(dims) > 1:
            raise ValueError(f"mixed vector lengths: {sorted(dims)}")
        return cls(dims.pop() if dims else 0, entries)


def load_embeddings(path) -> EmbeddingTable:
    """Read a word2vec-style text file; an optional ``<count> <dim>`` header is honoured."""
    entries: dict[str, np.ndarray] = {}
    dim = None
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            parts = line.split()
            if not parts:
                continue
            if lineno == 1 and len(parts) == 2 and parts[0].isdigit() and parts[1].isdigit():
                dim = int(parts[1])
                continue
            vec = np.array([float(x) for x in parts[1:]])
            if dim is None:
                dim = vec.shape[0]
            if vec.shape[0] != dim:
                raise ValueError(f"{path}:{lineno}: expected {dim} values, got {vec.shape[0]}")
            entries[parts[0].lower()] = vec
    return EmbeddingTable(dim or 0, entries)


def cosine_similarity(u, v) -> float:
    u = np.asarray(u, dtype=np.float64)
    v = np.asarray(v, dtype=np.float64)
    if u.shape != v.shape:
        raise ValueError(f"shape mismatch {u.shape} vs {v.shape}")
    nu = np.linalg.norm(u)
    nv = np.linalg.norm(v)
    if nu == 0.0 or nv == 0.0:
        raise ZeroVector("cosine similarity with a zero vector")
    return float(np.clip(np.dot(u, v) / (nu * nv), -1.0, 1.0))


def embed_phrase(phrase: Iterable[str] | str, table: EmbeddingTable) -> np.ndarray | None:
    """Mean vector of the in-vocabulary tokens, or None if there are none."""
    words = tokenize(phrase) if isinstance(phrase, str) else [w.lower() for w in phrase]
    vecs = [table.get(w) for w in words]
    vecs = [v for v in vecs if v is not None]
    if not vecs:
        return None
    return np.mean(vecs, axis=0)


@dataclass(frozen=True)
class IntensityScale:
    """Reference words per rank; a rank may list several words (max similarity wins)."""

    references: Mapping[int, tuple[str, ...]] = field(default_factory=lambda: dict(DEFAULT_REFERENCES))
    default_rank: int = 1

    def __post_init__(self) -> None:
        refs = {int(r): tuple(w.lower() for w in ([ws] if isinstance(ws, str) else ws))
                for r, ws in self.references.items()}
        if set(refs) != {0, 1, 2}:
            raise ValueError(f"reference ranks must be exactly 0, 1, 2; got {sorted(refs)}")
        if any(not ws for ws in refs.values()):
            raise ValueError("every rank needs at least one reference word")
        if self.default_rank not in (0, 1, 2):
            raise ValueError("default_rank must be 0, 1 or 2")
        object.__setattr__(self, "references", refs)

    def validate(self, table: EmbeddingTable) -> None:
        missing = [w for ws in self.references.values() for w in ws if w not in table]
        if missing:
            raise ValueError(f"reference words missing from embeddings: {missing}")


def rank_similarities(cue_vec: np.ndarray, scale: IntensityScale, table: EmbeddingTable) -> dict[int, float]:
    sims = {}
    for rank in (0, 1, 2):
        sims[rank] = max(cosine_similarity(cue_vec, table.get(w)) for w in scale.references[rank])
    return sims


def rank_intensity(cue_words: Iterable[str] | str, scale: IntensityScale, table: EmbeddingTable) -> int:
    vec = embed_phrase(cue_words, table)
    if vec is None:
        return scale.default_rank
    try:
        sims = rank_similarities(vec, scale, table)
    except ZeroVector:
        return scale.default_rank
    best = 0
    for rank in (1, 2):
        if sims[rank] > sims[best]:
            best = rank
    return best


@dataclass(frozen=True, eq=False)
class CueManifest:
    sample_rate: int
    entries: Mapping[tuple[str, int], Path]
    default_entry: tuple[str, int]
    assets: Mapping[tuple[str, int], AudioBuffer] = field(default_factory=dict, repr=False)

    @property
    def emotions(self) -> list[str]:
        return sorted({e for e, _ in self.entries})

    def ranks_for(self, emotion: str) -> list[int]:
        return sorted(r for e, r in self.entries if e == emotion)

    def asset(self, emotion: str, rank: int) -> AudioBuffer:
        key = (emotion, rank)
        if key not in self.assets:
            raise ManifestError(f"no asset for {emotion}@{rank}")
        return self.assets[key]


def load_manifest(path) -> CueManifest:
    """Load and validate a manifest; every asset is decoded up front."""
    path = Path(path)
    with open(path, encoding="utf-8") as fh:
        obj = json.load(fh)
    entries: dict[tuple[str, int], Path] = {}
    for item in obj.get("entries", []):
        rank = int(item["rank"])
        if rank not in (0, 1, 2):
            raise ManifestError(f"rank {rank} out of range for {item['emotion']}")
        entries[(item["emotion"].lower(), rank)] = (path.parent / item["path"]).resolve()
    if not entries:
        raise ManifestEmpty(f"{path} has no entries")
    default = (obj["default"]["emotion"].lower(), int(obj["default"]["rank"]))
    if default not in entries:
        raise ManifestError(f"default entry {default} is not among the entries")
    assets = {}
    for key, asset_path in entries.items():
        try:
            assets[key] = read_wav(asset_path)
        except (OSError, AudioError) as exc:
            raise ManifestError(f"asset {asset_path} for {key[0]}@{key[1]}: {exc}") from exc
    return CueManifest(int(obj["sample_rate"]), entries, default, assets)


@dataclass(frozen=True)
class ResolvedCue:
    emotion_head: str
    rank: int
    asset: Path
    provenance: Provenance

    def describe(self) -> str:
        return f"{self.emotion_head}@{self.rank} ({self.provenance.value})"


def nearest_emotion(vec: np.ndarray, emotions: Iterable[str], table: EmbeddingTable) -> str | None:
    best = None
    best_sim = -np.inf
    for emotion in sorted(emotions):
        ev = table.get(emotion)
        if ev is None:
            continue
        try:
            sim = cosine_similarity(vec, ev)
        except ZeroVector:
            continue
        if sim > best_sim:
            best, best_sim = emotion, sim
    return best


def _closest_rank(available: list[int], wanted: int) -> int:
    return min(available, key=lambda r: (abs(r - wanted), r))


def resolve_cue(
    cue_phrase: str, manifest: CueManifest, scale: IntensityScale, table: EmbeddingTable
) -> ResolvedCue:
    """Map a cue payload to a manifest asset.

    The first token is the emotion head and the rest are intensity words.
    Heads missing from the manifest (hallucinated gestures) go to the manifest
    emotion nearest to the whole phrase.
    """
    if not manifest.entries:
        raise ManifestEmpty("manifest has no entries")
    tokens = tokenize(cue_phrase)
    head, intensity = (tokens[0], tokens[1:]) if tokens else ("", [])
    emotions = manifest.emotions
    if head in emotions:
        emotion, provenance = head, Provenance.EXACT
        rank = rank_intensity(intensity, scale, table)
    else:
        vec = embed_phrase(tokens, table)
        emotion = nearest_emotion(vec, emotions, table) if vec is not None else None
        if emotion is None:
            emotion, rank = manifest.default_entry
            return ResolvedCue(emotion, rank, manifest.entries[(emotion, rank)], Provenance.DEFAULT)
        provenance = Provenance.HALLUCINATED_NEAREST
        rank = rank_intensity(intensity, scale, table)
    rank = _closest_rank(manifest.ranks_for(emotion), rank)
    return ResolvedCue(emotion, rank, manifest.entries[(emotion, rank)], provenance)
