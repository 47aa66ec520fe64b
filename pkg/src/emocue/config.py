"""Pipeline configuration: one JSON file, one section per concern.

Example (every key optional; relative paths resolve against the file)::

    {
      "audio": {"rate": 16000, "normalize_peak": 0.89},
      "pause": {"ms": 600},
      "splice": {"gap_ms": 0},
      "interjection": {"stretch": 1.3, "pause_ms": 200},
      "stutter": {"n": 4, "fragment_len": 3, "restart_fillers": ["um"]},
      "rng": {"seed": 0},
      "parser": {"lexicon": ["uh", "um"], "lenient": true},
      "cues": {"manifest": "manifest.json", "embeddings": "vectors.txt",
               "references": {"0": ["softly"], "1": ["moderately"], "2": ["heavily"]},
               "default_rank": 1},
      "backend": "stub",
      "backends": {"stub": {"kind": "stub", "ms_per_char": 60, "freq_hz": 220, "rate": 16000},
                   "cloud": {"kind": "http", "url": "http://localhost:8000/tts",
                             "token_env": "TTS_TOKEN"}},
      "conversation": {"gap_ms": 1000, "t_init": 3, "t_latest": 4},
      "llm": {"url": "https://api.openai.com/v1/chat/completions", "model": "gpt-4",
              "token_env": "OPENAI_API_KEY"}
    }
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from importlib import resources
from pathlib import Path
from typing import Any, Mapping

from .backends import BackendDescriptor
from .cues import DEFAULT_REFERENCES
from .disfluency import StutterConfig
from .markup import DEFAULT_LEXICON


def data_path(name: str) -> Path:
    return Path(str(resources.files("emocue") / "data" / name))


def _default_backends() -> dict[str, BackendDescriptor]:
    return {"stub": BackendDescriptor("stub")}


@dataclass(frozen=True)
class PipelineConfig:
    rate: int = 16000
    normalize_peak: float = 0.89
    pause_ms: float = 600.0
    splice_gap_ms: float = 0.0
    interjection_stretch: float = 1.3
    interjection_pause_ms: float = 200.0
    stutter: StutterConfig = field(default_factory=StutterConfig)
    seed: int = 0
    lexicon: tuple[str, ...] = DEFAULT_LEXICON
    lenient: bool = True
    manifest_path: Path = field(default_factory=lambda: data_path("manifest.json"))
    embeddings_path: Path = field(default_factory=lambda: data_path("vectors.txt"))
    references: Mapping[int, tuple[str, ...]] = field(default_factory=lambda: dict(DEFAULT_REFERENCES))
    default_rank: int = 1
    backend_name: str = "stub"
    backends: Mapping[str, BackendDescriptor] = field(default_factory=_default_backends)
    conversation_gap_ms: float = 1000.0
    t_init: int = 3
    t_latest: int = 4
    llm: Mapping[str, Any] = field(default_factory=dict)

    def __post_init__(self) -> None:
        for name in ("pause_ms", "splice_gap_ms", "interjection_pause_ms", "conversation_gap_ms"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be >= 0")
        if self.rate <= 0:
            raise ValueError("rate must be positive")
        if self.interjection_stretch < 1.0:
            raise ValueError("interjection stretch must be >= 1.0")
        if self.backend_name not in self.backends:
            raise ValueError(f"backend {self.backend_name!r} is not configured; have {sorted(self.backends)}")

    @property
    def backend(self) -> BackendDescriptor:
        return self.backends[self.backend_name]

    def with_backend(self, name: str) -> "PipelineConfig":
        return replace(self, backend_name=name)

    def check_files(self) -> None:
        for p in (self.manifest_path, self.embeddings_path):
            if not Path(p).is_file():
                raise FileNotFoundError(f"config references missing file {p}")


def config_from_dict(obj: Mapping[str, Any], base_dir: Path | None = None) -> PipelineConfig:
    base_dir = Path(base_dir or ".")

    def section(name: str) -> Mapping[str, Any]:
        return obj.get(name, {}) or {}

    def path(value: str) -> Path:
        p = Path(value)
        return p if p.is_absolute() else (base_dir / p)

    kw: dict[str, Any] = {}
    audio = section("audio")
    if "rate" in audio:
        kw["rate"] = int(audio["rate"])
    if "normalize_peak" in audio:
        kw["normalize_peak"] = float(audio["normalize_peak"])
    if "ms" in section("pause"):
        kw["pause_ms"] = float(section("pause")["ms"])
    if "gap_ms" in section("splice"):
        kw["splice_gap_ms"] = float(section("splice")["gap_ms"])
    inter = section("interjection")
    if "stretch" in inter:
        kw["interjection_stretch"] = float(inter["stretch"])
    if "pause_ms" in inter:
        kw["interjection_pause_ms"] = float(inter["pause_ms"])
    st = section("stutter")
    if st:
        defaults = StutterConfig()
        kw["stutter"] = StutterConfig(
            n=int(st.get("n", defaults.n)),
            fragment_len=int(st.get("fragment_len", defaults.fragment_len)),
            restart_fillers=tuple(st.get("restart_fillers", defaults.restart_fillers)),
        )
    if "seed" in section("rng"):
        kw["seed"] = int(section("rng")["seed"])
    parser = section("parser")
    if "lexicon" in parser:
        kw["lexicon"] = tuple(parser["lexicon"])
    if "lenient" in parser:
        kw["lenient"] = bool(parser["lenient"])
    cues = section("cues")
    if "manifest" in cues:
        kw["manifest_path"] = path(cues["manifest"])
    if "embeddings" in cues:
        kw["embeddings_path"] = path(cues["embeddings"])
    if "references" in cues:
        kw["references"] = {int(r): tuple([w] if isinstance(w, str) else w) for r, w in cues["references"].items()}
    if "default_rank" in cues:
        kw["default_rank"] = int(cues["default_rank"])
    if "backends" in obj:
        kw["backends"] = {name: BackendDescriptor.from_config(name, spec) for name, spec in obj["backends"].items()}
    if "backend" in obj:
        kw["backend_name"] = obj["backend"]
    elif "backends" in obj:
        kw["backend_name"] = next(iter(obj["backends"]))
    conv = section("conversation")
    if "gap_ms" in conv:
        kw["conversation_gap_ms"] = float(conv["gap_ms"])
    if "t_init" in conv:
        kw["t_init"] = int(conv["t_init"])
    if "t_latest" in conv:
        kw["t_latest"] = int(conv["t_latest"])
    if "llm" in obj:
        kw["llm"] = dict(obj["llm"])
    return PipelineConfig(**kw)


def load_config(path=None) -> PipelineConfig:
    if path is None:
        return PipelineConfig()
    path = Path(path)
    with open(path, encoding="utf-8") as fh:
        obj = json.load(fh)
    return config_from_dict(obj, path.parent)
