"""Compile emotion- and disfluency-annotated response text into speech."""
from .audio import AudioBuffer, concat, decode_wav, encode_wav, resample, silence, time_stretch
from .config import PipelineConfig, load_config
from .markup import ParsedUtterance, Segment, SegmentKind, find_stutter_tokens, parse_utterance, reconstruct
from .pipeline import Synthesizer, synthesize_conversation, synthesize_utterance

__all__ = [
    "AudioBuffer",
    "ParsedUtterance",
    "PipelineConfig",
    "Segment",
    "SegmentKind",
    "Synthesizer",
    "concat",
    "decode_wav",
    "encode_wav",
    "find_stutter_tokens",
    "load_config",
    "parse_utterance",
    "reconstruct",
    "resample",
    "silence",
    "synthesize_conversation",
    "synthesize_utterance",
    "time_stretch",
]

__version__ = "0.1.0"
