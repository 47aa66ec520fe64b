"""Command-line entry point: ``emocue parse|synth|converse|compare``.

Exit codes: 0 success, 1 runtime/backend failure, 2 bad input or parse error.
"""
from __future__ import annotations

import argparse
import json
import logging
import os
import sys
import tempfile
from dataclasses import replace
from pathlib import Path

from .audio import encode_wav
from .config import PipelineConfig, load_config
from .cues import CueError
from .markup import MarkupError, parse_utterance
from .memory import (
    ChatClientError,
    ConversationStore,
    HttpChatClient,
    ScriptedChatClient,
    default_background,
    init_conversation,
    load_regime,
    run_scripted_conversation,
)
from .pipeline import PipelineError, Synthesizer

log = logging.getLogger("emocue")

EXIT_OK, EXIT_RUNTIME, EXIT_INPUT = 0, 1, 2


class InputError(Exception):
    pass


def write_atomic(path, data: bytes | str) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    if isinstance(data, str):
        data = data.encode("utf-8")
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name, suffix=".tmp")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        Path(tmp).unlink(missing_ok=True)
        raise


def read_text_arg(args) -> str:
    if getattr(args, "text", None) is not None:
        return args.text
    if getattr(args, "infile", None):
        try:
            return Path(args.infile).read_text(encoding="utf-8").rstrip("\r\n")
        except OSError as exc:
            raise InputError(str(exc)) from exc
    raise InputError("one of --in or --text is required")


def read_lines(path) -> list[str]:
    """A JSON list of strings, or one utterance per non-blank line."""
    try:
        raw = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(str(exc)) from exc
    if Path(path).suffix == ".json":
        lines = json.loads(raw)
        if not isinstance(lines, list) or not all(isinstance(x, str) for x in lines):
            raise InputError(f"{path}: expected a JSON list of strings")
        return lines
    return [line.strip() for line in raw.splitlines() if line.strip()]


def build_config(args) -> PipelineConfig:
    try:
        cfg = load_config(getattr(args, "config", None))
        if getattr(args, "seed", None) is not None:
            cfg = replace(cfg, seed=args.seed)
        if getattr(args, "backend", None):
            cfg = cfg.with_backend(args.backend)
        if getattr(args, "t_init", None) is not None:
            cfg = replace(cfg, t_init=args.t_init)
        if getattr(args, "t_latest", None) is not None:
            cfg = replace(cfg, t_latest=args.t_latest)
        cfg.check_files()
    except (OSError, ValueError, KeyError) as exc:
        raise InputError(f"config: {exc}") from exc
    return cfg


# --- subcommands ------------------------------------------------------------

def make_synthesizer(cfg: PipelineConfig) -> Synthesizer:
    try:
        return Synthesizer(cfg)
    except (CueError, ValueError) as exc:
        raise InputError(f"cannot load cue resources: {exc}") from exc


def cmd_parse(args) -> int:
    text = read_text_arg(args)
    lexicon = args.lexicon.split(",") if args.lexicon else None
    try:
        parsed = parse_utterance(text, lexicon or load_config(args.config).lexicon, lenient=args.lenient)
    except MarkupError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    doc = parsed.to_json()
    doc["clean_texts"] = parsed.clean_texts()
    doc["disfluencies"] = parsed.disfluencies()
    out = json.dumps(doc, ensure_ascii=False, indent=2) + "\n"
    if args.out:
        write_atomic(args.out, out)
    else:
        sys.stdout.write(out)
    return EXIT_OK


def cmd_synth(args) -> int:
    text = read_text_arg(args)
    cfg = build_config(args)
    if args.strict:
        cfg = replace(cfg, lenient=False)
    synth = make_synthesizer(cfg)
    try:
        buf, trace = synth.synthesize_utterance(text)
    except MarkupError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except PipelineError as exc:
        print(f"synthesis failed: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    write_atomic(args.out, encode_wav(buf))
    if args.trace:
        write_atomic(args.trace, trace.to_jsonl())
    log.info("wrote %s (%d samples, %d pieces)", args.out, len(buf), len(trace))
    return EXIT_OK


def make_chat_client(spec: str, cfg: PipelineConfig):
    if spec.startswith("stub:"):
        return ScriptedChatClient(read_lines(spec[len("stub:"):]))
    if spec == "http":
        llm = dict(cfg.llm)
        if "url" not in llm:
            raise InputError("--llm http needs an 'llm.url' entry in the config")
        return HttpChatClient(llm["url"], llm.get("model", "gpt-4"), llm.get("token_env", "OPENAI_API_KEY"))
    raise InputError(f"--llm must be stub:FILE or http, got {spec!r}")


def cmd_converse(args) -> int:
    cfg = build_config(args)
    user_lines = read_lines(args.script)
    client = make_chat_client(args.llm, cfg)
    try:
        regime = load_regime(args.regime)
    except (OSError, ValueError) as exc:
        raise InputError(str(exc)) from exc
    background = Path(args.background).read_text(encoding="utf-8").strip() if args.background else default_background()
    out_dir = Path(args.out_dir)
    conv_id = args.conversation_id or args.regime
    state = init_conversation(regime, background, cfg.t_init, cfg.t_latest, conv_id)
    store = ConversationStore(out_dir / "memory")
    store.save(state)
    transcript = run_scripted_conversation(user_lines, state, client, store)

    stem = f"{args.regime}_{cfg.backend.name}"
    replies = [t.assistant for t in transcript if not t.failed]
    failed = any(t.failed for t in transcript)
    doc = {"regime": args.regime, "backend": cfg.backend.name, "seed": cfg.seed,
           "turns": [t.to_json() for t in transcript]}
    if replies:
        conv = make_synthesizer(cfg).synthesize_conversation(replies)
        for k, result in enumerate(conv.turns, 1):
            if result is None:
                continue
            buf, trace = result
            write_atomic(out_dir / f"{stem}_turn{k}.wav", encode_wav(buf))
            write_atomic(out_dir / f"{stem}_turn{k}.trace.jsonl", trace.to_jsonl())
        write_atomic(out_dir / f"{stem}_conversation.wav", encode_wav(conv.combined))
        doc["synthesis_errors"] = [{"turn": k + 1, "error": str(e)} for k, e in conv.errors]
        failed = failed or bool(conv.errors)
    write_atomic(out_dir / "transcript.json", json.dumps(doc, ensure_ascii=False, indent=2) + "\n")
    return EXIT_RUNTIME if failed else EXIT_OK


def compare_backends(cfg: PipelineConfig, backend_names: list[str], corpus: list[tuple[str, str]]) -> dict:
    """Objective per-(backend, utterance) metrics plus per-backend sums."""
    rows = []
    aggregates = {}
    for name in backend_names:
        bcfg = cfg.with_backend(name)
        agg = {"utterances": 0, "pieces": 0, "duration_ms": 0.0, "splices": 0, "pauses": 0, "failures": 0}
        try:
            synth = Synthesizer(bcfg)
        except Exception as exc:  # noqa: BLE001 - a broken backend must not abort the report
            synth, setup_error = None, exc
        for utt_name, text in corpus:
            row = {"backend": name, "utterance": utt_name, "pieces": 0, "duration_ms": 0.0,
                   "splices": 0, "pauses": 0, "failed": False, "error": None}
            try:
                if synth is None:
                    raise setup_error
                buf, trace = synth.synthesize_utterance(text)
                row.update(pieces=len(trace), duration_ms=buf.duration_ms,
                           splices=max(len(trace) - 1, 0), pauses=trace.count("Pause"))
            except Exception as exc:  # noqa: BLE001
                row.update(failed=True, error=f"{type(exc).__name__}: {exc}")
            rows.append(row)
            agg["utterances"] += 1
            agg["pieces"] += row["pieces"]
            agg["duration_ms"] += row["duration_ms"]
            agg["splices"] += row["splices"]
            agg["pauses"] += row["pauses"]
            agg["failures"] += int(row["failed"])
        aggregates[name] = agg
    return {"seed": cfg.seed, "backends": backend_names, "rows": rows, "aggregates": aggregates}


def cmd_compare(args) -> int:
    cfg = build_config(args)
    names = [n.strip() for n in args.backends.split(",") if n.strip()]
    unknown = [n for n in names if n not in cfg.backends]
    if not names or unknown:
        raise InputError(f"unknown backends {unknown}; configured: {sorted(cfg.backends)}")
    corpus_dir = Path(args.corpus)
    files = sorted(corpus_dir.glob("*.txt"))
    if not files:
        raise InputError(f"no .txt utterances in {corpus_dir}")
    corpus = [(f.name, f.read_text(encoding="utf-8").rstrip("\r\n")) for f in files]
    report = compare_backends(cfg, names, corpus)
    write_atomic(args.report, json.dumps(report, ensure_ascii=False, indent=2) + "\n")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="emocue", description="Emotion/disfluency cue speech compiler")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("parse", help="segment annotated text into JSON")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--in", dest="infile")
    src.add_argument("--text")
    p.add_argument("--out")
    p.add_argument("--lenient", action="store_true", help="treat a trailing unmatched '*' as text")
    p.add_argument("--lexicon", help="comma-separated interjections (default: config/built-in)")
    p.add_argument("--config")
    p.set_defaults(func=cmd_parse)

    p = sub.add_parser("synth", help="synthesize one annotated utterance to WAV")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--in", dest="infile")
    src.add_argument("--text")
    p.add_argument("--out", required=True)
    p.add_argument("--config")
    p.add_argument("--backend")
    p.add_argument("--seed", type=int)
    p.add_argument("--trace")
    p.add_argument("--strict", action="store_true", help="fail on unbalanced asterisks")
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("converse", help="run a scripted conversation and synthesize every reply")
    p.add_argument("--script", required=True, help="user lines (.json list or one per line)")
    p.add_argument("--regime", choices=["neutral", "moderate", "extreme"], default="moderate")
    p.add_argument("--llm", default=None, help="stub:FILE or http")
    p.add_argument("--out-dir", required=True)
    p.add_argument("--t-init", type=int)
    p.add_argument("--t-latest", type=int)
    p.add_argument("--background", help="character background text file")
    p.add_argument("--conversation-id")
    p.add_argument("--config")
    p.add_argument("--backend")
    p.add_argument("--seed", type=int)
    p.set_defaults(func=cmd_converse)

    p = sub.add_parser("compare", help="run several backends over a corpus and report objective metrics")
    p.add_argument("--backends", required=True, help="comma-separated backend names from the config")
    p.add_argument("--corpus", required=True, help="directory of annotated .txt utterances")
    p.add_argument("--report", required=True)
    p.add_argument("--config")
    p.add_argument("--seed", type=int)
    p.set_defaults(func=cmd_compare)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    if args.command == "converse" and not args.llm:
        parser.error("converse requires --llm stub:FILE or --llm http")
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (ChatClientError, PipelineError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
