"""Three-tier chat memory (background / initial / latest) and prompt regimes.

Thresholds count exchange pairs. The first ``t_init`` pairs are kept forever;
after that, pairs go through a FIFO of length ``t_latest``. A request payload
is ``[system] + initial pairs + latest pairs + [new user message]``.
"""
from __future__ import annotations

import json
import os
import tempfile
import time
from collections import deque
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Protocol, Sequence

import requests
from filelock import FileLock

from .config import data_path

ROLES = ("system", "user", "assistant")
REGIMES = ("neutral", "moderate", "extreme")
BACKGROUND_SLOT = "{{BACKGROUND}}"


@dataclass(frozen=True)
class Message:
    role: str
    content: str
    ts: int = field(default=0, compare=False)

    def __post_init__(self) -> None:
        if self.role not in ROLES:
            raise ValueError(f"unknown role {self.role!r}")
        if not self.content:
            raise ValueError("message content must be non-empty")

    def to_api(self) -> dict:
        return {"role": self.role, "content": self.content}


@dataclass(frozen=True)
class PromptRegime:
    kind: str
    template: str

    def render(self, background_text: str) -> str:
        return self.template.replace(BACKGROUND_SLOT, background_text)


def load_regime(kind: str, prompt_dir=None) -> PromptRegime:
    if kind not in REGIMES:
        raise ValueError(f"regime must be one of {REGIMES}, got {kind!r}")
    path = Path(prompt_dir) / f"{kind}.txt" if prompt_dir else data_path(f"prompts/{kind}.txt")
    template = path.read_text(encoding="utf-8")
    if BACKGROUND_SLOT not in template:
        raise ValueError(f"{path} has no {BACKGROUND_SLOT} slot")
    return PromptRegime(kind, template)


def default_background() -> str:
    return data_path("prompts/background.txt").read_text(encoding="utf-8").strip()


Pair = tuple[Message, Message]


@dataclass
class MemoryState:
    background: str
    t_init: int
    t_latest: int
    conversation_id: str = "default"
    initial: list[Pair] = field(default_factory=list)
    latest: deque = field(default_factory=deque)

    def __post_init__(self) -> None:
        if self.t_init < 0:
            raise ValueError("t_init must be >= 0")
        if self.t_latest < 1:
            raise ValueError("t_latest must be >= 1")
        if not self.background:
            raise ValueError("background must be non-empty")
        self.latest = deque(self.latest, maxlen=self.t_latest)

    def record_exchange(self, user_text: str, assistant_text: str, ts: int | None = None) -> "MemoryState":
        ts = int(time.time()) if ts is None else ts
        pair = (Message("user", user_text, ts), Message("assistant", assistant_text, ts))
        if len(self.initial) < self.t_init:
            self.initial.append(pair)
        else:
            self.latest.append(pair)  # deque maxlen drops the oldest pair
        return self

    def build_payload(self, new_user_input: str) -> list[Message]:
        payload = [Message("system", self.background)]
        for user, assistant in (*self.initial, *self.latest):
            payload += [user, assistant]
        payload.append(Message("user", new_user_input))
        return payload


def init_conversation(
    regime: PromptRegime,
    background_text: str,
    t_init: int = 3,
    t_latest: int = 4,
    conversation_id: str = "default",
) -> MemoryState:
    return MemoryState(regime.render(background_text), t_init, t_latest, conversation_id)


def record_exchange(state: MemoryState, user_text: str, assistant_text: str) -> MemoryState:
    return state.record_exchange(user_text, assistant_text)


def build_payload(state: MemoryState, new_user_input: str) -> list[Message]:
    return state.build_payload(new_user_input)


class ConversationStore:
    """One JSONL file per conversation; a file lock enforces a single writer."""

    def __init__(self, root):
        self.root = Path(root)

    def path(self, conversation_id: str) -> Path:
        return self.root / f"{conversation_id}.jsonl"

    def _lock(self, conversation_id: str) -> FileLock:
        return FileLock(str(self.path(conversation_id)) + ".lock")

    def save(self, state: MemoryState) -> Path:
        self.root.mkdir(parents=True, exist_ok=True)
        rows = [{"slot": "background", "role": "system", "content": state.background, "ts": 0}]
        for slot, pairs in (("initial", state.initial), ("latest", state.latest)):
            for pair in pairs:
                rows += [{"slot": slot, "role": m.role, "content": m.content, "ts": m.ts} for m in pair]
        target = self.path(state.conversation_id)
        with self._lock(state.conversation_id):
            fd, tmp = tempfile.mkstemp(dir=self.root, prefix=target.name, suffix=".tmp")
            with os.fdopen(fd, "w", encoding="utf-8") as fh:
                for row in rows:
                    fh.write(json.dumps(row, ensure_ascii=False) + "\n")
            os.replace(tmp, target)
        return target

    def load(self, conversation_id: str, t_init: int, t_latest: int) -> MemoryState:
        with open(self.path(conversation_id), encoding="utf-8") as fh:
            rows = [json.loads(line) for line in fh if line.strip()]
        background = next((r["content"] for r in rows if r["slot"] == "background"), None)
        if background is None:
            raise ValueError(f"conversation {conversation_id!r} has no background")
        state = MemoryState(background, t_init, t_latest, conversation_id)
        for slot in ("initial", "latest"):
            msgs = [Message(r["role"], r["content"], r.get("ts", 0)) for r in rows if r["slot"] == slot]
            if len(msgs) % 2:
                raise ValueError(f"conversation {conversation_id!r}: unpaired message in {slot}")
            pairs = [(msgs[i], msgs[i + 1]) for i in range(0, len(msgs), 2)]
            if slot == "initial":
                if len(pairs) > t_init:
                    raise ValueError(f"{len(pairs)} initial pairs exceed t_init={t_init}")
                state.initial = pairs
            else:
                state.latest = deque(pairs, maxlen=t_latest)
        return state


# --- chat clients -----------------------------------------------------------

class ChatClientError(Exception):
    pass


class ChatClient(Protocol):
    def complete(self, messages: Sequence[Message]) -> Message: ...


class ScriptedChatClient:
    """Replays canned assistant lines in order, ignoring the payload."""

    def __init__(self, lines: Iterable[str]):
        self.lines = list(lines)
        self.calls: list[list[Message]] = []

    def complete(self, messages: Sequence[Message]) -> Message:
        self.calls.append(list(messages))
        k = len(self.calls) - 1
        if k >= len(self.lines):
            raise ChatClientError(f"script exhausted after {len(self.lines)} replies")
        return Message("assistant", self.lines[k])


class HttpChatClient:
    """Chat-completions style endpoint: POST {model, messages}, read choices[0].message."""

    def __init__(self, url: str, model: str = "gpt-4", token_env: str | None = "OPENAI_API_KEY",
                 timeout_s: float = 60.0, session: requests.Session | None = None):
        self.url = url
        self.model = model
        self.token_env = token_env
        self.timeout_s = timeout_s
        self.session = session or requests.Session()

    def complete(self, messages: Sequence[Message]) -> Message:
        headers = {}
        token = os.environ.get(self.token_env) if self.token_env else None
        if token:
            headers["Authorization"] = f"Bearer {token}"
        body = {"model": self.model, "messages": [m.to_api() for m in messages]}
        try:
            resp = self.session.post(self.url, json=body, headers=headers, timeout=self.timeout_s)
            resp.raise_for_status()
            content = resp.json()["choices"][0]["message"]["content"]
        except (requests.RequestException, KeyError, IndexError, TypeError, ValueError) as exc:
            raise ChatClientError(str(exc)) from exc
        return Message("assistant", content)


@dataclass(frozen=True)
class TranscriptTurn:
    user: str
    assistant: str | None
    error: str | None = None

    @property
    def failed(self) -> bool:
        return self.error is not None

    def to_json(self) -> dict:
        return {"user": self.user, "assistant": self.assistant, "error": self.error}


def run_scripted_conversation(
    user_lines: Sequence[str],
    state: MemoryState,
    client: ChatClient,
    store: ConversationStore | None = None,
) -> list[TranscriptTurn]:
    """Feed user lines through the client, updating memory after each reply.

    A failed turn is marked in the transcript and leaves memory untouched.
    """
    transcript = []
    for line in user_lines:
        try:
            reply = client.complete(state.build_payload(line))
            if not reply.content.strip():
                raise ChatClientError("empty reply")
        except (ChatClientError, ValueError) as exc:
            transcript.append(TranscriptTurn(line, None, str(exc)))
            continue
        state.record_exchange(line, reply.content)
        transcript.append(TranscriptTurn(line, reply.content))
        if store is not None:
            store.save(state)
    return transcript
