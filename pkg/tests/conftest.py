from __future__ import annotations

import json
import threading
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer

import numpy as np
import pytest

from emocue.audio import AudioBuffer, encode_wav
from emocue.config import PipelineConfig, data_path
from emocue.cues import IntensityScale, load_embeddings, load_manifest

from helpers import load_tables


@pytest.fixture(scope="session")
def tables():
    return load_tables()


@pytest.fixture(scope="session")
def table():
    return load_embeddings(data_path("vectors.txt"))


@pytest.fixture(scope="session")
def manifest():
    return load_manifest(data_path("manifest.json"))


@pytest.fixture(scope="session")
def scale(table):
    s = IntensityScale()
    s.validate(table)
    return s


@pytest.fixture
def cfg():
    return PipelineConfig()


@pytest.fixture
def half_second_sigh(tmp_path):
    """A manifest whose only asset is a 0.5 s sigh at 16 kHz."""
    sig = AudioBuffer(16000, 0.5 * np.sin(np.linspace(0, 40 * np.pi, 8000)))
    (tmp_path / "sigh.wav").write_bytes(encode_wav(sig))
    path = tmp_path / "manifest.json"
    path.write_text(json.dumps({
        "sample_rate": 16000,
        "default": {"emotion": "sighs", "rank": 1},
        "entries": [{"emotion": "sighs", "rank": 1, "path": "sigh.wav"}],
    }))
    return path


class _Handler(BaseHTTPRequestHandler):
    def do_POST(self):  # noqa: N802
        srv = self.server
        length = int(self.headers.get("Content-Length", 0))
        srv.requests.append((dict(self.headers), json.loads(self.rfile.read(length) or b"{}")))
        status, body = srv.replies.pop(0) if srv.replies else (200, srv.default_body)
        self.send_response(status)
        self.send_header("Content-Type", "audio/wav")
        self.send_header("Content-Length", str(len(body)))
        self.end_headers()
        self.wfile.write(body)

    def log_message(self, *args):
        pass


@pytest.fixture
def wav_server():
    """Local TTS endpoint. Queue (status, body) pairs on ``.replies``; otherwise it serves ``.default_body``."""
    srv = ThreadingHTTPServer(("127.0.0.1", 0), _Handler)
    srv.requests, srv.replies = [], []
    srv.default_body = encode_wav(AudioBuffer(16000, np.full(1600, 0.25)))
    srv.url = f"http://127.0.0.1:{srv.server_port}/tts"
    thread = threading.Thread(target=srv.serve_forever, daemon=True)
    thread.start()
    yield srv
    srv.shutdown()
    srv.server_close()
