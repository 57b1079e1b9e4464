import json
import pathlib
import sys
import threading
from collections import deque
from http.server import BaseHTTPRequestHandler, HTTPServer

import pytest

TESTS_DIR = pathlib.Path(__file__).resolve().parent
FIXTURES = TESTS_DIR / "fixtures"

# make tests/oracles importable as a plain package
sys.path.insert(0, str(TESTS_DIR))


@pytest.fixture(scope="session")
def fixtures_dir() -> pathlib.Path:
    return FIXTURES


class ScriptedClassifier:
    """In-process HTTP stub replaying scripted /classify responses in order.

    Each push() queues one response; an unscripted request fails with 500 so
    tests cannot silently depend on defaults.
    """

    def __init__(self):
        stub = self

        class Handler(BaseHTTPRequestHandler):
            def do_POST(self):
                length = int(self.headers.get("Content-Length", 0))
                stub.seen.append(json.loads(self.rfile.read(length)))
                if not stub.responses:
                    self.send_error(500, "no scripted response")
                    return
                status, payload = stub.responses.popleft()
                body = (
                    payload
                    if isinstance(payload, bytes)
                    else json.dumps(payload).encode("utf-8")
                )
                self.send_response(status)
                self.send_header("Content-Type", "application/json")
                self.send_header("Content-Length", str(len(body)))
                self.end_headers()
                self.wfile.write(body)

            def log_message(self, *args):
                pass

        self.responses: deque = deque()
        self.seen: list = []
        self._server = HTTPServer(("127.0.0.1", 0), Handler)
        self.endpoint = f"http://127.0.0.1:{self._server.server_port}"
        self._thread = threading.Thread(
            target=lambda: self._server.serve_forever(poll_interval=0.02), daemon=True
        )
        self._thread.start()

    def push(self, payload, status: int = 200):
        self.responses.append((status, payload))

    def close(self):
        self._server.shutdown()
        self._server.server_close()


@pytest.fixture
def classify_server():
    stub = ScriptedClassifier()
    yield stub
    stub.close()


def load_fixture_text(name: str) -> str:
    return (FIXTURES / name).read_text(encoding="utf-8").strip()


def load_golden_tsv(name: str) -> list[tuple[str, float]]:
    rows = []
    for line in (FIXTURES / name).read_text(encoding="utf-8").splitlines():
        if not line:
            continue
        phrase, score = line.split("\t")
        rows.append((phrase, float(score)))
    return rows
