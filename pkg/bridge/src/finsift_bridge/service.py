"""The HTTP service: /embed, /classify, /health.

Request handling is concurrent (one thread per connection) while model
inference stays serialized behind a lock; nothing is cached between
requests, so responses depend only on (model, request body).
"""

import argparse
import json
import sys
import threading
from contextlib import contextmanager
from dataclasses import dataclass
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path
from typing import Mapping, Optional, Sequence

from .backends import Backend, load_backend
from .errors import ConfigError

# Closed label sets of the classify protocol, mirrored in the repo's
# classify.schema.json; the stub refuses answer files that stray outside.
ASPECT_LABELS = (
    "Customer Support",
    "Transactions",
    "Payments & Accounts",
    "Loans & Credit Services",
    "Digital Banking",
    "Trust & Security",
)
RELEVANCE_LABELS = ("Relevant", "Irrelevant")
KNOWN_TASKS = ("relevance", "aspect")

_TASK_LABELS = {"aspect": ASPECT_LABELS, "relevance": RELEVANCE_LABELS}


@dataclass(frozen=True)
class BridgeConfig:
    model: str = "hash-64"
    host: str = "127.0.0.1"
    port: int = 0
    max_batch: int = 64
    normalize: bool = True
    answers: Optional[Mapping[str, Sequence[str]]] = None
    answers_path: Optional[Path] = None

    def __post_init__(self):
        if self.max_batch < 1:
            raise ConfigError(f"max_batch must be >= 1, got {self.max_batch}")
        if self.answers is not None and self.answers_path is not None:
            raise ConfigError("give scripted answers inline or as a file, not both")


def load_answers(path) -> dict[str, list[str]]:
    try:
        raw = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, ValueError) as exc:
        raise ConfigError(f"answers file {path}: {exc}") from exc
    if not isinstance(raw, dict):
        raise ConfigError(f"answers file {path}: expected an object of task lists")
    return {task: list(labels) for task, labels in raw.items()}


def validate_answers(answers: Mapping[str, Sequence[str]]) -> dict[str, list[str]]:
    checked: dict[str, list[str]] = {}
    for task, labels in answers.items():
        if task not in KNOWN_TASKS:
            raise ConfigError(f"unknown task {task!r} in answers")
        if not labels:
            raise ConfigError(f"answers for {task!r} must not be empty")
        allowed = _TASK_LABELS[task]
        for label in labels:
            if label not in allowed:
                raise ConfigError(
                    f"label {label!r} is outside the {task} taxonomy {allowed}"
                )
        checked[task] = list(labels)
    return checked


class Bridge:
    """Request logic, HTTP-free so it unit-tests without a socket."""

    def __init__(self, config: BridgeConfig, backend: Optional[Backend] = None):
        self.config = config
        self.backend = backend or load_backend(config.model, config.normalize)
        answers = config.answers
        if config.answers_path is not None:
            answers = load_answers(config.answers_path)
        self.answers = validate_answers(answers) if answers is not None else None
        self._lock = threading.Lock()

    def health(self) -> dict:
        return {
            "status": "ok",
            "model": self.backend.name,
            "dims": self.backend.dims,
        }

    def embed_request(self, body: dict) -> tuple[int, dict]:
        texts = body.get("texts")
        if not isinstance(texts, list) or not all(isinstance(t, str) for t in texts):
            return 400, {"error": "'texts' must be a list of strings"}
        if not texts:
            return 400, {"error": "'texts' must not be empty"}
        if len(texts) > self.config.max_batch:
            return 413, {
                "error": f"batch of {len(texts)} exceeds max {self.config.max_batch}"
            }
        model = body.get("model")
        if model is not None and model != self.backend.name:
            return 400, {
                "error": f"unknown model {model!r}",
                "available": [self.backend.name],
            }
        with self._lock:
            vectors = self.backend.encode(texts)
        return 200, {
            "vectors": vectors,
            "dims": self.backend.dims,
            "model": self.backend.name,
        }

    def classify_request(self, body: dict) -> tuple[int, dict]:
        task = body.get("task")
        if task not in KNOWN_TASKS:
            return 400, {
                "error": f"unknown task {task!r}",
                "available": list(KNOWN_TASKS),
            }
        texts = body.get("texts")
        if not isinstance(texts, list) or not all(isinstance(t, str) for t in texts):
            return 400, {"error": "'texts' must be a list of strings"}
        if not texts:
            return 400, {"error": "'texts' must not be empty"}
        if self.answers is None or task not in self.answers:
            return 400, {"error": f"no scripted answers configured for {task!r}"}
        script = self.answers[task]
        labels = [script[i % len(script)] for i in range(len(texts))]
        return 200, {"labels": labels, "confidences": [1.0] * len(labels)}


def _make_handler(bridge: Bridge):
    class Handler(BaseHTTPRequestHandler):
        def log_message(self, *args):
            pass

        def _json(self, code: int, payload: dict):
            body = json.dumps(payload, ensure_ascii=False).encode("utf-8")
            self.send_response(code)
            self.send_header("Content-Type", "application/json")
            self.send_header("Content-Length", str(len(body)))
            self.end_headers()
            self.wfile.write(body)

        def do_GET(self):
            if self.path == "/health":
                self._json(200, bridge.health())
            else:
                self._json(404, {"error": f"no such path {self.path!r}"})

        def do_POST(self):
            length = int(self.headers.get("Content-Length", 0))
            try:
                body = json.loads(self.rfile.read(length))
            except ValueError:
                self._json(400, {"error": "request body is not JSON"})
                return
            if not isinstance(body, dict):
                self._json(400, {"error": "request body must be a JSON object"})
                return
            if self.path == "/embed":
                self._json(*bridge.embed_request(body))
            elif self.path == "/classify":
                self._json(*bridge.classify_request(body))
            else:
                self._json(404, {"error": f"no such path {self.path!r}"})

    return Handler


def make_server(config: BridgeConfig) -> tuple[ThreadingHTTPServer, Bridge]:
    bridge = Bridge(config)  # model loads before the port binds
    server = ThreadingHTTPServer((config.host, config.port), _make_handler(bridge))
    return server, bridge


@contextmanager
def serve_background(config: BridgeConfig):
    """Run the service on a daemon thread; yields the endpoint URL."""
    server, _ = make_server(config)
    thread = threading.Thread(
        target=lambda: server.serve_forever(poll_interval=0.02), daemon=True
    )
    thread.start()
    try:
        yield f"http://{config.host}:{server.server_port}"
    finally:
        server.shutdown()
        server.server_close()


def serve(config: BridgeConfig) -> None:
    server, bridge = make_server(config)
    print(
        f"serving {bridge.backend.name} ({bridge.backend.dims} dims) "
        f"on http://{config.host}:{server.server_port}"
    )
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        server.server_close()


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = argparse.ArgumentParser(
        prog="finsift-bridge",
        description="Serve embeddings and scripted classifications over HTTP.",
    )
    parser.add_argument("--model", default="hash-64")
    parser.add_argument("--host", default="127.0.0.1")
    parser.add_argument("--port", type=int, default=8713)
    parser.add_argument("--max-batch", type=int, default=64)
    parser.add_argument("--no-normalize", action="store_true")
    parser.add_argument("--answers", help="JSON file of scripted classify labels")
    args = parser.parse_args(argv)
    try:
        config = BridgeConfig(
            model=args.model,
            host=args.host,
            port=args.port,
            max_batch=args.max_batch,
            normalize=not args.no_normalize,
            answers_path=Path(args.answers) if args.answers else None,
        )
        serve(config)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
