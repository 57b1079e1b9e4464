"""HTTP bridge exposing sentence embeddings and a scripted classifier
behind the wire protocol the finsift remote provider speaks."""

from .backends import HashBackend, SentenceTransformerBackend, load_backend
from .errors import BridgeError, ConfigError
from .service import (
    ASPECT_LABELS,
    KNOWN_TASKS,
    RELEVANCE_LABELS,
    Bridge,
    BridgeConfig,
    load_answers,
    main,
    make_server,
    serve,
    serve_background,
    validate_answers,
)

__version__ = "0.1.0"
