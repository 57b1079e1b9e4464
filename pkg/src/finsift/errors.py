"""Exception types shared across the package.

Every error raised on purpose by this package derives from FinsiftError so
callers can catch the whole family with one clause; the subclasses exist
for callers that need to branch on the failure mode.
"""


class FinsiftError(Exception):
    """Base class for all errors raised by finsift."""


class ValidationError(FinsiftError, ValueError):
    """A domain object was constructed with invariant-violating fields."""


class ArgumentError(FinsiftError, ValueError):
    """An operation was called with arguments outside its contract."""


class ConfigError(FinsiftError, ValueError):
    """A configuration object or file is invalid."""


class LexiconParseError(FinsiftError):
    """A lexicon or stoplist file could not be parsed."""

    def __init__(self, message: str, line_no: int | None = None):
        self.line_no = line_no
        if line_no is not None:
            message = f"line {line_no}: {message}"
        super().__init__(message)


class LexiconIntegrityError(FinsiftError):
    """Entries in a lexicon file contradict each other."""


class UndefinedSimilarityError(FinsiftError, ValueError):
    """Cosine similarity was requested against a zero vector."""


class ProviderError(FinsiftError):
    """An embedding provider failed to produce vectors."""


class MissingVectorError(ProviderError, KeyError):
    """A fixture-backed provider has no vector for the requested text."""


class RemoteError(ProviderError):
    """A remote classifier or embedding endpoint misbehaved."""


class DivergenceError(FinsiftError):
    """Training produced a non-finite loss."""

    def __init__(self, epoch: int):
        self.epoch = epoch
        super().__init__(f"training loss became non-finite at epoch {epoch}")


class UnclassifiableError(FinsiftError):
    """The lexicon strategy found no aspect evidence in a comment."""


class SourceError(FinsiftError):
    """A comment source failed mid-pagination."""
