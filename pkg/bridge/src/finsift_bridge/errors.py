class BridgeError(Exception):
    """Base for everything this service raises on purpose."""


class ConfigError(BridgeError):
    """Bad startup configuration; the process must not begin serving."""
