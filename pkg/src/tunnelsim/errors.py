"""Shared exception types."""


class ConfigError(ValueError):
    """Invalid configuration; message names the offending field."""


class GeometryError(ValueError):
    """Geometric query outside its domain (e.g. ray origin outside the corridor)."""


class EpisodeError(RuntimeError):
    """Episode contract misuse (e.g. step after terminal without reset)."""
