"""Shared exception types."""


class ConfigError(Exception):
    """Invalid configuration value or malformed config/genome document."""


class StructureError(Exception):
    """A genome violated a structural invariant (e.g. a cycle reached decode)."""
