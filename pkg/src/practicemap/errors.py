"""Exception hierarchy shared across the package.

The CLI maps these onto exit codes: ConfigError -> 1, InputError (and
subclasses) -> 2, anything else -> 3.
"""


class PracticeMapError(Exception):
    """Base class for all errors raised by this package."""


class ConfigError(PracticeMapError):
    """A run configuration is invalid (bad value, unknown aspect, ...)."""


class InputError(PracticeMapError):
    """An input file is missing, unreadable, or structurally unusable."""


class SchemaError(InputError):
    """A delimited input file lacks a required column."""


class MissingTimestampError(InputError):
    """A temporal operation was requested on records without timestamps."""
