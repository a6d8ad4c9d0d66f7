"""Exception hierarchy shared across the package.

The three categories map onto the CLI exit codes: configuration problems
(bad parameters, impossible filter bands) exit 1, data problems (unreadable
files, recordings too short, label mismatches) exit 2, and model problems
(dimension mismatches, divergence) exit 3.
"""


class EmgMixError(Exception):
    """Base class for all package errors."""


class ConfigError(EmgMixError):
    """Invalid configuration or parameter combination."""


class DataError(EmgMixError):
    """Invalid, malformed, or insufficient input data."""


class ModelError(EmgMixError):
    """Model training or prediction failure."""
