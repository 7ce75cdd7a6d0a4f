"""Shared exception types."""


class FFCircleError(Exception):
    """Base class for all package errors."""


class PrecisionError(FFCircleError):
    """A Laurent-series coefficient was requested below its certified window."""


class BudgetError(FFCircleError):
    """An enumeration exceeded its configured cell/support budget."""


class ConfigError(FFCircleError):
    """A configuration file or parameter set failed validation."""
