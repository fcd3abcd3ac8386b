"""Exception hierarchy shared by the library and the CLI exit-code mapping."""


class FmcwMendError(Exception):
    """Base class for all package errors."""


class ConfigError(FmcwMendError, ValueError):
    """Invalid or incomplete configuration (CLI exit code 2)."""


class DataError(FmcwMendError, ValueError):
    """Invalid signal data, gap geometry, or file contents (CLI exit code 3)."""


class NoInterferenceError(DataError):
    """Detector found nothing to excise."""


class EstimationError(FmcwMendError, RuntimeError):
    """Model estimation failed (CLI exit code 4)."""
