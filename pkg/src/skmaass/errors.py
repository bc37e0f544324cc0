"""Exception hierarchy; each class maps onto one CLI exit code."""


class SkError(Exception):
    exit_code = 1


class ConfigError(SkError, ValueError):
    """Invalid parameters (unsupported weight, thresholds out of range)."""

    exit_code = 2


class CacheError(SkError, OSError):
    """Unreadable, malformed or mismatched coefficient cache."""

    exit_code = 3


class RangeError(SkError, ValueError):
    """A query needs coefficients beyond the computed range."""

    exit_code = 4


class VerificationError(SkError, AssertionError):
    """A mathematical invariant failed; signals a bug or a corrupted table."""

    exit_code = 1
