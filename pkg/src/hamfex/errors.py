"""Exception types shared across the package.

Exit-code mapping used by the CLI: ValidationError -> 2, CacheError -> 3.
"""


class ValidationError(ValueError):
    """Input data or configuration violates a documented contract."""


class CacheError(RuntimeError):
    """A cache entry exists but cannot be trusted or read."""
