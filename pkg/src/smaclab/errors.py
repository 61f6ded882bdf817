"""Error classes shared across the package.

The CLI maps these onto exit codes: validation/usage problems exit 1,
resource-limit problems exit 2.
"""


class SmaclabError(Exception):
    """Base class for all package errors."""


class DimensionMismatchError(SmaclabError):
    """Alphabets or array shapes of the arguments do not line up."""


class ValidationError(SmaclabError):
    """An object violates one of its declared invariants."""


class UsageError(SmaclabError):
    """An operation was called with arguments outside its contract."""


class AtomParseError(UsageError):
    """An information-term string does not parse."""


class ResourceLimitError(SmaclabError):
    """A computation would exceed the configured enumeration/memory budget."""


class InternalConsistencyError(SmaclabError):
    """A quantity violated a mathematical guarantee by more than float noise."""
