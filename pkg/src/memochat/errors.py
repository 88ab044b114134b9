"""Exception hierarchy shared across the package.

Every error that can cross the API boundary carries a stable ``code`` used
verbatim in HTTP error bodies; codes are frozen once published.
"""

from __future__ import annotations


class MemoChatError(Exception):
    """Base class for all package errors."""

    code = "INTERNAL"
    http_status = 500


class InvalidArgument(MemoChatError):
    code = "INVALID_ARGUMENT"
    http_status = 400


# -- store ------------------------------------------------------------------

class EmptyText(MemoChatError):
    code = "EMPTY_TEXT"
    http_status = 400


class TextTooLong(MemoChatError):
    code = "TEXT_TOO_LONG"
    http_status = 400


class TooManyTopics(MemoChatError):
    code = "TOO_MANY_TOPICS"
    http_status = 400


class UnknownCloseness(MemoChatError):
    code = "UNKNOWN_CLOSENESS"
    http_status = 400


class NotFound(MemoChatError):
    code = "NOT_FOUND"
    http_status = 404


class Unauthorized(MemoChatError):
    code = "UNAUTHORIZED"
    http_status = 401


# -- embeddings -------------------------------------------------------------

class ZeroNorm(MemoChatError):
    code = "ZERO_NORM"
    http_status = 400


class DimensionMismatch(MemoChatError):
    code = "DIMENSION_MISMATCH"
    http_status = 400


class MalformedVectorTable(MemoChatError):
    """Raised at load time; message names the offending line."""

    code = "MALFORMED_VECTOR_TABLE"
    http_status = 500


# -- prompts ----------------------------------------------------------------

class NoStarters(MemoChatError):
    code = "NO_STARTERS"
    http_status = 409


# -- generation -------------------------------------------------------------

class ProviderError(MemoChatError):
    code = "PROVIDER_ERROR"
    http_status = 502


class ProviderTimeout(ProviderError):
    code = "PROVIDER_TIMEOUT"
    http_status = 504


class ProviderRefusal(ProviderError):
    """Non-retryable provider status (e.g. auth failure, content refusal)."""

    code = "PROVIDER_REFUSAL"
    http_status = 502


class ProviderOverloaded(ProviderError):
    """Retryable transient status (rate limit, 5xx)."""

    code = "PROVIDER_OVERLOADED"
    http_status = 503


class RetriesExhausted(ProviderError):
    code = "RETRIES_EXHAUSTED"
    http_status = 503


class UnparseableOutput(MemoChatError):
    code = "UNPARSEABLE_OUTPUT"
    http_status = 502


# -- session ----------------------------------------------------------------

class UnknownPartner(MemoChatError):
    code = "UNKNOWN_PARTNER"
    http_status = 404


class UnknownSession(MemoChatError):
    code = "UNKNOWN_SESSION"
    http_status = 404


class NoPending(MemoChatError):
    code = "NO_PENDING"
    http_status = 409


class IndexOutOfRange(MemoChatError):
    code = "INDEX_OUT_OF_RANGE"
    http_status = 400


class UnknownTag(MemoChatError):
    code = "UNKNOWN_TAG"
    http_status = 400


class AlreadyEnded(MemoChatError):
    code = "ALREADY_ENDED"
    http_status = 409


class SessionEmpty(MemoChatError):
    code = "SESSION_EMPTY"
    http_status = 409


class Busy(MemoChatError):
    """Another operation on the same session is in flight."""

    code = "BUSY"
    http_status = 409
