"""Exception types shared across the package."""

from __future__ import annotations


class CycloneError(Exception):
    """Base class for all package errors."""


class ConfigurationError(CycloneError):
    """A rules or run configuration is invalid."""


class ContractViolation(CycloneError):
    """An operation was called outside its preconditions."""


class IllegalActionError(CycloneError):
    """An action was rejected by the rules; the state is unchanged.

    ``reason`` is a stable machine-readable code, e.g. ``"no_tokens"``.
    """

    def __init__(self, reason: str, detail: str = ""):
        self.reason = reason
        super().__init__(f"{reason}: {detail}" if detail else reason)


class ReplayError(CycloneError):
    """A logged action failed to apply; ``index`` names the bad step."""

    def __init__(self, index: int, cause: Exception):
        self.index = index
        self.cause = cause
        super().__init__(f"action {index} failed on replay: {cause}")


class DesyncError(CycloneError):
    """An event does not follow from a view's recorded history."""


class FormatError(CycloneError):
    """A serialized artifact (log, weights, decision db) is malformed."""


class ValidationError(CycloneError):
    """Input data (records, arguments) failed a consistency check."""


class ExperimentError(CycloneError):
    """A training experiment could not be evaluated."""
