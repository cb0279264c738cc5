"""Exception types shared across the toolkit."""

from __future__ import annotations


class ReasonscaleError(Exception):
    """Base class for all toolkit errors."""


class ParameterError(ReasonscaleError):
    """A generator or oracle received invalid parameters."""


class TemplateError(ReasonscaleError):
    """A text template is malformed (bad slots, bad ordering)."""


class CapacityError(ReasonscaleError):
    """A request asked for more items than the inputs can supply.

    Carries the achievable maximum so callers can retry with a
    feasible request.
    """

    def __init__(self, message: str, max_feasible: int):
        super().__init__(message)
        self.max_feasible = max_feasible


class IngestError(ReasonscaleError):
    """A data file failed schema validation; message names the line."""

    def __init__(self, message: str, line_number: int | None = None):
        super().__init__(message)
        self.line_number = line_number


class ConfigError(ReasonscaleError):
    """A run configuration is inconsistent or incomplete."""


class FitError(ReasonscaleError):
    """A regression could not be fit (degenerate design, too few points)."""


class RemoteBatchError(ReasonscaleError):
    """A sampling batch failed as a whole (auth, connectivity).

    Partial results, if any, were flushed to disk before raising.
    """
