"""Exception types shared across the simpath package.

Plain argument validation raises ValueError; the classes here cover
data-flow failures that callers may want to catch selectively.
"""

from __future__ import annotations


class SimPathError(Exception):
    """Base class for simpath domain errors."""


class ParseError(SimPathError):
    """A record could not be decoded. Carries the 1-based line number."""

    def __init__(self, line_no: int, message: str) -> None:
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


class OrderingError(ParseError):
    """Timestamps in a stream went backwards or repeated."""


class InsufficientDataError(SimPathError):
    """Not enough samples to perform the requested operation."""


class DataGapError(SimPathError):
    """Input samples are separated by a gap too long to interpolate."""


class RouteConfigError(SimPathError):
    """A route file is structurally invalid (overlapping or malformed zones)."""


class MonotonicityError(SimPathError):
    """The scheduler clock was stepped backwards."""


class IntegrityError(SimPathError):
    """A persisted session failed validation (sequence gap or hash mismatch)."""
