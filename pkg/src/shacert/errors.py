"""Exception hierarchy shared by all shacert modules.

The CLI maps these onto its exit-code contract: parameter problems exit 1,
search exhaustion exits 2, certificate failures exit 3, I/O problems exit 4.
"""

from __future__ import annotations


class ShacertError(Exception):
    """Base class for all errors raised by this package."""


class ParameterError(ShacertError, ValueError):
    """Invalid argument: bad prime, malformed subset, out-of-range exponent."""


class DomainError(ParameterError):
    """Input outside the mathematical domain of an operation (e.g. zero)."""


class SingularCurveError(ParameterError):
    """Curve parameters with coinciding branch points (u = 3v, or 3 | uv)."""


class FactorizationError(ParameterError):
    """Trial division hit its bound before the input was fully factored."""


class SearchExhausted(ShacertError, RuntimeError):
    """The candidate scan hit its cap before the requested tuple was found."""

    def __init__(self, message: str, found: int, needed: int):
        super().__init__(message)
        self.found = found
        self.needed = needed


class CertificateFailure(ShacertError, RuntimeError):
    """A certified claim failed re-verification, naming the offending entry."""


class BoundNotEstablished(CertificateFailure):
    """A rank lower bound could not be certified; carries the failing piece."""

    def __init__(self, message: str, failing=None):
        super().__init__(message)
        self.failing = failing
