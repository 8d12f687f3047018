import typing


class ValuationError(Exception):
    """
    Base class for every error raised by functional-valuations.

    Carries a human readable message plus a mapping of the offending values so
    callers (and the CLI diagnostics) can report exactly what was rejected.

    Attributes:
        message: Short description of the failure.
        detail: Offending values keyed by name, e.g. ``{"lambda": -1.0}``.
            Empty when there is nothing more to say than the message.
    """

    message: str
    detail: typing.Dict[str, typing.Any]

    def __init__(
        self,
        message: str,
        *,
        detail: typing.Optional[typing.Dict[str, typing.Any]] = None,
    ) -> None:
        super().__init__(message)
        self.message = message
        self.detail = dict(detail or {})

    def __str__(self) -> str:
        """
        Return a string representation of the error.

        Format: "{message}" or "{message} ({key}={value}, ...)"
        """
        if not self.detail:
            return self.message
        rendered = ", ".join(f"{k}={v!r}" for k, v in sorted(self.detail.items()))
        return f"{self.message} ({rendered})"


class DomainError(ValuationError):
    """Query or input outside the domain an object is defined on."""


class ConvexityError(ValuationError):
    """Samples fail the discrete convexity validator."""


class CoverageError(ValuationError):
    """A weight's support is not strictly inside the trimmed grid box."""


class ClippingError(ValuationError):
    """The gradient range of a grid function exceeds the requested dual box."""


class AdmissibilityError(ValuationError):
    """A density violates ``xi(t) * t -> 0`` as ``t -> 0+``."""


class UnsupportedRepresentationError(ValuationError):
    """The operation has no implementation on the given function representation."""


class ArgumentError(ValuationError):
    """A scalar or structural argument is out of range."""


class SuiteNotFoundError(ValuationError):
    """Unknown property suite name."""


class ConfigError(ValuationError):
    """A configuration document parsed but does not resolve."""
