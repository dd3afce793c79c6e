"""Exception hierarchy shared across the package."""


class LogicastError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(LogicastError, ValueError):
    """An argument lies outside the mathematical domain of the operation."""


class StatementSyntaxError(LogicastError):
    """A statement file failed to parse; carries the offending position."""

    def __init__(self, message: str, line: int, col: int):
        super().__init__(f"line {line}, col {col}: {message}")
        self.line = line
        self.col = col


class VariableOutOfRange(LogicastError):
    """A variable index is not in 1..m."""


class UniverseTooLarge(LogicastError):
    """The assignment space 2^m exceeds the supported size."""


class TruncatedStream(LogicastError):
    """A bit stream ended before a complete codeword was read."""


class MalformedCodeword(LogicastError):
    """A codeword is syntactically impossible or absurdly large."""


class RankOutOfRange(LogicastError):
    """An enumerative rank does not address any subset."""


class WidthOverflow(LogicastError):
    """A value does not fit the fixed bit width allotted to it."""


class SearchExhausted(LogicastError):
    """A shared-randomness row scan passed its hard iteration cap."""


class DuplicateColumns(LogicastError):
    """A matrix that must have distinct columns does not."""


class NotEntailed(LogicastError):
    """A precondition of the form `s entails t` does not hold."""


class PreconditionViolated(LogicastError):
    """A documented operation precondition does not hold."""


class ContractViolation(LogicastError):
    """A decoded result failed its correctness contract during trials."""


class MalformedHeader(LogicastError):
    """A transmission header is missing, truncated, or inconsistent."""
