"""Exception types raised across the package."""


class QCAError(ValueError):
    """Base class for all package errors."""


class InvalidConfig(QCAError):
    pass


class InvalidLevel(QCAError):
    pass


class NotNormalized(QCAError):
    pass


class SupportOverflow(QCAError):
    pass


class ConfigMismatch(QCAError):
    pass


class InvalidPulse(QCAError):
    pass


class OracleTooLarge(QCAError):
    pass


class ModeMismatch(QCAError):
    pass


class NotUnitary(QCAError):
    pass


class NotSpecialUnitary(QCAError):
    pass


class InvalidCircuit(QCAError):
    pass


class RoutingError(QCAError):
    pass


class PointerNotHome(QCAError):
    pass


class PartitionTooSmall(QCAError):
    pass


class InvalidScaling(QCAError):
    pass


class ParseError(QCAError):
    """Malformed text input; carries a 1-based line and column."""

    def __init__(self, message: str, line: int = 0, column: int = 0):
        self.line = line
        self.column = column
        super().__init__(f"line {line}, column {column}: {message}" if line else message)
