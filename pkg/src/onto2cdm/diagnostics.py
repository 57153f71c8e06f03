from __future__ import annotations

import enum
from dataclasses import dataclass


class Severity(str, enum.Enum):
    ERROR = "error"
    WARNING = "warning"


@dataclass(frozen=True)
class Diagnostic:
    """A located message produced while parsing, validating or transforming.

    ``line`` and ``column`` are 1-based; 0 means the diagnostic is not tied
    to a source position.
    """

    severity: Severity
    code: str
    message: str
    line: int = 0
    column: int = 0

    @classmethod
    def error(cls, code: str, message: str, line: int = 0, column: int = 0) -> Diagnostic:
        return cls(Severity.ERROR, code, message, line, column)

    @classmethod
    def warning(cls, code: str, message: str, line: int = 0, column: int = 0) -> Diagnostic:
        return cls(Severity.WARNING, code, message, line, column)

    @property
    def is_error(self) -> bool:
        return self.severity is Severity.ERROR

    def __str__(self) -> str:
        where = f"{self.line}:{self.column}: " if self.line else ""
        return f"{where}{self.severity.value} {self.code}: {self.message}"


def has_errors(diagnostics) -> bool:
    return any(d.is_error for d in diagnostics)
