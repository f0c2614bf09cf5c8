"""Exception hierarchy; every error raised on user input derives from QaspError."""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class SourceSpan:
    file: str
    line: int
    column: int

    def __str__(self) -> str:
        return f"{self.file}:{self.line}:{self.column}"


class QaspError(Exception):
    """Base class for all solver errors."""

    def __init__(self, message: str, span: SourceSpan | None = None):
        super().__init__(message)
        self.message = message
        self.span = span

    def __str__(self) -> str:
        if self.span is None:
            return self.message
        return f"{self.span}: {self.message}"


class ParseError(QaspError):
    pass


class SafetyError(QaspError):
    def __init__(self, variable: str, rule: str, span: SourceSpan | None = None):
        super().__init__(f"unsafe variable {variable} in rule: {rule}", span)
        self.variable = variable


class StratificationError(QaspError):
    pass


class NotNormalError(QaspError):
    pass


class GroundingError(QaspError):
    pass


class EngineError(QaspError):
    pass


class CapExceeded(QaspError):
    """A brute-force oracle was asked to exceed its configured size cap."""


class EvaluationError(QaspError):
    pass
