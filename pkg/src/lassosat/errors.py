"""Exception hierarchy. Every user-facing failure carries enough context to locate it."""

from __future__ import annotations


class LassosatError(Exception):
    """Base class for all errors raised by this package."""


class SexprSyntaxError(LassosatError):
    """Malformed s-expression input (unbalanced parens, stray tokens)."""

    def __init__(self, message: str, line: int = 0, col: int = 0):
        self.line = line
        self.col = col
        super().__init__(f"{message} (line {line}, column {col})" if line else message)


class SpecFormatError(LassosatError):
    """A spec file violates the section grammar or its validation rules."""

    def __init__(self, message: str, line: int = 0, col: int = 0):
        self.line = line
        self.col = col
        super().__init__(f"{message} (line {line}, column {col})" if line else message)


class FormulaError(LassosatError):
    """A formula cannot be lowered to the core fragment (bad offset, unbound variable, ...)."""


class DomainError(LassosatError):
    """A finite-domain variable is used with a value outside its declared domain."""


class HistoryError(LassosatError):
    """A history file or section is malformed or self-contradictory."""


class EncodingError(LassosatError):
    """The encoder was driven outside its contract (bad bound, instant out of range, ...)."""


class SolverError(LassosatError):
    """An external solver could not be run or produced unusable output."""


class SolverTimeout(SolverError):
    """The embedded solver exceeded its time limit."""


class BoundSearchError(LassosatError):
    """Completeness-bound search exhausted its maximum bound while still satisfiable."""
