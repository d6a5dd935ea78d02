"""
Exception types shared across the package.

Mathematical answers ("not isomorphic", "indecomposable", ...) are returned as
values. Exceptions are reserved for malformed input and for cases the tool
does not support, so the command line can map them to distinct exit codes.
"""

from typing import Optional


class InputError(ValueError):
    """Malformed input data or a violated precondition."""

    def __init__(self, message: str, source: Optional[str] = None,
                 line: Optional[int] = None, field: Optional[str] = None):
        self.source = source
        self.line = line
        self.field = field
        location = []
        if source is not None:
            location.append(str(source))
        if line is not None:
            location.append(f"line {line}")
        if field is not None:
            location.append(f"field '{field}'")
        super().__init__(f"{', '.join(location)}: {message}" if location else message)
        self.message = message


class UnsupportedCaseError(RuntimeError):
    """The input is well-formed but lies outside what the algorithms decide."""


class OrbitSearchExceeded(UnsupportedCaseError):
    """The signed-permutation search would exceed the configured bound."""
