#!/usr/bin/env python3
"""
kodim_errors.py - Exception types shared by the kodim modules

Violations and verdicts are returned as data. Exceptions are reserved for
inputs a computation cannot accept (precondition failures), invalid
manifold descriptions handed to a computing function, and parse failures.
The CLI maps them to exit codes via `exit_code`.
"""

from typing import Any, FrozenSet, Iterable, List, Optional


class KodimError(Exception):
    """Base class for every error raised by kodim"""
    exit_code = 1


class PreconditionError(KodimError):
    """An operation was called outside its documented domain"""


class ValidationError(KodimError):
    """A manifold description failed validation"""

    def __init__(self, message: str, violations: Optional[List[Any]] = None):
        super().__init__(message)
        self.violations = list(violations or [])


class ParseError(KodimError):
    """A description could not be parsed.

    offset is a 0-based byte offset into the UTF-8 encoded input; expected is
    the set of token names (or literal spellings) that would have been accepted there.
    """
    exit_code = 2

    def __init__(self, message: str, offset: int = 0, expected: Iterable[str] = ()):
        self.offset = offset
        self.expected: FrozenSet[str] = frozenset(expected)
        super().__init__(message)

    def __str__(self) -> str:
        base = f"{self.args[0]} (at offset {self.offset})"
        if self.expected:
            base += f"; expected one of: {', '.join(sorted(self.expected))}"
        return base


def byte_offset(text: str, char_offset: int) -> int:
    """Byte position in the UTF-8 encoding of text of the character at char_offset"""
    char_offset = max(0, min(char_offset, len(text)))
    return len(text[:char_offset].encode('utf-8', errors='surrogatepass'))
