"""Exception hierarchy shared by every layer.

Each error carries a short ``code`` (printed as ``error[CODE]``) and an
optional source span.  Layers raise; only the CLI turns errors into text.
"""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class Span:
    """Half-open character range ``[start, end)`` into a source text."""

    start: int
    end: int
    path: str = "<input>"

    def line_col(self, text: str) -> tuple[int, int]:
        line = text.count("\n", 0, self.start) + 1
        col = self.start - (text.rfind("\n", 0, self.start) + 1) + 1
        return line, col


class UnfoldError(Exception):
    code = "Error"

    def __init__(self, message: str, span: Span | None = None):
        super().__init__(message)
        self.message = message
        self.span = span


# proposition lattice


class DuplicateProp(UnfoldError):
    code = "DuplicateProp"


class UnknownProp(UnfoldError):
    code = "UnknownProp"


# kernel


class KernelError(UnfoldError):
    code = "KernelError"


class TypeMismatch(KernelError):
    code = "TypeMismatch"

    def __init__(self, message, expected=None, found=None, span=None):
        super().__init__(message, span)
        self.expected = expected
        self.found = found


class PropNotTrue(KernelError):
    code = "PropNotTrue"


class BoundaryMismatch(KernelError):
    code = "BoundaryMismatch"


class NotAType(KernelError):
    code = "NotAType"


class IllTypedDecl(KernelError):
    code = "IllTypedDecl"

    def __init__(self, name: str, reason: str, span=None):
        super().__init__(f"declaration {name}: {reason}", span)
        self.name = name
        self.reason = reason


class DuplicateConst(KernelError):
    code = "DuplicateConst"


class UnstableLeak(UnfoldError):
    """A neutral whose frontier is true reached readback output.  Always a bug."""

    code = "UnstableLeak"


# surface and elaboration


class LexError(UnfoldError):
    code = "LexError"


class ParseError(UnfoldError):
    code = "ParseError"

    def __init__(self, message, expected=(), span=None):
        super().__init__(message, span)
        self.expected = tuple(sorted(set(expected)))


class ElabError(UnfoldError):
    code = "ElabError"


class DuplicateDefinition(ElabError):
    code = "DuplicateDefinition"


class UnboundName(ElabError):
    code = "UnboundName"


class ConvMismatch(ElabError):
    code = "ConvMismatch"

    def __init__(self, message, expected: str, found: str, span=None):
        super().__init__(message, span)
        self.expected = expected
        self.found = found


class UnknownUnfoldTarget(ElabError):
    code = "UnknownUnfoldTarget"


class AbstractUnfoldTarget(ElabError):
    code = "AbstractUnfoldTarget"

    def __init__(self, message, name: str, abstract_site: Span | None = None, span=None):
        super().__init__(message, span)
        self.name = name
        self.abstract_site = abstract_site


# oracle and CLI


class Inconclusive(UnfoldError):
    code = "Inconclusive"


class AbstractProp(UnfoldError):
    code = "AbstractProp"


class UsageError(UnfoldError):
    code = "UsageError"
