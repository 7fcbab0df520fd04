"""Exception hierarchy.

Two families matter to callers: ``CarlsonError`` for malformed input or
violated preconditions, and ``SearchExhausted`` for honest "not found within
the given window/budget" outcomes.  The CLI maps the latter to exit status 2.
"""


class CarlsonError(Exception):
    pass


class SearchExhausted(CarlsonError):
    """A bounded search ran out of room. Never a refutation of a theorem."""


class UnknownSymbol(CarlsonError, ValueError):
    pass


class EmptyOperand(CarlsonError, ValueError):
    pass


class NotSeparated(CarlsonError, ValueError):
    pass


class OutOfWindow(CarlsonError, ValueError):
    pass


class WindowOverflow(CarlsonError, ValueError):
    pass


class EmptySet(CarlsonError, ValueError):
    pass


class ZeroInput(CarlsonError, ValueError):
    pass


class IndexOutOfRange(CarlsonError, IndexError):
    pass


class ParseError(CarlsonError, ValueError):
    pass


class PreconditionFailed(CarlsonError):
    pass


class NotWeaklyThin(PreconditionFailed):
    pass


class AmbiguousLimit(CarlsonError):
    pass


class ScheduleGap(CarlsonError):
    pass


class VerificationFailed(CarlsonError):
    pass


class HashMismatch(CarlsonError):
    pass


class MalformedCertificate(CarlsonError, ValueError):
    pass


class BudgetExhausted(SearchExhausted):
    pass


class Exhausted(SearchExhausted):
    pass


class ExceedsBound(SearchExhausted):
    pass


__all__ = [
    "CarlsonError",
    "SearchExhausted",
    "UnknownSymbol",
    "EmptyOperand",
    "NotSeparated",
    "OutOfWindow",
    "WindowOverflow",
    "EmptySet",
    "ZeroInput",
    "IndexOutOfRange",
    "ParseError",
    "PreconditionFailed",
    "NotWeaklyThin",
    "AmbiguousLimit",
    "ScheduleGap",
    "VerificationFailed",
    "HashMismatch",
    "MalformedCertificate",
    "BudgetExhausted",
    "Exhausted",
    "ExceedsBound",
]
