"""Exception types shared across the package."""

from __future__ import annotations


class ParseError(ValueError):
    """Malformed formula or model text.

    Carries the 1-based ``line``/``column`` of the offending token and the
    set of token kinds that would have been accepted there.
    """

    def __init__(self, message: str, line: int = 0, column: int = 0,
                 expected: frozenset[str] | set[str] = frozenset()):
        self.message = message
        self.line = line
        self.column = column
        self.expected = frozenset(expected)
        loc = f"{line}:{column}: " if line else ""
        exp = ""
        if self.expected:
            exp = " (expected one of: " + ", ".join(sorted(self.expected)) + ")"
        super().__init__(f"{loc}{message}{exp}")


class UnknownOperator(ParseError):
    """A character sequence that is not a token of the language."""


class SemanticError(ValueError):
    """Well-formed model text that denotes an invalid model."""


class UnboundVariable(LookupError):
    """An atom refers to a variable the state does not assign."""


class UnknownAtom(ValueError):
    """A formula mentions a variable or value the model does not declare."""


class NotInNNF(ValueError):
    pass


class StateSpaceLimit(RuntimeError):
    def __init__(self, cap: int):
        self.cap = cap
        super().__init__(f"state space exceeds cap of {cap} states")


class SuiteMismatch(AssertionError):
    """The reproduction suite produced a verdict vector other than the expected one."""

    def __init__(self, report):
        self.report = report
        super().__init__(
            f"verdicts {report.observed_symbols()} != expected {report.expected_symbols()}")
