"""Exception hierarchy for qetale.

Every error carries an ``exit_code`` category so the command line front end can
map it without knowing the concrete class:

* 1: usage errors (bad flags),
* 2: input errors (unparsable expressions or system files),
* 3: computation errors (resource limits, failed preconditions, invariant
  violations).
"""

from __future__ import annotations

from typing import Optional

EXIT_USAGE = 1
EXIT_INPUT = 2
EXIT_COMPUTATION = 3


class QetaleError(Exception):
    """Base class for all qetale errors."""

    exit_code: int = EXIT_COMPUTATION


class UsageError(QetaleError):
    """Invalid command line usage."""

    exit_code = EXIT_USAGE


class ParseError(QetaleError):
    """A positioned diagnostic raised while parsing a polynomial expression."""

    exit_code = EXIT_INPUT

    def __init__(self, message: str, line: int = 1, column: int = 1) -> None:
        self.line = line
        self.column = column
        self.reason = message
        super().__init__(f"{line}:{column}: {message}")


class UnknownVariable(ParseError):
    """A name that is not part of the ambient variable list."""


class BadExponent(ParseError):
    """A negative, fractional or missing exponent."""


class UnbalancedParentheses(ParseError):
    """A missing ``(`` or ``)``."""


class SystemFileError(QetaleError):
    """A structural problem in a system definition file."""

    exit_code = EXIT_INPUT

    def __init__(self, message: str, line: Optional[int] = None) -> None:
        self.line = line
        prefix = f"line {line}: " if line is not None else ""
        super().__init__(prefix + message)


class DomainError(QetaleError):
    """Operands live in different rings or a variable is unknown."""


class NotDivisible(QetaleError):
    """An exact division left a nonzero remainder."""


class PreconditionError(QetaleError):
    """An operation was called outside of its documented precondition."""


class NotZeroDimensional(QetaleError):
    """The quotient algebra is not finite dimensional."""


class GenericFiberInfinite(NotZeroDimensional):
    """The generic fiber over a stratum is not finite."""


class EmptyStratum(QetaleError):
    """The stratum equations have no common zero."""


class ResourceLimitExceeded(QetaleError):
    """A configured computation limit was hit."""


class InvariantViolation(QetaleError):
    """A certified identity failed; this indicates a logic bug."""


class PointNotInStratum(QetaleError):
    """A rational point does not satisfy the stratum's defining conditions."""


class SampleNotInRegion(QetaleError):
    """A sample point does not satisfy the region's conditions."""
