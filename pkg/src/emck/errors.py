"""Exception hierarchy shared across the package.

Structural errors (bad construction input) and semantic errors (operations
whose mathematical preconditions fail) are kept distinct so the CLI can map
them to stable exit codes.
"""

from __future__ import annotations


class EmckError(Exception):
    """Base class for every error raised by this package."""


class InvariantError(EmckError):
    """A structural invariant of a value type is violated."""


class DuplicateState(InvariantError):
    """A state name occurs more than once in a state space."""


class InvalidStateName(InvariantError):
    """A state name is empty or otherwise unusable."""


class InvalidAtoms(InvariantError):
    """Atom blocks do not form a partition of the state space."""


class AlgebraMismatch(InvariantError):
    """Two operands were built over different sigma-algebras."""


class PriorNotNormalized(InvariantError):
    """Prior weights are negative or do not sum to one."""


class IncompleteCapacity(InvariantError):
    """A set-function table does not cover every event of the algebra."""


class RationalOutOfRange(InvariantError):
    """A rational value lies outside its required range (e.g. [0, 1])."""


class TooManyAtoms(EmckError):
    """An exhaustive enumeration over events would exceed the atom cap."""


class NotMeasurable(EmckError):
    """A set that must belong to the sigma-algebra does not."""


class ConditioningOnNull(EmckError):
    """Conditional probability requested on a measure-zero event."""


class NotInducible(EmckError):
    """An operator table violates monotonicity, conjunction, or necessitation.

    Carries a human-readable witness of the first violation found.
    """

    def __init__(self, message: str, witness: object = None):
        super().__init__(message)
        self.witness = witness


class AssumptionViolated(EmckError):
    """A base assumption of the model (e.g. positive-measure cells) fails."""


class HypothesisNotMet(EmckError):
    """A theorem hypothesis fails and the caller did not ask for diagnostics."""


class ResourceLimit(EmckError):
    """An enumeration exceeded its configured budget."""


class ParseError(EmckError):
    """Source text is not a valid model document or expression.

    ``line`` and ``col`` are 1-based; ``col`` is None when the whole line is
    at fault.
    """

    def __init__(self, message: str, line: int | None = None, col: int | None = None):
        suffix = ""
        if line is not None:
            suffix = f" (line {line})" if col is None else f" (line {line}, col {col})"
        super().__init__(message + suffix)
        self.line = line
        self.col = col


class PriorParseError(ParseError, PriorNotNormalized):
    """A prior line has bad weights or a sum different from one."""


class CapacityParseError(ParseError, IncompleteCapacity):
    """A type table block is missing entries or keys them badly."""
