"""Exception types shared across the package."""


class FlowcalcError(Exception):
    """Base class for all flowcalc errors."""


class PartialOrderViolation(FlowcalcError):
    """The given relation is not a partial order (a cycle was detected)."""


class NotComparable(FlowcalcError):
    """Chain length was requested for an incomparable pair."""


class NotBounded(FlowcalcError):
    """The poset has no distinct global bottom and top."""


class CapMismatch(FlowcalcError):
    """Two truncated simplicial sets with different caps were combined."""


class EmptyComplex(FlowcalcError):
    """Contractibility was asked of the empty simplicial set."""


class DegreeOutOfRange(FlowcalcError):
    """Homology was requested in a degree the truncated complex cannot answer."""


class UnknownState(FlowcalcError):
    """A state id does not belong to the flow."""


class MalformedFlow(FlowcalcError):
    """Composition or face data violates the flow axioms."""


class NotLoopless(FlowcalcError):
    """A construction required a loopless flow, or created a state cycle."""


class NotJoinable(FlowcalcError):
    """join() needs a unique final state on the left and a unique initial state on the right."""


class NotABall(FlowcalcError):
    """The flow is not a full directed ball."""


class NotAnInclusion(FlowcalcError):
    """A chain link for the sequential colimit is not levelwise injective."""


class MalformedSubdivision(FlowcalcError):
    """The comparison morphism of a subdivision is not injective on states."""


class BudgetExceeded(FlowcalcError):
    """Word enumeration passed the configured ceiling for some endpoint pair."""


class ParseError(FlowcalcError):
    """Bad input text; carries line and column information."""

    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        if line is not None:
            message = f"line {line}" + (f", column {column}" if column is not None else "") + f": {message}"
        super().__init__(message)
