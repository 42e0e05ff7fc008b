"""Exception taxonomy. Every failure the toolkit can signal is a subclass of
ExGraphError so callers (CLI, service) can catch one type and report
structured diagnostics."""


class ExGraphError(Exception):
    """Base class for all toolkit errors."""


class MalformedSurface(ExGraphError):
    """Surface string does not match the graph grammar."""


class UnknownStance(ExGraphError):
    """Stance token outside {support, counter}."""


class UnknownAnswer(ExGraphError):
    """Answer token outside {a, b}."""


class UnknownRelation(ExGraphError):
    """Relation outside the closed vocabulary (strict mode only)."""


class FormatMismatch(ExGraphError):
    """Graph label kind incompatible with the requested surface format."""


class EmptyGraph(ExGraphError):
    """Operation requires a graph with at least one triple."""


class ScorerFailure(ExGraphError):
    """External edge scorer unavailable or returned garbage."""


class OracleFailure(ExGraphError):
    """Confidence oracle raised or returned an out-of-range value."""


class IdMismatch(ExGraphError):
    """Prediction and gold files do not align on sample ids."""


class NonFiniteReward(ExGraphError):
    """Reward aggregation received NaN or infinity."""


class LengthMismatch(ExGraphError):
    """Paired log-probability sequences differ in length."""


class SearchBudgetExceeded(ExGraphError):
    """Exact GED search exceeded its node-expansion budget."""


class DivergenceDetected(ExGraphError):
    """Sandbox training produced non-finite parameters.

    Carries the partial trace recorded up to the failing iteration.
    """

    def __init__(self, message, trace=None):
        super().__init__(message)
        self.trace = trace


class IncompleteTrace(ExGraphError):
    """Hacking probe needs two completed training traces."""
