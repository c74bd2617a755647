"""Exception hierarchy shared by every module."""

__all__ = [
    "EdgeSpecError",
    "GraphError",
    "LoopEdge",
    "DuplicateEdge",
    "Disconnected",
    "EmptyGraph",
    "NotPruned",
    "EmptyAfterPrune",
    "DimensionMismatch",
    "ZeroParameter",
    "ExceptionalParameter",
    "RadiusTooSmall",
    "TooDeep",
    "InconsistentInput",
    "NotClosed",
    "NotReduced",
    "DomainTooSmall",
    "BadSymbol",
    "MixedQ",
    "InsufficientMargin",
    "ParseError",
    "BadParams",
]


class EdgeSpecError(Exception):
    """Base class for all library errors."""


class GraphError(EdgeSpecError):
    pass


class LoopEdge(GraphError):
    pass


class DuplicateEdge(GraphError):
    pass


class Disconnected(GraphError):
    pass


class EmptyGraph(GraphError):
    pass


class NotPruned(GraphError):
    pass


class EmptyAfterPrune(GraphError):
    pass


class DimensionMismatch(EdgeSpecError):
    pass


class ZeroParameter(EdgeSpecError):
    pass


class ExceptionalParameter(EdgeSpecError):
    pass


class RadiusTooSmall(EdgeSpecError):
    pass


class TooDeep(EdgeSpecError):
    pass


class InconsistentInput(EdgeSpecError):
    pass


class NotClosed(EdgeSpecError):
    pass


class NotReduced(EdgeSpecError):
    pass


class DomainTooSmall(EdgeSpecError):
    pass


class BadSymbol(EdgeSpecError):
    pass


class MixedQ(EdgeSpecError):
    pass


class InsufficientMargin(EdgeSpecError):
    pass


class ParseError(EdgeSpecError):
    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class BadParams(EdgeSpecError):
    pass
