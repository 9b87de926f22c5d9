"""Exception types raised across the package."""


class DagPartError(Exception):
    """Base class for all package errors."""


class CycleError(DagPartError):
    """The graph (or a dependency subgraph) contains a directed cycle."""


class InfeasibleSplit(DagPartError):
    """No consecutive split of a topological order satisfies the balance bound."""


class MismatchedGraph(DagPartError):
    """Two partitions were built over different edge universes."""


class PopulationTooSmall(DagPartError):
    pass


class EmptyInstance(DagPartError):
    pass


class MissingValue(DagPartError):
    pass


class ParseError(DagPartError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class DanglingEdge(ParseError):
    """A successor id points outside ``[1, n]``."""
